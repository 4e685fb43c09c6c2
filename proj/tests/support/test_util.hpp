#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "xwacoda/store.hpp"

namespace xwacoda::testkit {

/// Directory holding the MINI fixture.
std::filesystem::path mini_dir();

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag = "xwacoda");
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

void write_text(const std::filesystem::path& path, const std::string& text);

/// Writes the model document and every fact and dimension document.
void write_warehouse(const std::filesystem::path& dir, const WarehouseContents& contents);

/// Copies the MINI fixture into `dir`.
void copy_mini(const std::filesystem::path& dir);

}  // namespace xwacoda::testkit
