#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include "meedav/error.hpp"

namespace meedav::ingest {

/// Read-only view over a dataset tree. Paths are relative, '/'-separated.
class StorageBackend {
 public:
  virtual ~StorageBackend() = default;

  /// Every file in the tree, sorted.
  virtual std::vector<std::string> list_files() = 0;

  /// Exact bytes of one file; NotFound when absent.
  virtual std::string read(const std::string& path) = 0;

  virtual std::string describe() const = 0;
};

/// Files under a local directory.
class LocalBackend final : public StorageBackend {
 public:
  explicit LocalBackend(std::filesystem::path root) : root_(std::move(root)) {}

  std::vector<std::string> list_files() override {
    namespace fs = std::filesystem;
    std::error_code ec;
    if (!fs::is_directory(root_, ec))
      fail(ErrorCode::backend_unavailable, "dataset directory '" + root_.string() + "' is not readable");
    std::vector<std::string> out;
    fs::recursive_directory_iterator it(root_, fs::directory_options::skip_permission_denied, ec);
    if (ec) fail(ErrorCode::backend_unavailable, "cannot scan '" + root_.string() + "': " + ec.message());
    for (; it != fs::recursive_directory_iterator(); it.increment(ec)) {
      if (ec) fail(ErrorCode::backend_unavailable, "cannot scan '" + root_.string() + "': " + ec.message());
      if (it->is_regular_file(ec)) out.push_back(fs::relative(it->path(), root_, ec).generic_string());
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  std::string read(const std::string& path) override {
    std::ifstream in(root_ / path, std::ios::binary);
    if (!in) fail(ErrorCode::not_found, "cannot open '" + (root_ / path).string() + "'");
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  }

  std::string describe() const override { return "local:" + root_.string(); }

  const std::filesystem::path& root() const { return root_; }

 private:
  std::filesystem::path root_;
};

}  // namespace meedav::ingest
