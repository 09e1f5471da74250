#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace arm::cli {

/// key=value run record. The arg.N entries hold the exact command line, which
/// is what `arm replay` re-executes.
class Manifest {
public:
  void set(const std::string& key, const std::string& value);
  void set(const std::string& key, double value);
  void set(const std::string& key, long long value);
  void set(const std::string& key, int value) { set(key, static_cast<long long>(value)); }
  void set(const std::string& key, bool value) { set(key, std::string(value ? "true" : "false")); }
  void set(const std::string& key, const char* value) { set(key, std::string(value)); }

  void set_args(const std::vector<std::string>& args);
  std::vector<std::string> args() const;

  std::optional<std::string> get(const std::string& key) const;
  const std::vector<std::pair<std::string, std::string>>& entries() const noexcept { return entries_; }

  void write(const std::filesystem::path& path) const;
  static Manifest read(const std::filesystem::path& path);

private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

}  // namespace arm::cli
