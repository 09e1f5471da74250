#include "manifest.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace arm::cli {

void Manifest::set(const std::string& key, const std::string& value) {
  if (key.find('=') != std::string::npos || key.find('\n') != std::string::npos)
    throw std::invalid_argument("invalid manifest key '" + key + "'");
  if (value.find('\n') != std::string::npos)
    throw std::invalid_argument("manifest value for '" + key + "' contains a newline");
  for (auto& [k, v] : entries_) {
    if (k == key) {
      v = value;
      return;
    }
  }
  entries_.emplace_back(key, value);
}

void Manifest::set(const std::string& key, double value) {
  // Shortest text that reads back to the same double.
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  set(key, std::string(buf, res.ptr));
}

void Manifest::set(const std::string& key, long long value) { set(key, std::to_string(value)); }

void Manifest::set_args(const std::vector<std::string>& args) {
  set("argc", static_cast<long long>(args.size()));
  for (std::size_t i = 0; i < args.size(); ++i) set("arg." + std::to_string(i), args[i]);
}

std::vector<std::string> Manifest::args() const {
  const auto argc = get("argc");
  if (!argc) throw std::runtime_error("manifest has no recorded command line");
  const auto count = std::stoul(*argc);
  std::vector<std::string> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    auto v = get("arg." + std::to_string(i));
    if (!v) throw std::runtime_error("manifest is missing arg." + std::to_string(i));
    out.push_back(*v);
  }
  return out;
}

std::optional<std::string> Manifest::get(const std::string& key) const {
  for (const auto& [k, v] : entries_)
    if (k == key) return v;
  return std::nullopt;
}

void Manifest::write(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  for (const auto& [k, v] : entries_) out << k << '=' << v << '\n';
  if (!out) throw std::runtime_error("write to '" + path.string() + "' failed");
}

Manifest Manifest::read(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open manifest '" + path.string() + "'");
  Manifest m;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("manifest line " + std::to_string(lineno) + " is not key=value");
    m.entries_.emplace_back(line.substr(0, eq), line.substr(eq + 1));
  }
  return m;
}

}  // namespace arm::cli
