#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace abwave::tools {

/// Invalid or inconsistent configuration. Maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& message, std::string file = {},
              std::size_t line = 0, std::string field = {});

  const std::string& file() const { return file_; }
  std::size_t line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  std::string file_;
  std::size_t line_;
  std::string field_;
};

/// Reading or writing a file failed. Maps to exit code 4.
class IoError : public std::runtime_error {
 public:
  IoError(const std::string& message, std::string path);
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

}  // namespace abwave::tools
