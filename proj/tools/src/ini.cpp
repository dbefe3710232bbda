#include "abwave/tools/ini.hpp"

#include <fstream>
#include <sstream>

#include "abwave/tools/errors.hpp"

namespace abwave::tools {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string strip_comment(const std::string& s) {
  for (std::size_t i = 0; i < s.size(); ++i) {
    if ((s[i] == '#' || s[i] == ';') && (i == 0 || s[i - 1] == ' ' || s[i - 1] == '\t')) {
      return s.substr(0, i);
    }
  }
  return s;
}

}  // namespace

ConfigError::ConfigError(const std::string& message, std::string file,
                         std::size_t line, std::string field)
    : std::runtime_error([&] {
        std::ostringstream out;
        if (!file.empty()) {
          out << file;
          if (line > 0) out << ':' << line;
          out << ": ";
        }
        if (!field.empty()) out << field << ": ";
        out << message;
        return out.str();
      }()),
      file_(std::move(file)),
      line_(line),
      field_(std::move(field)) {}

IoError::IoError(const std::string& message, std::string path)
    : std::runtime_error(path.empty() ? message : path + ": " + message),
      path_(std::move(path)) {}

const IniEntry* IniSection::find(const std::string& key) const {
  for (const auto& e : entries) {
    if (e.key == key) return &e;
  }
  return nullptr;
}

const IniSection* IniDocument::section(const std::string& name) const {
  for (const auto& s : sections_) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

IniDocument IniDocument::parse(const std::string& text, const std::string& source) {
  IniDocument doc;
  doc.source_ = source;
  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
  IniSection* current = nullptr;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError("unterminated section header", source, line_no);
      }
      const std::string name = trim(line.substr(1, line.size() - 2));
      if (name.empty()) throw ConfigError("empty section name", source, line_no);
      if (doc.section(name) != nullptr) {
        throw ConfigError("duplicate section [" + name + "]", source, line_no);
      }
      doc.sections_.push_back(IniSection{name, line_no, {}});
      current = &doc.sections_.back();
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("expected 'key = value'", source, line_no);
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("missing key before '='", source, line_no);
    if (current == nullptr) {
      throw ConfigError("key outside of any [section]", source, line_no, key);
    }
    if (current->find(key) != nullptr) {
      throw ConfigError("duplicate key", source, line_no, current->name + "." + key);
    }
    current->entries.push_back(IniEntry{key, value, line_no});
  }
  return doc;
}

IniDocument IniDocument::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open configuration file", path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoError("error while reading configuration file", path);
  return parse(buffer.str(), path);
}

}  // namespace abwave::tools
