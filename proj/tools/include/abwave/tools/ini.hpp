#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace abwave::tools {

// Minimal INI reader: `[section]` headers, `key = value` lines, `#` or `;`
// comments on their own line or after whitespace. Keys outside a section
// are rejected, as are duplicate sections and duplicate keys.

struct IniEntry {
  std::string key;
  std::string value;
  std::size_t line = 0;
};

struct IniSection {
  std::string name;
  std::size_t line = 0;
  std::vector<IniEntry> entries;

  const IniEntry* find(const std::string& key) const;
};

class IniDocument {
 public:
  /// `source` names the text in error messages (usually the file path).
  static IniDocument parse(const std::string& text, const std::string& source);
  static IniDocument load(const std::string& path);

  const std::string& source() const { return source_; }
  const std::vector<IniSection>& sections() const { return sections_; }
  const IniSection* section(const std::string& name) const;

 private:
  std::string source_;
  std::vector<IniSection> sections_;
};

}  // namespace abwave::tools
