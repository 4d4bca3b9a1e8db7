#include "usikit/config.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "usikit/error.hpp"
#include "usikit/text.hpp"

namespace usikit {
namespace {

class Parser {
 public:
  Parser(std::string_view s, std::string origin, std::size_t line) : s_(s), origin_(std::move(origin)), line_(line) {}

  [[noreturn]] void fail(const std::string& message) const {
    throw Error("config", origin_ + ":" + std::to_string(line_) + ": " + message);
  }

  void skip_ws() {
    while (pos_ < s_.size() && text::is_space(s_[pos_])) ++pos_;
  }
  bool at_end() {
    skip_ws();
    return pos_ >= s_.size();
  }
  bool consume(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  std::string key() {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == '"') return quoted();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_' ||
                                s_[pos_] == '-' || s_[pos_] == '.')) {
      ++pos_;
    }
    if (pos_ == start) fail("expected a key");
    return std::string(s_.substr(start, pos_ - start));
  }

  std::string quoted() {
    if (!consume('"')) fail("expected '\"'");
    std::string out;
    while (pos_ < s_.size() && s_[pos_] != '"') {
      char c = s_[pos_++];
      if (c == '\\' && pos_ < s_.size()) {
        const char e = s_[pos_++];
        switch (e) {
          case 'n': out.push_back('\n'); break;
          case 't': out.push_back('\t'); break;
          default: out.push_back(e); break;
        }
      } else {
        out.push_back(c);
      }
    }
    if (pos_ >= s_.size()) fail("unterminated string");
    ++pos_;
    return out;
  }

  ConfigFile::Value value() {
    skip_ws();
    if (pos_ >= s_.size()) fail("missing value");
    const char c = s_[pos_];
    if (c == '"') return quoted();
    if (c == '[') return array();
    if (s_.substr(pos_, 4) == "true") {
      pos_ += 4;
      return true;
    }
    if (s_.substr(pos_, 5) == "false") {
      pos_ += 5;
      return false;
    }
    return number();
  }

 private:
  ConfigFile::Value number() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && !text::is_space(s_[pos_]) && s_[pos_] != ',' && s_[pos_] != ']') ++pos_;
    const std::string token(s_.substr(start, pos_ - start));
    std::int64_t i = 0;
    auto [p, ec] = std::from_chars(token.data(), token.data() + token.size(), i);
    if (ec == std::errc() && p == token.data() + token.size()) return i;
    try {
      std::size_t used = 0;
      const double d = std::stod(token, &used);
      if (used == token.size()) return d;
    } catch (const std::exception&) {
    }
    fail("cannot parse value '" + token + "'");
  }

  ConfigFile::Value array() {
    consume('[');
    std::vector<std::string> strings;
    std::vector<double> numbers;
    if (consume(']')) return strings;
    for (;;) {
      auto v = value();
      if (auto* s = std::get_if<std::string>(&v)) {
        if (!numbers.empty()) fail("mixed array element types");
        strings.push_back(*s);
      } else if (auto* i = std::get_if<std::int64_t>(&v)) {
        if (!strings.empty()) fail("mixed array element types");
        numbers.push_back(static_cast<double>(*i));
      } else if (auto* d = std::get_if<double>(&v)) {
        if (!strings.empty()) fail("mixed array element types");
        numbers.push_back(*d);
      } else {
        fail("arrays may hold only strings or numbers");
      }
      if (consume(']')) break;
      if (!consume(',')) fail("expected ',' or ']' in array");
      if (consume(']')) break;  // trailing comma
    }
    if (!numbers.empty()) return numbers;
    return strings;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  std::string origin_;
  std::size_t line_;
};

std::string strip_comment(const std::string& line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '\\' && quoted) {
      ++i;
    } else if (line[i] == '"') {
      quoted = !quoted;
    } else if (line[i] == '#' && !quoted) {
      return line.substr(0, i);
    }
  }
  return line;
}

int bracket_depth(const std::string& s) {
  int depth = 0;
  bool quoted = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '\\' && quoted) ++i;
    else if (s[i] == '"') quoted = !quoted;
    else if (!quoted && s[i] == '[') ++depth;
    else if (!quoted && s[i] == ']') --depth;
  }
  return depth;
}

}  // namespace

ConfigFile ConfigFile::parse(const std::string& text, const std::string& origin) {
  ConfigFile cfg;
  cfg.origin_ = origin;
  std::istringstream in(text);
  std::string line;
  std::string section;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t start_line = line_no;
    std::string stmt = text::trim(strip_comment(line));
    if (stmt.empty()) continue;
    if (stmt.front() == '[' && stmt.find('=') == std::string::npos) {
      if (stmt.back() != ']') Parser(stmt, origin, start_line).fail("malformed section header");
      section = text::trim(stmt.substr(1, stmt.size() - 2));
      cfg.table_[section];
      continue;
    }
    // multi-line arrays
    while (bracket_depth(stmt) > 0 && std::getline(in, line)) {
      ++line_no;
      stmt += " " + text::trim(strip_comment(line));
    }
    Parser p(stmt, origin, start_line);
    const std::string key = p.key();
    if (!p.consume('=')) p.fail("expected '=' after key '" + key + "'");
    auto value = p.value();
    if (!p.at_end()) p.fail("trailing characters after value");
    auto& sec = cfg.table_[section];
    if (sec.count(key)) p.fail("duplicate key '" + key + "'");
    sec.emplace(key, std::move(value));
  }
  return cfg;
}

ConfigFile ConfigFile::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("config", path.string() + ": cannot open");
  std::ostringstream os;
  os << in.rdbuf();
  return parse(os.str(), path.string());
}

const std::map<std::string, ConfigFile::Value>* ConfigFile::section(const std::string& name) const {
  auto it = table_.find(name);
  return it == table_.end() ? nullptr : &it->second;
}

namespace {

const ConfigFile::Value* lookup(const ConfigFile& cfg, const std::string& section, const std::string& key) {
  const auto* sec = cfg.section(section);
  if (!sec) return nullptr;
  auto it = sec->find(key);
  return it == sec->end() ? nullptr : &it->second;
}

[[noreturn]] void type_error(const std::string& section, const std::string& key, const char* want) {
  throw Error("config", "[" + section + "] " + key + " must be " + want);
}

}  // namespace

std::optional<std::string> ConfigFile::get_string(const std::string& section, const std::string& key) const {
  const auto* v = lookup(*this, section, key);
  if (!v) return std::nullopt;
  if (const auto* s = std::get_if<std::string>(v)) return *s;
  type_error(section, key, "a string");
}

std::optional<std::int64_t> ConfigFile::get_int(const std::string& section, const std::string& key) const {
  const auto* v = lookup(*this, section, key);
  if (!v) return std::nullopt;
  if (const auto* i = std::get_if<std::int64_t>(v)) return *i;
  type_error(section, key, "an integer");
}

std::optional<std::vector<std::string>> ConfigFile::get_strings(const std::string& section,
                                                                const std::string& key) const {
  const auto* v = lookup(*this, section, key);
  if (!v) return std::nullopt;
  if (const auto* a = std::get_if<std::vector<std::string>>(v)) return *a;
  if (const auto* s = std::get_if<std::string>(v)) return std::vector<std::string>{*s};
  type_error(section, key, "an array of strings");
}

std::optional<std::vector<double>> ConfigFile::get_numbers(const std::string& section, const std::string& key) const {
  const auto* v = lookup(*this, section, key);
  if (!v) return std::nullopt;
  if (const auto* a = std::get_if<std::vector<double>>(v)) return *a;
  type_error(section, key, "an array of numbers");
}

}  // namespace usikit
