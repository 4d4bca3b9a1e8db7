#include "usikit/patterns.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "usikit/error.hpp"
#include "usikit/text.hpp"

namespace usikit {
namespace {

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("patterns", path.string() + ": cannot read");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  if (in.bad()) throw Error("patterns", path.string() + ": read error");
  return lines;
}

std::string read_all(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("patterns", path.string() + ": cannot read");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void fnv1a(std::uint64_t& h, std::string_view bytes) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
}

bool contains_phrase(const std::vector<std::string>& runs, const std::vector<std::string>& phrase) {
  if (phrase.empty() || phrase.size() > runs.size()) return false;
  return std::search(runs.begin(), runs.end(), phrase.begin(), phrase.end()) != runs.end();
}

}  // namespace

std::string_view question_class_name(QuestionClass c) {
  switch (c) {
    case QuestionClass::pushback: return "pushback";
    case QuestionClass::clarification: return "clarification";
    case QuestionClass::info_seeking: return "info_seeking";
    case QuestionClass::none: return "none";
  }
  return "none";
}

PreparedText::PreparedText(std::string_view text)
    : runs(text::alnum_runs(text)), pattern_text(text::ascii_quotes(text)) {}

PatternRegistry PatternRegistry::load(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw Error("patterns", dir.string() + ": not a pattern directory");

  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const auto ext = entry.path().extension();
    if (ext == ".lex" || ext == ".pat") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());

  std::map<std::string, std::vector<std::string>> lexicons;
  std::map<std::string, std::vector<std::string>> patterns;
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (const auto& file : files) {
    const std::string category = file.stem().string();
    fnv1a(hash, file.filename().string());
    fnv1a(hash, std::string_view("\0", 1));
    fnv1a(hash, read_all(file));
    auto& sink = file.extension() == ".lex" ? lexicons[category] : patterns[category];
    for (const auto& raw : read_lines(file)) {
      std::string line = text::trim(raw);
      if (line.empty()) continue;
      // Comments are only recognized in lexicons; '#' is meaningful in regexes.
      if (file.extension() == ".lex" && line.front() == '#') continue;
      sink.push_back(std::move(line));
    }
  }

  PatternRegistry registry;
  try {
    registry.build(std::move(lexicons), std::move(patterns));
  } catch (const Error& e) {
    throw Error("patterns", dir.string() + ": " + e.message());
  }
  std::ostringstream fp;
  fp << std::hex << std::setw(16) << std::setfill('0') << hash;
  registry.fingerprint_ = fp.str();
  if (fs::exists(dir / "VERSION")) registry.version_ = text::trim(read_all(dir / "VERSION"));
  return registry;
}

PatternRegistry PatternRegistry::from_tables(std::map<std::string, std::vector<std::string>> lexicons,
                                             std::map<std::string, std::vector<std::string>> patterns) {
  PatternRegistry registry;
  registry.build(std::move(lexicons), std::move(patterns));
  registry.fingerprint_ = "in-memory";
  return registry;
}

void PatternRegistry::build(std::map<std::string, std::vector<std::string>> lexicons,
                            std::map<std::string, std::vector<std::string>> patterns) {
  for (auto category : kLexiconCategories) {
    auto it = lexicons.find(std::string(category));
    if (it == lexicons.end()) {
      throw Error("patterns", "missing required category '" + std::string(category) + "' (" +
                                  std::string(category) + ".lex)");
    }
    if (it->second.empty()) throw Error("patterns", "category '" + std::string(category) + "' has no terms");
  }
  for (auto category : kPatternCategories) {
    auto it = patterns.find(std::string(category));
    if (it == patterns.end()) {
      throw Error("patterns", "missing required category '" + std::string(category) + "' (" +
                                  std::string(category) + ".pat)");
    }
    if (it->second.empty()) throw Error("patterns", "category '" + std::string(category) + "' has no patterns");
  }

  for (auto& [category, terms] : lexicons) {
    auto& stored = lexicon_terms_[category];
    auto& phrases = lexicon_phrases_[category];
    for (const auto& term : terms) {
      const std::string normalized = text::collapse_whitespace(text::fold_case(text::nfc(term)));
      auto runs = text::alnum_runs(normalized);
      if (runs.empty()) {
        throw Error("patterns", "term '" + term + "' in category '" + category + "' has no word characters");
      }
      if (stored.insert(normalized).second) phrases.push_back(std::move(runs));
    }
  }
  for (auto& [category, sources] : patterns) {
    std::vector<std::string> ascii;
    ascii.reserve(sources.size());
    for (const auto& s : sources) ascii.push_back(text::ascii_quotes(text::nfc(s)));
    try {
      compiled_.emplace(category, PatternList(ascii, std::regex::icase));
    } catch (const Error& e) {
      throw Error("patterns", "category '" + category + "': " + e.message());
    }
    pattern_sources_[category] = std::move(ascii);
  }
}

void PatternRegistry::require_category(std::string_view category) const {
  if (!has_category(category)) throw Error("patterns", "unknown category '" + std::string(category) + "'");
}

bool PatternRegistry::has_category(std::string_view category) const {
  return lexicon_phrases_.find(category) != lexicon_phrases_.end() || compiled_.find(category) != compiled_.end();
}

std::vector<std::string> PatternRegistry::categories() const {
  std::set<std::string> names;
  for (const auto& [k, _] : lexicon_terms_) names.insert(k);
  for (const auto& [k, _] : pattern_sources_) names.insert(k);
  return {names.begin(), names.end()};
}

bool PatternRegistry::contains(std::string_view text, std::string_view category) const {
  return contains(PreparedText(text), category);
}

bool PatternRegistry::contains(const PreparedText& text, std::string_view category) const {
  require_category(category);
  if (auto it = lexicon_phrases_.find(category); it != lexicon_phrases_.end()) {
    for (const auto& phrase : it->second) {
      if (contains_phrase(text.runs, phrase)) return true;
    }
  }
  if (auto it = compiled_.find(category); it != compiled_.end()) {
    if (it->second.any_search(text.pattern_text)) return true;
  }
  return false;
}

bool PatternRegistry::matches_only(std::string_view text, std::string_view category) const {
  return matches_only(PreparedText(text), category);
}

bool PatternRegistry::matches_only(const PreparedText& text, std::string_view category) const {
  require_category(category);
  if (auto it = lexicon_phrases_.find(category); it != lexicon_phrases_.end() && !text.runs.empty()) {
    for (const auto& phrase : it->second) {
      if (phrase == text.runs) return true;
    }
  }
  if (auto it = compiled_.find(category); it != compiled_.end()) {
    const std::string trimmed = text::trim(text.pattern_text);
    for (const auto& re : it->second.regexes()) {
      if (std::regex_match(trimmed, re)) return true;
    }
  }
  return false;
}

QuestionClass PatternRegistry::classify_question(std::string_view text) const {
  return classify_question(PreparedText(text));
}

QuestionClass PatternRegistry::classify_question(const PreparedText& text) const {
  if (contains(text, "pushback")) return QuestionClass::pushback;
  if (contains(text, "clarification")) return QuestionClass::clarification;
  if (contains(text, "info_seeking")) return QuestionClass::info_seeking;
  return QuestionClass::none;
}

std::size_t PatternRegistry::count_identifiers(std::string_view text) const {
  return count_identifiers(PreparedText(text));
}

std::size_t PatternRegistry::count_identifiers(const PreparedText& text) const {
  require_category("identifier");
  const auto& subject = text.pattern_text;
  std::vector<std::pair<std::size_t, std::size_t>> spans;  // (start, length)
  for (const auto& re : compiled_.find("identifier")->second.regexes()) {
    for (auto it = std::sregex_iterator(subject.begin(), subject.end(), re); it != std::sregex_iterator(); ++it) {
      if (it->length(0) > 0) {
        spans.emplace_back(static_cast<std::size_t>(it->position(0)), static_cast<std::size_t>(it->length(0)));
      }
    }
  }
  std::sort(spans.begin(), spans.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first < b.first : a.second > b.second;
  });
  std::size_t count = 0;
  std::size_t covered_until = 0;
  for (const auto& [start, length] : spans) {
    if (count > 0 && start < covered_until) continue;
    ++count;
    covered_until = start + length;
  }
  return count;
}

PatternRegistry load_registry(const std::filesystem::path& dir) { return PatternRegistry::load(dir); }

bool contains_category(std::string_view text, std::string_view category, const PatternRegistry& registry) {
  return registry.contains(text, category);
}

QuestionClass classify_question(std::string_view text, const PatternRegistry& registry) {
  return registry.classify_question(text);
}

}  // namespace usikit
