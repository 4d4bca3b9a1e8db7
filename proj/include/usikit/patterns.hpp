#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "usikit/corpus.hpp"

namespace usikit {

enum class QuestionClass { pushback, clarification, info_seeking, none };

std::string_view question_class_name(QuestionClass c);

// Categories the shipped metrics read. Lexicon categories live in
// <name>.lex files, pattern categories in <name>.pat files.
inline constexpr std::string_view kLexiconCategories[] = {
    "politeness", "acknowledgment", "uncertainty", "certainty",
    "emotion",    "accusation",     "pivot",       "id_confusion",
};
inline constexpr std::string_view kPatternCategories[] = {
    "pushback", "clarification", "info_seeking", "identifier", "formal_dash",
};

// A turn prepared once for repeated category lookups: case-folded
// alphanumeric runs for lexicons, ASCII-quoted text for regexes.
struct PreparedText {
  explicit PreparedText(std::string_view text);

  std::vector<std::string> runs;
  std::string pattern_text;
};

// Lexicons and regex pattern sets used by feature extraction. Immutable after
// load and safe to share between threads.
class PatternRegistry {
 public:
  // Reads every *.lex and *.pat file in `dir`. Throws when a required
  // category is missing, a file is unreadable, or a pattern does not compile.
  static PatternRegistry load(const std::filesystem::path& dir);

  // Builds a registry from in-memory tables; same validation as load().
  static PatternRegistry from_tables(
      std::map<std::string, std::vector<std::string>> lexicons,
      std::map<std::string, std::vector<std::string>> patterns);

  // Whole-word, case-insensitive lexicon hit or regex hit in `category`.
  bool contains(std::string_view text, std::string_view category) const;
  bool contains(const PreparedText& text, std::string_view category) const;

  // True when the turn's words are exactly one term of `category`, ignoring
  // punctuation and case ("Ok." is acknowledgment-only, "ok thanks" is not).
  bool matches_only(std::string_view text, std::string_view category) const;
  bool matches_only(const PreparedText& text, std::string_view category) const;

  // First match in priority order pushback -> clarification -> info_seeking.
  QuestionClass classify_question(std::string_view text) const;
  QuestionClass classify_question(const PreparedText& text) const;

  // Leftmost-longest, non-overlapping matches across all identifier patterns.
  std::size_t count_identifiers(std::string_view text) const;
  std::size_t count_identifiers(const PreparedText& text) const;

  bool has_category(std::string_view category) const;
  std::vector<std::string> categories() const;

  const std::map<std::string, std::set<std::string>>& lexicons() const { return lexicon_terms_; }
  const std::map<std::string, std::vector<std::string>>& patterns() const { return pattern_sources_; }

  // Contents of a VERSION file in the data directory ("unversioned" if none).
  const std::string& version() const { return version_; }
  // FNV-1a over all category files, hex encoded.
  const std::string& fingerprint() const { return fingerprint_; }

 private:
  using Phrase = std::vector<std::string>;

  void build(std::map<std::string, std::vector<std::string>> lexicons,
             std::map<std::string, std::vector<std::string>> patterns);
  void require_category(std::string_view category) const;

  std::map<std::string, std::set<std::string>> lexicon_terms_;
  std::map<std::string, std::vector<Phrase>, std::less<>> lexicon_phrases_;
  std::map<std::string, std::vector<std::string>> pattern_sources_;
  std::map<std::string, PatternList, std::less<>> compiled_;
  std::string version_ = "unversioned";
  std::string fingerprint_;
};

PatternRegistry load_registry(const std::filesystem::path& dir);

// Throws Error on an unknown category.
bool contains_category(std::string_view text, std::string_view category,
                       const PatternRegistry& registry);

QuestionClass classify_question(std::string_view text, const PatternRegistry& registry);

}  // namespace usikit
