#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <regex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "usikit/survey_response.hpp"

namespace usikit {

enum class Role { user, agent, system };
enum class Domain { airline, retail, other };
enum class SourceKind { simulator, human_batch };

std::string_view role_name(Role role);
std::string_view domain_name(Domain domain);
std::string_view source_kind_name(SourceKind kind);

struct Turn {
  std::size_t index = 0;
  Role role = Role::user;
  std::string text;      // raw_text with markup stripped
  std::string raw_text;  // NFC-normalized input text

  friend bool operator==(const Turn&, const Turn&) = default;
};

struct SourceId {
  SourceKind kind = SourceKind::simulator;
  std::string name;

  friend bool operator==(const SourceId&, const SourceId&) = default;
  friend auto operator<=>(const SourceId&, const SourceId&) = default;
};

struct Interaction {
  std::string task_id;
  Domain domain = Domain::other;
  SourceId source;
  std::int64_t run_id = 0;
  std::vector<Turn> turns;
  std::optional<int> reward;
  std::optional<SurveyResponse> survey;

  friend bool operator==(const Interaction&, const Interaction&) = default;
};

// All interactions of one simulator or one human batch, sorted by
// (task_id, run_id) with no duplicate keys.
struct Corpus {
  SourceId source;
  std::vector<Interaction> interactions;

  const Interaction* find(std::string_view task_id, std::int64_t run_id) const;

  friend bool operator==(const Corpus&, const Corpus&) = default;
};

struct FilterConfig {
  // A turn whose trimmed text matches any of these (regex search) is dropped.
  std::vector<std::string> meta_patterns;
  // Every match of these is cut out of turn text before tokenization.
  std::vector<std::string> markup_patterns;

  static FilterConfig defaults();
};

// Precompiled list of ECMAScript regexes.
class PatternList {
 public:
  PatternList() = default;
  // Throws Error naming the offending pattern when one does not compile.
  explicit PatternList(std::span<const std::string> patterns,
                       std::regex::flag_type extra = std::regex::flag_type{});

  bool any_search(std::string_view text) const;
  bool empty() const { return regexes_.empty(); }
  const std::vector<std::string>& sources() const { return sources_; }
  const std::vector<std::regex>& regexes() const { return regexes_; }

 private:
  std::vector<std::string> sources_;
  std::vector<std::regex> regexes_;
};

// Removes every maximal match of any pattern, collapses whitespace, and
// repeats until the text is stable, so the result is a fixed point.
std::string strip_markup(std::string_view text, const PatternList& patterns);
std::string strip_markup(std::string_view text, std::span<const std::string> patterns);

std::vector<Turn> user_turns(const Interaction& interaction);

// Accepts a single file or a directory; directories contribute every
// *.jsonl file in lexicographic filename order.
Corpus load_corpus(const std::filesystem::path& path, const FilterConfig& filter);

// Parses transcript records from a stream. `origin` names the input in errors.
Corpus parse_corpus(std::istream& in, std::string_view origin, const FilterConfig& filter);

// Writes one record per line in the transcript format using raw_text, so
// reloading with the same filter reproduces the corpus.
void write_corpus(std::ostream& out, const Corpus& corpus);

}  // namespace usikit
