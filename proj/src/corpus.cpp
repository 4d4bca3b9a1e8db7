#include "usikit/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "usikit/error.hpp"
#include "usikit/text.hpp"

namespace usikit {
namespace {

using nlohmann::json;

[[noreturn]] void fail(std::string_view origin, std::size_t line, const std::string& message) {
  std::ostringstream os;
  os << origin << ':' << line << ": " << message;
  throw Error("corpus", os.str());
}

Role parse_role(std::string_view s, std::string_view origin, std::size_t line) {
  if (s == "user") return Role::user;
  if (s == "agent") return Role::agent;
  if (s == "system") return Role::system;
  fail(origin, line, "unknown role '" + std::string(s) + "'");
}

Domain parse_domain(std::string_view s) {
  if (s == "airline") return Domain::airline;
  if (s == "retail") return Domain::retail;
  return Domain::other;
}

const json& require(const json& obj, const char* key, std::string_view origin, std::size_t line) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(origin, line, std::string("missing field '") + key + "'");
  return *it;
}

std::string require_string(const json& obj, const char* key, std::string_view origin, std::size_t line) {
  const json& v = require(obj, key, origin, line);
  if (!v.is_string()) fail(origin, line, std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

SurveyResponse parse_survey(const json& obj, std::string_view origin, std::size_t line) {
  if (!obj.is_object()) fail(origin, line, "survey must be an object or null");
  SurveyResponse survey;
  for (const auto& [key, value] : obj.items()) {
    if (key == "free_text") {
      if (!value.is_array() || value.size() > 2) fail(origin, line, "survey.free_text must be an array of at most two strings");
      for (std::size_t i = 0; i < value.size(); ++i) {
        if (!value[i].is_string()) fail(origin, line, "survey.free_text entries must be strings");
        survey.free_text[i] = value[i].get<std::string>();
      }
      continue;
    }
    const auto field = survey_field_from_name(key);
    if (!field) fail(origin, line, "unknown survey field '" + key + "'");
    if (value.is_null()) continue;
    if (!value.is_number_integer()) fail(origin, line, "survey." + key + " must be an integer option index");
    const auto option = value.get<std::int64_t>();
    if (option < 0 || option >= static_cast<std::int64_t>(survey_option_count(*field))) {
      fail(origin, line, "survey." + key + " option " + std::to_string(option) + " out of range [0," +
                             std::to_string(survey_option_count(*field)) + ")");
    }
    survey[*field] = static_cast<int>(option);
  }
  return survey;
}

json survey_to_json(const SurveyResponse& survey) {
  json obj = json::object();
  for (SurveyField f : kSurveyFields) {
    const auto& v = survey[f];
    obj[std::string(survey_field_name(f))] = v ? json(*v) : json(nullptr);
  }
  obj["free_text"] = json::array({survey.free_text[0], survey.free_text[1]});
  return obj;
}

struct RecordContext {
  const FilterConfig& filter;
  PatternList meta;
  PatternList markup;
};

Interaction parse_record(const json& rec, std::string_view origin, std::size_t line, const RecordContext& ctx) {
  if (!rec.is_object()) fail(origin, line, "record must be a JSON object");
  Interaction it;
  it.task_id = require_string(rec, "task_id", origin, line);
  if (it.task_id.empty()) fail(origin, line, "task_id must be nonempty");
  if (auto d = rec.find("domain"); d != rec.end() && !d->is_null()) {
    if (!d->is_string()) fail(origin, line, "field 'domain' must be a string");
    it.domain = parse_domain(d->get<std::string>());
  }
  const std::string kind = require_string(rec, "source_kind", origin, line);
  if (kind == "simulator") {
    it.source.kind = SourceKind::simulator;
  } else if (kind == "human_batch") {
    it.source.kind = SourceKind::human_batch;
  } else {
    fail(origin, line, "source_kind must be \"simulator\" or \"human_batch\"");
  }
  it.source.name = require_string(rec, "source_name", origin, line);
  if (it.source.name.empty()) fail(origin, line, "source_name must be nonempty");

  const json& run = require(rec, "run_id", origin, line);
  if (!run.is_number_integer()) fail(origin, line, "run_id must be an integer");
  it.run_id = run.get<std::int64_t>();

  if (auto r = rec.find("reward"); r != rec.end() && !r->is_null()) {
    if (!r->is_number_integer() || (r->get<std::int64_t>() != 0 && r->get<std::int64_t>() != 1)) {
      fail(origin, line, "reward must be 0, 1 or null");
    }
    it.reward = static_cast<int>(r->get<std::int64_t>());
  }
  if (auto s = rec.find("survey"); s != rec.end() && !s->is_null()) {
    it.survey = parse_survey(*s, origin, line);
  }

  const json& turns = require(rec, "turns", origin, line);
  if (!turns.is_array()) fail(origin, line, "turns must be an array");
  for (const json& t : turns) {
    if (!t.is_object()) fail(origin, line, "turn must be an object");
    const Role role = parse_role(require_string(t, "role", origin, line), origin, line);
    Turn turn;
    turn.role = role;
    turn.raw_text = text::nfc(require_string(t, "text", origin, line));
    turn.text = strip_markup(turn.raw_text, ctx.markup);
    if (ctx.meta.any_search(turn.text)) continue;
    turn.index = it.turns.size();
    it.turns.push_back(std::move(turn));
  }
  const bool has_user = std::any_of(it.turns.begin(), it.turns.end(),
                                    [](const Turn& t) { return t.role == Role::user; });
  if (!has_user) fail(origin, line, "interaction '" + it.task_id + "' has no user turn after filtering");
  return it;
}

void parse_stream(std::istream& in, std::string_view origin, const RecordContext& ctx,
                  std::vector<Interaction>& out) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::parse_error& e) {
      fail(origin, line_no, std::string("malformed record: ") + e.what());
    }
    out.push_back(parse_record(rec, origin, line_no, ctx));
  }
}

Corpus finish(std::vector<Interaction> interactions, std::string_view origin) {
  if (interactions.empty()) throw Error("corpus", std::string(origin) + ": no interactions");
  Corpus corpus;
  corpus.source = interactions.front().source;
  for (const auto& it : interactions) {
    if (it.source != corpus.source) {
      throw Error("corpus", std::string(origin) + ": mixed sources '" + corpus.source.name + "' and '" +
                                it.source.name + "' in one corpus");
    }
  }
  std::stable_sort(interactions.begin(), interactions.end(), [](const Interaction& a, const Interaction& b) {
    return std::tie(a.task_id, a.run_id) < std::tie(b.task_id, b.run_id);
  });
  for (std::size_t i = 1; i < interactions.size(); ++i) {
    if (interactions[i - 1].task_id == interactions[i].task_id &&
        interactions[i - 1].run_id == interactions[i].run_id) {
      throw Error("corpus", std::string(origin) + ": duplicate (task_id, run_id) = (" +
                                interactions[i].task_id + ", " + std::to_string(interactions[i].run_id) + ")");
    }
  }
  corpus.interactions = std::move(interactions);
  return corpus;
}

}  // namespace

std::string_view role_name(Role role) {
  switch (role) {
    case Role::user: return "user";
    case Role::agent: return "agent";
    case Role::system: return "system";
  }
  return "user";
}

std::string_view domain_name(Domain domain) {
  switch (domain) {
    case Domain::airline: return "airline";
    case Domain::retail: return "retail";
    case Domain::other: return "other";
  }
  return "other";
}

std::string_view source_kind_name(SourceKind kind) {
  return kind == SourceKind::simulator ? "simulator" : "human_batch";
}

const Interaction* Corpus::find(std::string_view task_id, std::int64_t run_id) const {
  auto it = std::lower_bound(interactions.begin(), interactions.end(), std::pair{task_id, run_id},
                             [](const Interaction& a, const auto& key) {
                               return std::pair<std::string_view, std::int64_t>{a.task_id, a.run_id} < key;
                             });
  if (it == interactions.end() || it->task_id != task_id || it->run_id != run_id) return nullptr;
  return &*it;
}

FilterConfig FilterConfig::defaults() {
  FilterConfig f;
  f.meta_patterns = {
      R"(^/stop$)",
      R"(^\[survey)",
      R"(^\[log)",
  };
  f.markup_patterns = {
      // <tool>...</tool>, <function_call ...>...</function_call>, ...
      R"(<(tool|function|tool_call|function_call|tool_result|function_result)\b[^>]*>[\s\S]*?</\1>)",
      // ```tool ... ``` / ```function ... ```
      R"(```(tool|function|tool_call|function_call|tool_result)[^\n]*\n[\s\S]*?```)",
      // [tool_call: ...], [function: ...], [trace ...]
      R"(\[(tool|function|trace)[^\]]*\])",
  };
  return f;
}

PatternList::PatternList(std::span<const std::string> patterns, std::regex::flag_type extra) {
  sources_.assign(patterns.begin(), patterns.end());
  regexes_.reserve(patterns.size());
  for (const auto& p : patterns) {
    try {
      regexes_.emplace_back(p, std::regex::ECMAScript | extra);
    } catch (const std::regex_error& e) {
      throw Error("patterns", "pattern does not compile: '" + p + "' (" + e.what() + ")");
    }
  }
}

bool PatternList::any_search(std::string_view text) const {
  return std::any_of(regexes_.begin(), regexes_.end(), [&](const std::regex& re) {
    return std::regex_search(text.begin(), text.end(), re);
  });
}

namespace {

std::string replace_nonempty(const std::string& s, const std::regex& re) {
  std::string out;
  std::size_t last = 0;
  for (auto it = std::sregex_iterator(s.begin(), s.end(), re); it != std::sregex_iterator(); ++it) {
    if (it->length(0) == 0) continue;
    const auto pos = static_cast<std::size_t>(it->position(0));
    out.append(s, last, pos - last);
    out.push_back(' ');
    last = pos + static_cast<std::size_t>(it->length(0));
  }
  out.append(s, last, std::string::npos);
  return out;
}

}  // namespace

std::string strip_markup(std::string_view input, const PatternList& patterns) {
  // Patterns see the original line breaks; whitespace is collapsed once at the
  // end. Removing one block can expose another, so repeat until stable.
  // Empty matches are skipped, so every change either shortens the text or
  // turns a non-space byte into a space and the loop terminates.
  std::string current(input);
  for (;;) {
    std::string next = current;
    for (const auto& re : patterns.regexes()) next = replace_nonempty(next, re);
    if (next == current) return text::collapse_whitespace(current);
    current = std::move(next);
  }
}

std::string strip_markup(std::string_view text, std::span<const std::string> patterns) {
  return strip_markup(text, PatternList(patterns));
}

std::vector<Turn> user_turns(const Interaction& interaction) {
  std::vector<Turn> out;
  for (const auto& t : interaction.turns) {
    if (t.role == Role::user) out.push_back(t);
  }
  return out;
}

Corpus parse_corpus(std::istream& in, std::string_view origin, const FilterConfig& filter) {
  RecordContext ctx{filter, PatternList(filter.meta_patterns), PatternList(filter.markup_patterns)};
  std::vector<Interaction> interactions;
  parse_stream(in, origin, ctx, interactions);
  return finish(std::move(interactions), origin);
}

Corpus load_corpus(const std::filesystem::path& path, const FilterConfig& filter) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::exists(path, ec)) throw Error("corpus", path.string() + ": no such file or directory");

  std::vector<fs::path> files;
  if (fs::is_directory(path)) {
    for (const auto& entry : fs::directory_iterator(path)) {
      if (entry.is_regular_file() && entry.path().extension() == ".jsonl") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
  } else {
    files.push_back(path);
  }

  RecordContext ctx{filter, PatternList(filter.meta_patterns), PatternList(filter.markup_patterns)};
  std::vector<Interaction> interactions;
  for (const auto& file : files) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw Error("corpus", file.string() + ": cannot open");
    parse_stream(in, file.string(), ctx, interactions);
  }
  return finish(std::move(interactions), path.string());
}

void write_corpus(std::ostream& out, const Corpus& corpus) {
  for (const auto& it : corpus.interactions) {
    json rec = json::object();
    rec["task_id"] = it.task_id;
    rec["domain"] = std::string(domain_name(it.domain));
    rec["source_kind"] = std::string(source_kind_name(it.source.kind));
    rec["source_name"] = it.source.name;
    rec["run_id"] = it.run_id;
    rec["reward"] = it.reward ? json(*it.reward) : json(nullptr);
    json turns = json::array();
    for (const auto& t : it.turns) {
      turns.push_back(json{{"role", std::string(role_name(t.role))}, {"text", t.raw_text}});
    }
    rec["turns"] = std::move(turns);
    rec["survey"] = it.survey ? survey_to_json(*it.survey) : json(nullptr);
    out << rec.dump() << '\n';
  }
}

}  // namespace usikit
