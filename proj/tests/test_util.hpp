#pragma once

#include <filesystem>
#include <initializer_list>
#include <sstream>
#include <string>
#include <utility>

#include "usikit/corpus.hpp"
#include "usikit/patterns.hpp"

namespace usikit::testing {

inline std::filesystem::path data_dir() { return USIKIT_TEST_DATA; }

inline const PatternRegistry& shipped() {
  static const PatternRegistry registry = PatternRegistry::load(USIKIT_DEFAULT_PATTERNS);
  return registry;
}

// User/agent turns from (role, text) pairs, without filtering.
inline Interaction interaction(std::initializer_list<std::pair<Role, std::string>> turns,
                               std::string task = "t1") {
  Interaction it;
  it.task_id = std::move(task);
  it.source = {SourceKind::simulator, "test"};
  for (const auto& [role, text] : turns) {
    Turn t;
    t.index = it.turns.size();
    t.role = role;
    t.text = t.raw_text = text;
    it.turns.push_back(std::move(t));
  }
  return it;
}

inline Interaction user_only(std::initializer_list<std::string> texts, std::string task = "t1") {
  Interaction it;
  it.task_id = std::move(task);
  it.source = {SourceKind::simulator, "test"};
  for (const auto& text : texts) {
    Turn t;
    t.index = it.turns.size();
    t.role = Role::user;
    t.text = t.raw_text = text;
    it.turns.push_back(std::move(t));
  }
  return it;
}

inline Corpus parse(const std::string& jsonl, const FilterConfig& filter = FilterConfig::defaults()) {
  std::istringstream in(jsonl);
  return parse_corpus(in, "test.jsonl", filter);
}

}  // namespace usikit::testing
