#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "usikit/alignment.hpp"
#include "usikit/corpus.hpp"
#include "usikit/outcomes.hpp"
#include "usikit/patterns.hpp"
#include "usikit/surveys.hpp"

namespace usikit {

struct PipelineConfig {
  std::vector<std::filesystem::path> sim_paths;
  std::vector<std::filesystem::path> human_paths;
  std::filesystem::path patterns_dir;
  std::size_t bins = 5;
  SurveyMapping survey_mapping;
  JudgmentMapping judgment_mapping;
  CeilingScheme ceiling = CeilingScheme::pairwise;
  FilterConfig filter = FilterConfig::defaults();
  std::filesystem::path out_dir;
  // source name -> proprietary / open-source / specialized / custom
  std::map<std::string, std::string> categories;
  // Worker threads; never echoed into reports.
  std::size_t threads = 1;

  // Throws Error("cli", ...) naming the first missing path or bad value.
  void validate() const;
};

// Reads [run], [categories], [survey] and [filter] sections. Relative paths
// resolve against the config file's directory.
PipelineConfig load_pipeline_config(const std::filesystem::path& path);

// Provenance block embedded in every emitted report.
nlohmann::json config_echo(const PipelineConfig& config, const PatternRegistry& registry);

// Stage documents shared by the subcommands and run_pipeline. Each takes the
// provenance block to embed.
nlohmann::json features_document(const Corpus& corpus, const PatternRegistry& registry,
                                 const nlohmann::json& config, std::size_t threads = 1);

// Model vs each human batch; `model` null requests the human ceiling.
nlohmann::json align_document(const nlohmann::json& model, const std::vector<nlohmann::json>& human,
                              CeilingScheme scheme, const nlohmann::json& config);

// `sim` null requests the human ceiling.
nlohmann::json ece_document(const Corpus* sim, const std::vector<Corpus>& human, std::size_t bins,
                            CeilingScheme scheme, const nlohmann::json& config);

nlohmann::json eval_document(const Corpus* sim, const std::vector<Corpus>& human, const SurveyMapping& mapping,
                             CeilingScheme scheme, const nlohmann::json& config);

// Joins per-batch components by batch label. `eval` may be null or carry
// "available": false, giving the five-component variant.
nlohmann::json usi_document(const nlohmann::json& align, const nlohmann::json& ece, const nlohmann::json& eval,
                            const nlohmann::json& config);

nlohmann::json contingency_document(const std::vector<Corpus>& human, const JudgmentMapping& mapping,
                                    const nlohmann::json& config);

inline constexpr const char* kHumanCeilingName = "Human (inter-ann.)";

struct PipelineResult {
  std::vector<std::filesystem::path> written;
};

// features.json, align.json, ece.json, eval.json, usi.json, report.md,
// report.csv and report.json under out_dir. On failure nothing is left
// behind from this run.
PipelineResult run_pipeline(const PipelineConfig& config);

}  // namespace usikit
