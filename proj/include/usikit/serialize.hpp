#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "usikit/alignment.hpp"
#include "usikit/corpus.hpp"
#include "usikit/features.hpp"
#include "usikit/outcomes.hpp"
#include "usikit/qc.hpp"
#include "usikit/stats.hpp"
#include "usikit/surveys.hpp"
#include "usikit/usi.hpp"

// JSON shapes of every report the CLI reads or writes. Objects use sorted
// keys (nlohmann::json's std::map) and shortest round-trip float output, so a
// given value always serializes to the same bytes.
namespace usikit::io {

using nlohmann::json;

json to_json(const SourceId& s);
SourceId source_from_json(const json& j);

json to_json(const FeatureVector& fv);
// Throws Error naming the first missing or non-numeric metric.
FeatureVector features_from_json(const json& j);

json to_json(const BatchStats& s);
BatchStats batch_stats_from_json(const json& j);

json to_json(const AlignmentScore& a);
json to_json(const BatchComparison& c);

json to_json(const BinSet& b);
json to_json(const EvalReport& r);
json to_json(const SurveyMapping& m);
json to_json(const JudgmentMapping& m);

json to_json(const ContingencyTable& t);
json to_json(const ContingencyStats& s);

json to_json(const ConfusionMatrix& m);
json to_json(const QcStats& s);

json to_json(const UsiComponents& c);
json to_json(const UsiRow& r);
UsiRow usi_row_from_json(const json& j);

// Per-metric (metric, model_value, human_value) triples for bar charts.
json bar_chart(const FeatureVector& model, const FeatureVector& human);

json read_json_file(const std::filesystem::path& path);
// Pretty-printed with a trailing newline.
std::string dump(const json& j);
void write_json_file(const std::filesystem::path& path, const json& j);

}  // namespace usikit::io
