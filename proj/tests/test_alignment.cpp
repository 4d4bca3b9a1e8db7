#include <gtest/gtest.h>

#include <cmath>

#include "usikit/alignment.hpp"
#include "usikit/error.hpp"

namespace usikit {
namespace {

FeatureVector filled(double v) {
  FeatureVector fv;
  fv.values.fill(v);
  return fv;
}

TEST(Dice, Examples) {
  EXPECT_EQ(dice(0, 0), 100.0);
  EXPECT_EQ(dice(7.5, 7.5), 100.0);
  EXPECT_DOUBLE_EQ(dice(1, 3), 50.0);
  EXPECT_EQ(dice(0, 5), 0.0);
  EXPECT_THROW(dice(-1, 2), Error);
  EXPECT_THROW(dice(1, -0.5), Error);
}

TEST(DimensionScores, IdentityGivesHundred) {
  const auto s = dimension_scores(filled(3.0), filled(3.0));
  for (const auto& [dim, v] : s.dims) EXPECT_EQ(v, 100.0) << dim;
  EXPECT_EQ(s.per_metric.size(), 19u);
}

TEST(DimensionScores, D4IsMeanOfItsMetrics) {
  FeatureVector model = filled(1.0), human = filled(1.0);
  // Dice 80, 60, 100 for emot, accuse, pivot.
  model[Metric::emot_pct] = 2.0;
  human[Metric::emot_pct] = 3.0;
  model[Metric::accuse_pct] = 3.0;
  human[Metric::accuse_pct] = 7.0;
  const auto s = dimension_scores(model, human);
  EXPECT_DOUBLE_EQ(s.per_metric.at("emot_pct"), 80.0);
  EXPECT_DOUBLE_EQ(s.per_metric.at("accuse_pct"), 60.0);
  EXPECT_DOUBLE_EQ(s.dims.at("D4"), 80.0);
}

TEST(DimensionScores, ZeroAgainstPositiveDragsDimension) {
  FeatureVector model = filled(1.0), human = filled(1.0);
  model[Metric::pivot_pct] = 0.0;
  human[Metric::pivot_pct] = 5.0;
  const auto s = dimension_scores(model, human);
  EXPECT_EQ(s.per_metric.at("pivot_pct"), 0.0);
  EXPECT_NEAR(s.dims.at("D4"), 200.0 / 3.0, 1e-12);
  EXPECT_EQ(s.dims.at("D1"), 100.0);
}

TEST(DimensionScores, MetricOrderWithinDimensionIrrelevant) {
  FeatureVector model = filled(1.0), human = filled(2.0);
  model[Metric::uncert_pct] = 5.0;
  const auto a = dimension_scores(model, human);
  const DimensionMap reordered({
      {"D1", {"idconf_pct", "repeat_pct", "verb_cv", "ack_pct", "formal_pct", "polite_pct", "short_pct",
              "wds_per_turn"}},
      {"D2", {"open_wds", "wds_per_turn", "ids_per_turn", "frontid_pct"}},
      {"D3", {"infoq_pct", "clarfyq_pct", "pushbk_pct", "certn_pct", "uncert_pct"}},
      {"D4", {"pivot_pct", "accuse_pct", "emot_pct"}},
  });
  const auto b = dimension_scores(model, human, reordered);
  for (const auto& [dim, v] : a.dims) EXPECT_NEAR(v, b.dims.at(dim), 1e-12) << dim;
}

std::vector<LabeledFeatures> batches_with_d1(std::initializer_list<double> d1_scores) {
  // A batch whose polite_pct gives the requested D1 against a model at 1.0:
  // D1 = (7*100 + dice(1, h)) / 8.
  std::vector<LabeledFeatures> out;
  int i = 0;
  for (double target : d1_scores) {
    const double metric_dice = target * 8.0 - 700.0;
    const double h = 200.0 / metric_dice - 1.0;  // dice(1, h) with h >= 1
    FeatureVector fv = filled(1.0);
    fv[Metric::polite_pct] = h;
    out.push_back({"b" + std::to_string(i++), fv});
  }
  return out;
}

TEST(CompareToBatches, MeanAndPopulationStd) {
  const auto batches = batches_with_d1({95.0, 96.0, 97.0});
  const auto cmp = compare_to_batches(filled(1.0), batches);
  ASSERT_EQ(cmp.per_batch.size(), 3u);
  EXPECT_NEAR(cmp.dims.at("D1").mean, 96.0, 1e-9);
  EXPECT_NEAR(cmp.dims.at("D1").std, std::sqrt(2.0 / 3.0), 1e-9);
  EXPECT_EQ(cmp.dims.at("D2").std, 0.0);
  EXPECT_EQ(cmp.per_batch[1].batch, "b1");
}

TEST(CompareToBatches, SingleAndIdenticalBatches) {
  const std::vector<LabeledFeatures> one = {{"a", filled(2.0)}};
  EXPECT_EQ(compare_to_batches(filled(1.0), one).dims.at("D3").std, 0.0);
  const std::vector<LabeledFeatures> same = {{"a", filled(2.0)}, {"b", filled(2.0)}, {"c", filled(2.0)}};
  const auto cmp = compare_to_batches(filled(1.0), same);
  EXPECT_EQ(cmp.dims.at("D3").std, 0.0);
  EXPECT_NEAR(cmp.dims.at("D3").mean, 200.0 / 3.0, 1e-12);
  EXPECT_THROW(compare_to_batches(filled(1.0), std::vector<LabeledFeatures>{}), Error);
}

TEST(HumanCeiling, PairwiseScores) {
  const std::vector<LabeledFeatures> three = {{"a", filled(1.0)}, {"b", filled(2.0)}, {"c", filled(3.0)}};
  const auto cmp = human_ceiling(three);
  ASSERT_EQ(cmp.per_batch.size(), 3u);
  EXPECT_EQ(cmp.per_batch[0].batch, "a|b");
  EXPECT_EQ(cmp.per_batch[1].batch, "a|c");
  EXPECT_EQ(cmp.per_batch[2].batch, "b|c");
  EXPECT_EQ(cmp.dims.at("D1").n_batches, 3u);
}

TEST(HumanCeiling, IdenticalPairAndSingleDifference) {
  const std::vector<LabeledFeatures> same = {{"a", filled(4.0)}, {"b", filled(4.0)}};
  const auto cmp = human_ceiling(same);
  for (const auto& [dim, s] : cmp.dims) {
    EXPECT_EQ(s.mean, 100.0) << dim;
    EXPECT_EQ(s.std, 0.0) << dim;
  }
  auto other = filled(4.0);
  other[Metric::polite_pct] = 8.0;
  const std::vector<LabeledFeatures> differ = {{"a", filled(4.0)}, {"b", other}};
  const auto d = human_ceiling(differ);
  EXPECT_LT(d.dims.at("D1").mean, 100.0);
  EXPECT_EQ(d.dims.at("D2").mean, 100.0);
  EXPECT_EQ(d.dims.at("D3").mean, 100.0);
  EXPECT_EQ(d.dims.at("D4").mean, 100.0);
}

TEST(HumanCeiling, LeaveOneOutAndErrors) {
  const std::vector<LabeledFeatures> three = {{"a", filled(1.0)}, {"b", filled(2.0)}, {"c", filled(3.0)}};
  const auto loo = human_ceiling(three, CeilingScheme::leave_one_out);
  ASSERT_EQ(loo.per_batch.size(), 3u);
  EXPECT_EQ(loo.per_batch[0].batch, "a|rest");
  // a=1 against mean(2,3)=2.5 -> 2*1/3.5*100
  EXPECT_NEAR(loo.per_batch[0].dims.at("D4"), 200.0 / 3.5, 1e-12);
  EXPECT_THROW(human_ceiling(std::vector<LabeledFeatures>{{"a", filled(1.0)}}), Error);
  EXPECT_EQ(ceiling_scheme_from_name("leave-one-out"), CeilingScheme::leave_one_out);
  EXPECT_EQ(ceiling_scheme_name(CeilingScheme::pairwise), "pairwise");
  EXPECT_THROW(ceiling_scheme_from_name("triplets"), Error);
}

}  // namespace
}  // namespace usikit
