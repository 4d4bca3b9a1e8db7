#include <gtest/gtest.h>

#include <fstream>

#include "support/checks.hpp"
#include "test_util.hpp"
#include "usikit/error.hpp"
#include "usikit/qc.hpp"

namespace usikit {
namespace {

TEST(QcStats, JudgeVersusTruth) {
  const auto s = qc_stats({34, 2, 6, 9});
  EXPECT_NEAR(*s.precision, 0.9444, 1e-4);
  EXPECT_NEAR(*s.recall, 0.85, 1e-4);
  EXPECT_NEAR(*s.accuracy, 0.8431, 1e-4);
  EXPECT_NEAR(*s.kappa, 0.5904, 1e-4);
}

TEST(QcStats, PerfectAgreement) {
  const auto s = qc_stats({10, 0, 0, 10});
  EXPECT_EQ(*s.precision, 1.0);
  EXPECT_EQ(*s.recall, 1.0);
  EXPECT_EQ(*s.accuracy, 1.0);
  EXPECT_DOUBLE_EQ(*s.kappa, 1.0);
}

TEST(QcStats, ChanceAgreementAndUndefined) {
  EXPECT_DOUBLE_EQ(*qc_stats({5, 5, 0, 0}).kappa, 0.0);
  const auto none = qc_stats({0, 0, 3, 3});
  EXPECT_FALSE(none.precision);
  EXPECT_TRUE(none.recall);
  EXPECT_FALSE(qc_stats({0, 0, 0, 0}).accuracy);
  EXPECT_FALSE(qc_stats({0, 0, 0, 0}).kappa);
}

TEST(QcStats, ShippedLabelFile) {
  const auto pairs = read_labels_csv(testing::data_dir() / "qc" / "judge_vs_truth.csv");
  EXPECT_EQ(pairs.size(), 51u);
  EXPECT_EQ(confusion_from_labels(pairs), (ConfusionMatrix{34, 2, 6, 9}));
}

TEST(ReadLabels, AliasesHeaderlessAndErrors) {
  const auto dir = testsupport::scratch_dir("qc");
  {
    std::ofstream(dir / "ok.csv") << "a,1,yes\nb,FAIL,false\nc, pass , 0\n";
    std::ofstream(dir / "bad.csv") << "id,judge_label,truth_label\na,pass,maybe\n";
    std::ofstream(dir / "short.csv") << "a,pass\n";
  }
  const auto pairs = read_labels_csv(dir / "ok.csv");
  ASSERT_EQ(pairs.size(), 3u);
  EXPECT_EQ(confusion_from_labels(pairs), (ConfusionMatrix{1, 1, 0, 1}));
  EXPECT_THROW(read_labels_csv(dir / "bad.csv"), Error);
  EXPECT_THROW(read_labels_csv(dir / "short.csv"), Error);
  EXPECT_THROW(read_labels_csv(dir / "missing.csv"), Error);
  EXPECT_THROW(confusion_from_labels(std::vector<LabelPair>{}), Error);
}

}  // namespace
}  // namespace usikit
