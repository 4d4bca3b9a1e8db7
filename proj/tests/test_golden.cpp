#include <gtest/gtest.h>

#include "support/checks.hpp"
#include "test_util.hpp"

namespace usikit {
namespace {

TEST(Golden, MatchesFrozenOracleValues) {
  const auto dir = testing::data_dir() / "golden";
  const auto mismatches = testsupport::golden_mismatches(dir / "golden.jsonl", dir / "expected.json", testing::shipped());
  for (const auto& m : mismatches) ADD_FAILURE() << m;
  EXPECT_TRUE(mismatches.empty());
}

}  // namespace
}  // namespace usikit
