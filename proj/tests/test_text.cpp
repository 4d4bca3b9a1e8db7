#include <gtest/gtest.h>

#include "usikit/text.hpp"

namespace usikit {
namespace {

TEST(Text, NfcComposesCombiningMarks) {
  EXPECT_EQ(text::nfc("Cafe\xCC\x81"), "Caf\xC3\xA9");
  EXPECT_EQ(text::nfc("plain"), "plain");
}

TEST(Text, FoldCaseIsFullFolding) {
  EXPECT_EQ(text::fold_case("HeLLo"), "hello");
  EXPECT_EQ(text::fold_case("Stra\xC3\x9F" "e"), "strasse");
}

TEST(Text, WordCountSplitsOnAsciiWhitespaceOnly) {
  EXPECT_EQ(text::word_count(""), 0u);
  EXPECT_EQ(text::word_count("  a\tb\nc  "), 3u);
  EXPECT_EQ(text::word_count("don't, stop!"), 2u);
  EXPECT_EQ(text::word_count("a \xE2\x80\x94 b"), 3u);
}

TEST(Text, AlnumRunsDropPunctuationAndFold) {
  using V = std::vector<std::string>;
  EXPECT_EQ(text::alnum_runs("I'm sure."), (V{"i", "m", "sure"}));
  EXPECT_EQ(text::alnum_runs("order #W123, ok?"), (V{"order", "w123", "ok"}));
  EXPECT_TRUE(text::alnum_runs("...").empty());
}

TEST(Text, AsciiQuotesMapsTypographicApostrophes) {
  EXPECT_EQ(text::ascii_quotes("I\xE2\x80\x99m \xE2\x80\x98ok\xE2\x80\x99"), "I'm 'ok'");
  EXPECT_EQ(text::ascii_quotes("\xE2\x80\x9C" "x"), "\xE2\x80\x9C" "x");
}

TEST(Text, CollapseAndTrim) {
  EXPECT_EQ(text::collapse_whitespace("  a \n\n b\t"), "a b");
  EXPECT_EQ(text::trim("\t x y \n"), "x y");
}

}  // namespace
}  // namespace usikit
