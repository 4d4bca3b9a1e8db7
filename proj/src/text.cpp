#include "usikit/text.hpp"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include "usikit/error.hpp"

namespace usikit::text {

std::string nfc(std::string_view utf8) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* normalizer = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) throw Error("text", "NFC normalizer unavailable");
  const auto input = icu::UnicodeString::fromUTF8(icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size())));
  icu::UnicodeString out = normalizer->normalize(input, status);
  if (U_FAILURE(status)) throw Error("text", "NFC normalization failed");
  std::string result;
  out.toUTF8String(result);
  return result;
}

std::string fold_case(std::string_view utf8) {
  auto s = icu::UnicodeString::fromUTF8(icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size())));
  s.foldCase();
  std::string result;
  s.toUTF8String(result);
  return result;
}

bool is_space(char c) noexcept {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

std::vector<std::string_view> whitespace_tokens(std::string_view s) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && is_space(s[i])) ++i;
    const std::size_t start = i;
    while (i < s.size() && !is_space(s[i])) ++i;
    if (i > start) tokens.push_back(s.substr(start, i - start));
  }
  return tokens;
}

std::size_t word_count(std::string_view s) {
  std::size_t n = 0;
  bool in_word = false;
  for (char c : s) {
    if (is_space(c)) {
      in_word = false;
    } else if (!in_word) {
      in_word = true;
      ++n;
    }
  }
  return n;
}

std::vector<std::string> alnum_runs(std::string_view utf8) {
  const std::string folded = fold_case(utf8);
  std::vector<std::string> runs;
  const auto* data = reinterpret_cast<const uint8_t*>(folded.data());
  const auto length = static_cast<int32_t>(folded.size());
  int32_t i = 0;
  int32_t run_start = -1;
  while (i < length) {
    const int32_t at = i;
    UChar32 c;
    U8_NEXT(data, i, length, c);
    const bool alnum = c >= 0 && u_isalnum(c);
    if (alnum && run_start < 0) run_start = at;
    if (!alnum && run_start >= 0) {
      runs.emplace_back(folded.substr(run_start, at - run_start));
      run_start = -1;
    }
  }
  if (run_start >= 0) runs.emplace_back(folded.substr(run_start));
  return runs;
}

std::string collapse_whitespace(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (auto token : whitespace_tokens(s)) {
    if (!out.empty()) out.push_back(' ');
    out.append(token);
  }
  return out;
}

std::string ascii_quotes(std::string_view utf8) {
  // U+2018 = E2 80 98, U+2019 = E2 80 99
  std::string out;
  out.reserve(utf8.size());
  for (std::size_t i = 0; i < utf8.size(); ++i) {
    if (i + 2 < utf8.size() && static_cast<unsigned char>(utf8[i]) == 0xE2 &&
        static_cast<unsigned char>(utf8[i + 1]) == 0x80 &&
        (static_cast<unsigned char>(utf8[i + 2]) == 0x98 ||
         static_cast<unsigned char>(utf8[i + 2]) == 0x99)) {
      out.push_back('\'');
      i += 2;
    } else {
      out.push_back(utf8[i]);
    }
  }
  return out;
}

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && is_space(s[b])) ++b;
  while (e > b && is_space(s[e - 1])) --e;
  return std::string(s.substr(b, e - b));
}

}  // namespace usikit::text
