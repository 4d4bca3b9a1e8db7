#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace usikit::text {

// Unicode NFC. Invalid UTF-8 sequences are replaced with U+FFFD.
std::string nfc(std::string_view utf8);

// Full Unicode case folding.
std::string fold_case(std::string_view utf8);

bool is_space(char c) noexcept;

// Splits on ASCII whitespace; punctuation stays attached to tokens.
std::vector<std::string_view> whitespace_tokens(std::string_view s);

std::size_t word_count(std::string_view s);

// Case-folded maximal runs of alphanumeric code points. This is the unit
// lexicon terms are matched on: "I'm sure." -> {"i", "m", "sure"}.
std::vector<std::string> alnum_runs(std::string_view utf8);

// Runs of whitespace become one space; leading/trailing whitespace dropped.
std::string collapse_whitespace(std::string_view s);

// Typographic single quotes (U+2018, U+2019) become ASCII apostrophes so
// pattern files can be written in plain ASCII.
std::string ascii_quotes(std::string_view utf8);

std::string trim(std::string_view s);

}  // namespace usikit::text
