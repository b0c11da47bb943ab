#pragma once

#include <string>
#include <string_view>

namespace nesa {

// Decodes UTF-8 into code points; throws a parse error on malformed input.
std::u32string utf8_decode(std::string_view text);

std::string utf8_encode(std::u32string_view text);

// Lowercases ASCII and the basic Cyrillic block; other code points pass through.
char32_t lower_codepoint(char32_t cp);

bool is_space_codepoint(char32_t cp);

// ASCII punctuation; each such character tokenizes on its own.
bool is_punct_codepoint(char32_t cp);

}  // namespace nesa
