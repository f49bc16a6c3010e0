#pragma once

#include <string>
#include <string_view>

namespace decompound {

// UTF-8 <-> UTF-32. Throws std::invalid_argument on malformed UTF-8.
std::u32string to_u32(std::string_view utf8);
std::string to_utf8(std::u32string_view text);

// Number of Unicode scalar values in a UTF-8 string.
std::size_t char_length(std::string_view utf8);

// Code-point based substring of a UTF-8 string.
std::string char_substr(std::string_view utf8, std::size_t pos,
                        std::size_t count = std::u32string::npos);

// NFC composition.
std::string nfc(std::string_view utf8);

// NFC followed by full Unicode lowercasing in the root locale.
// Throws std::invalid_argument on empty input.
std::string normalize(std::string_view form);

}  // namespace decompound
