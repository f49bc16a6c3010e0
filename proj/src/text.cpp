#include "decompound/text.hpp"

#include <stdexcept>

#include <unicode/locid.h>
#include <unicode/normalizer2.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

namespace decompound {

std::u32string to_u32(std::string_view utf8) {
  std::u32string out;
  out.reserve(utf8.size());
  const auto* s = reinterpret_cast<const uint8_t*>(utf8.data());
  const auto length = static_cast<int32_t>(utf8.size());
  int32_t i = 0;
  while (i < length) {
    UChar32 c;
    U8_NEXT(s, i, length, c);
    if (c < 0) {
      throw std::invalid_argument("malformed UTF-8 in '" + std::string(utf8) + "'");
    }
    out.push_back(static_cast<char32_t>(c));
  }
  return out;
}

std::string to_utf8(std::u32string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char32_t c : text) {
    uint8_t buf[U8_MAX_LENGTH];
    int32_t n = 0;
    UBool error = false;
    U8_APPEND(buf, n, U8_MAX_LENGTH, static_cast<UChar32>(c), error);
    if (error) {
      throw std::invalid_argument("invalid code point in UTF-32 text");
    }
    out.append(reinterpret_cast<const char*>(buf), static_cast<std::size_t>(n));
  }
  return out;
}

std::size_t char_length(std::string_view utf8) { return to_u32(utf8).size(); }

std::string char_substr(std::string_view utf8, std::size_t pos, std::size_t count) {
  const std::u32string wide = to_u32(utf8);
  if (pos > wide.size()) {
    throw std::out_of_range("char_substr: position past end");
  }
  return to_utf8(std::u32string_view(wide).substr(pos, count));
}

namespace {

icu::UnicodeString from_utf8_checked(std::string_view utf8) {
  to_u32(utf8);  // validates
  return icu::UnicodeString::fromUTF8(icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size())));
}

const icu::Normalizer2& nfc_normalizer() {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* n = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status) || n == nullptr) {
    throw std::runtime_error("ICU NFC normalizer unavailable");
  }
  return *n;
}

icu::UnicodeString nfc_unicode(const icu::UnicodeString& s) {
  UErrorCode status = U_ZERO_ERROR;
  icu::UnicodeString out = nfc_normalizer().normalize(s, status);
  if (U_FAILURE(status)) {
    throw std::runtime_error("NFC normalization failed");
  }
  return out;
}

}  // namespace

std::string nfc(std::string_view utf8) {
  std::string out;
  nfc_unicode(from_utf8_checked(utf8)).toUTF8String(out);
  return out;
}

std::string normalize(std::string_view form) {
  if (form.empty()) {
    throw std::invalid_argument("cannot normalize an empty form");
  }
  icu::UnicodeString s = nfc_unicode(from_utf8_checked(form));
  s.toLower(icu::Locale::getRoot());
  std::string out;
  nfc_unicode(s).toUTF8String(out);
  return out;
}

}  // namespace decompound
