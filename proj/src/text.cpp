#include "dialogaug/text.hpp"

#include <unicode/locid.h>
#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include <stdexcept>

namespace dialogaug {

namespace {

icu::UnicodeString normalize_nfkc(std::string_view text) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* nfkc = icu::Normalizer2::getNFKCInstance(status);
  if (U_FAILURE(status)) {
    throw std::runtime_error(std::string("ICU NFKC unavailable: ") + u_errorName(status));
  }
  const auto source = icu::UnicodeString::fromUTF8(
      icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
  icu::UnicodeString out = nfkc->normalize(source, status);
  if (U_FAILURE(status)) {
    throw std::runtime_error(std::string("NFKC normalization failed: ") + u_errorName(status));
  }
  return out;
}

bool is_split_punct(UChar32 c) {
  return c == '.' || c == ',' || c == '?' || c == '!' || c == ':' || c == ';';
}

bool is_space(UChar32 c) { return u_isUWhiteSpace(c) != 0; }

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  icu::UnicodeString s = normalize_nfkc(text);
  s.toLower(icu::Locale::getRoot());

  std::vector<std::string> tokens;
  icu::UnicodeString current;
  auto flush = [&] {
    if (!current.isEmpty()) {
      std::string utf8;
      current.toUTF8String(utf8);
      tokens.push_back(std::move(utf8));
      current.remove();
    }
  };

  for (int32_t i = 0; i < s.length();) {
    const UChar32 c = s.char32At(i);
    i += U16_LENGTH(c);
    if (is_space(c)) {
      flush();
    } else if (is_split_punct(c)) {
      flush();
      tokens.emplace_back(1, static_cast<char>(c));
    } else {
      current.append(c);
    }
  }
  flush();
  return tokens;
}

std::string trim(std::string_view text) {
  const auto s = icu::UnicodeString::fromUTF8(
      icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
  int32_t begin = 0;
  int32_t end = s.length();
  while (begin < end && is_space(s.char32At(begin))) begin += U16_LENGTH(s.char32At(begin));
  while (end > begin) {
    const int32_t prev = s.moveIndex32(end, -1);
    if (!is_space(s.char32At(prev))) break;
    end = prev;
  }
  std::string out;
  s.tempSubStringBetween(begin, end).toUTF8String(out);
  return out;
}

bool is_blank(std::string_view text) { return trim(text).empty(); }

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i != 0) out += sep;
    out += parts[i];
  }
  return out;
}

}  // namespace dialogaug
