#include "chatgrade/text.h"

#include <unicode/locid.h>
#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/ustring.h>
#include <unicode/utf8.h>

#include <algorithm>
#include <stdexcept>

namespace chatgrade {
namespace {

bool is_separator(UChar32 c) {
  return u_isUWhiteSpace(c) || u_charType(c) == U_CONTROL_CHAR;
}

bool is_punct_or_symbol(UChar32 c) {
  return (U_GET_GC_MASK(c) & (U_GC_P_MASK | U_GC_S_MASK)) != 0;
}

const icu::Normalizer2& nfc() {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* instance = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status) || instance == nullptr) {
    throw std::runtime_error(std::string("ICU NFC normalizer unavailable: ") +
                             u_errorName(status));
  }
  return *instance;
}

icu::UnicodeString normalize(const icu::UnicodeString& text) {
  UErrorCode status = U_ZERO_ERROR;
  icu::UnicodeString out = nfc().normalize(text, status);
  if (U_FAILURE(status)) {
    throw std::runtime_error(std::string("NFC normalization failed: ") + u_errorName(status));
  }
  return out;
}

std::string to_utf8(const icu::UnicodeString& s) {
  std::string out;
  s.toUTF8String(out);
  return out;
}

}  // namespace

TokenSequence::TokenSequence(std::vector<std::string> tokens) : tokens_(std::move(tokens)) {
  for (const auto& tok : tokens_) {
    if (tok.empty()) throw std::invalid_argument("empty token");
    const auto* bytes = reinterpret_cast<const uint8_t*>(tok.data());
    const auto length = static_cast<int32_t>(tok.size());
    for (int32_t i = 0; i < length;) {
      UChar32 c;
      U8_NEXT(bytes, i, length, c);
      if (c >= 0 && is_separator(c)) {
        throw std::invalid_argument("token contains whitespace: \"" + tok + "\"");
      }
    }
  }
}

std::string TokenSequence::join() const {
  std::string out;
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    if (i) out.push_back(' ');
    out += tokens_[i];
  }
  return out;
}

TokenSequence tokenize(std::string_view raw, const TokenizerConfig& cfg) {
  icu::UnicodeString text = normalize(
      icu::UnicodeString::fromUTF8(icu::StringPiece(raw.data(), static_cast<int32_t>(raw.size()))));
  if (cfg.lowercase) {
    text.toLower(icu::Locale::getRoot());
    text = normalize(text);
  }

  std::vector<std::string> tokens;
  icu::UnicodeString word;
  auto flush = [&] {
    if (!word.isEmpty()) {
      tokens.push_back(to_utf8(word));
      word.remove();
    }
  };

  for (int32_t i = 0; i < text.length();) {
    const UChar32 c = text.char32At(i);
    i += U16_LENGTH(c);
    if (is_separator(c)) {
      flush();
    } else if (is_punct_or_symbol(c)) {
      flush();
      if (cfg.punctuation == TokenizerConfig::Punctuation::kIsolate) {
        tokens.push_back(to_utf8(icu::UnicodeString(c)));
      }
    } else {
      word.append(c);
    }
  }
  flush();
  return TokenSequence(std::move(tokens));
}

TokenSequence words(std::string_view space_separated) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos < space_separated.size()) {
    const std::size_t next = space_separated.find(' ', pos);
    const std::size_t stop = next == std::string_view::npos ? space_separated.size() : next;
    if (stop > pos) out.emplace_back(space_separated.substr(pos, stop - pos));
    pos = stop + 1;
  }
  return TokenSequence(std::move(out));
}

bool is_valid_utf8(std::string_view bytes) {
  const auto* data = reinterpret_cast<const uint8_t*>(bytes.data());
  const auto length = static_cast<int32_t>(bytes.size());
  for (int32_t i = 0; i < length;) {
    UChar32 c;
    U8_NEXT(data, i, length, c);
    if (c < 0) return false;
  }
  return true;
}

std::size_t NGramMultiset::count(const Key& gram) const {
  const auto it = counts_.find(gram);
  return it == counts_.end() ? 0 : it->second;
}

void NGramMultiset::add(Key gram) {
  if (gram.size() != order_) throw std::invalid_argument("n-gram has wrong order");
  ++counts_[std::move(gram)];
  ++total_;
}

std::size_t NGramMultiset::clipped_overlap(const NGramMultiset& other) const {
  std::size_t overlap = 0;
  for (const auto& [gram, n] : counts_) overlap += std::min(n, other.count(gram));
  return overlap;
}

NGramMultiset ngrams(const TokenSequence& seq, std::size_t n) {
  if (n == 0) throw std::invalid_argument("n-gram order must be at least 1");
  NGramMultiset out(n);
  const auto toks = seq.tokens();
  for (std::size_t i = 0; i + n <= toks.size(); ++i) {
    out.add(NGramMultiset::Key(toks.begin() + i, toks.begin() + i + n));
  }
  return out;
}

}  // namespace chatgrade
