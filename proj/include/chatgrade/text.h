#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace chatgrade {

struct TokenizerConfig {
  enum class Punctuation {
    kIsolate,  // every punctuation/symbol code point becomes its own token
    kStrip,    // punctuation/symbol code points act as separators and vanish
  };

  Punctuation punctuation = Punctuation::kIsolate;
  bool lowercase = true;
};

// Ordered list of normalized tokens. Each token is non-empty and contains no
// whitespace or control characters; the constructor enforces this.
class TokenSequence {
 public:
  using const_iterator = std::vector<std::string>::const_iterator;

  TokenSequence() = default;
  explicit TokenSequence(std::vector<std::string> tokens);

  std::size_t size() const { return tokens_.size(); }
  bool empty() const { return tokens_.empty(); }
  const std::string& operator[](std::size_t i) const { return tokens_[i]; }
  const_iterator begin() const { return tokens_.begin(); }
  const_iterator end() const { return tokens_.end(); }
  std::span<const std::string> tokens() const { return tokens_; }

  // Tokens separated by single spaces.
  std::string join() const;

  friend bool operator==(const TokenSequence&, const TokenSequence&) = default;

 private:
  std::vector<std::string> tokens_;
};

// NFC-normalizes and (by default) lowercases raw UTF-8 text, splits on
// whitespace, and isolates punctuation and symbol characters (Unicode general
// categories P* and S*). Ill-formed UTF-8 sequences become U+FFFD.
TokenSequence tokenize(std::string_view raw, const TokenizerConfig& cfg = {});

// Splits on single spaces only; convenient for tests and pre-tokenized input.
TokenSequence words(std::string_view space_separated);

bool is_valid_utf8(std::string_view bytes);

// Multiset of the contiguous n-token windows of a sequence.
class NGramMultiset {
 public:
  using Key = std::vector<std::string>;

  explicit NGramMultiset(std::size_t order) : order_(order) {}

  std::size_t order() const { return order_; }
  std::size_t count(const Key& gram) const;
  std::size_t total() const { return total_; }
  std::size_t distinct() const { return counts_.size(); }
  bool empty() const { return total_ == 0; }
  const std::map<Key, std::size_t>& counts() const { return counts_; }

  void add(Key gram);

  // Sum over grams of min(count here, count in other).
  std::size_t clipped_overlap(const NGramMultiset& other) const;

 private:
  std::size_t order_;
  std::size_t total_ = 0;
  std::map<Key, std::size_t> counts_;
};

// Throws std::invalid_argument for n == 0.
NGramMultiset ngrams(const TokenSequence& seq, std::size_t n);

}  // namespace chatgrade
