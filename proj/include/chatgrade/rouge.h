#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>

#include "chatgrade/text.h"

namespace chatgrade {

// LCS, WLCS and skip-bigram operations reject longer inputs with
// std::length_error so the O(|a|·|b|) tables stay bounded.
inline constexpr std::size_t kMaxRougeTokens = 10'000;

struct RougeConfig {
  double wlcs_alpha = 1.2;
  // Maximum number of tokens between the two halves of a skip-bigram.
  std::optional<std::size_t> skip_max_gap;
  double f_beta = 1.0;

  void validate() const;
};

struct ScoreTriple {
  double recall = 0.0;
  double precision = 0.0;
  double f = 0.0;

  friend bool operator==(const ScoreTriple&, const ScoreTriple&) = default;
};

// (1+β²)PR / (R + β²P), or 0 when P + R = 0.
double f_measure(double precision, double recall, double beta);

ScoreTriple rouge_n(const TokenSequence& cand, const TokenSequence& ref, std::size_t n,
                    double f_beta = 1.0);

std::size_t lcs_length(const TokenSequence& a, const TokenSequence& b);

ScoreTriple rouge_l(const TokenSequence& cand, const TokenSequence& ref,
                    const RougeConfig& cfg = {});

// Weighted LCS where a run of k consecutive matches contributes k^alpha.
double wlcs(const TokenSequence& a, const TokenSequence& b, double alpha);

ScoreTriple rouge_w(const TokenSequence& cand, const TokenSequence& ref,
                    const RougeConfig& cfg = {});

using SkipBigramMultiset = std::map<std::pair<std::string, std::string>, std::size_t>;

// All ordered pairs (i < j) with j - i - 1 <= max_gap, counted with
// multiplicity.
SkipBigramMultiset skip_bigrams(const TokenSequence& seq,
                                std::optional<std::size_t> max_gap = std::nullopt);

std::size_t total_count(const SkipBigramMultiset& pairs);

ScoreTriple rouge_s(const TokenSequence& cand, const TokenSequence& ref,
                    const RougeConfig& cfg = {});

}  // namespace chatgrade
