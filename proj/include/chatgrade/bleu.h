#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "chatgrade/text.h"

namespace chatgrade {

struct BleuConfig {
  std::size_t max_order = 4;
  // Empty means uniform 1/max_order.
  std::vector<double> weights;
  // Replaces zero or undefined per-order precisions in the geometric mean.
  double epsilon = 1e-9;

  // Throws std::invalid_argument when the invariants do not hold.
  void validate() const;
  std::vector<double> effective_weights() const;
};

// Clipped n-gram counts for one order.
struct ClippedCounts {
  std::size_t matched = 0;  // sum of min(count_cand, count_ref)
  std::size_t total = 0;    // candidate n-grams of this order

  // Nullopt when the candidate has no n-grams of this order.
  std::optional<double> ratio() const {
    if (total == 0) return std::nullopt;
    return static_cast<double>(matched) / static_cast<double>(total);
  }
};

struct BleuBreakdown {
  std::vector<ClippedCounts> counts;
  // Per-order precisions after the epsilon floor; these enter the mean.
  std::vector<double> precisions;
  double brevity_penalty = 0.0;
  double score = 0.0;
};

ClippedCounts modified_precision(const TokenSequence& cand, const TokenSequence& ref,
                                 std::size_t n);

// 1 when cand_len >= ref_len, exp(1 - ref_len / cand_len) otherwise, and 0
// for an empty candidate. Throws std::invalid_argument for ref_len == 0.
double brevity_penalty(std::size_t cand_len, std::size_t ref_len);

// Sentence-level BLEU against a single reference. Throws
// std::invalid_argument for an empty reference or an invalid config.
BleuBreakdown bleu(const TokenSequence& cand, const TokenSequence& ref,
                   const BleuConfig& cfg = {});

}  // namespace chatgrade
