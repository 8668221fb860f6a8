#include "chatgrade/bleu.h"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace chatgrade {

void BleuConfig::validate() const {
  if (max_order < 1) throw std::invalid_argument("bleu: max_order must be at least 1");
  if (!weights.empty()) {
    if (weights.size() != max_order) {
      throw std::invalid_argument("bleu: weights must have max_order entries");
    }
    const double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
    if (std::abs(sum - 1.0) > 1e-12) throw std::invalid_argument("bleu: weights must sum to 1");
    for (double w : weights) {
      if (!(w >= 0.0)) throw std::invalid_argument("bleu: weights must be non-negative");
    }
  }
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw std::invalid_argument("bleu: epsilon must lie in (0, 1)");
  }
}

std::vector<double> BleuConfig::effective_weights() const {
  if (!weights.empty()) return weights;
  return std::vector<double>(max_order, 1.0 / static_cast<double>(max_order));
}

ClippedCounts modified_precision(const TokenSequence& cand, const TokenSequence& ref,
                                 std::size_t n) {
  const NGramMultiset cand_grams = ngrams(cand, n);
  return {cand_grams.clipped_overlap(ngrams(ref, n)), cand_grams.total()};
}

double brevity_penalty(std::size_t cand_len, std::size_t ref_len) {
  if (ref_len == 0) throw std::invalid_argument("brevity penalty: reference length is zero");
  if (cand_len == 0) return 0.0;
  if (cand_len >= ref_len) return 1.0;
  return std::exp(1.0 - static_cast<double>(ref_len) / static_cast<double>(cand_len));
}

BleuBreakdown bleu(const TokenSequence& cand, const TokenSequence& ref, const BleuConfig& cfg) {
  cfg.validate();
  if (ref.empty()) throw std::invalid_argument("bleu: empty reference");

  const std::vector<double> weights = cfg.effective_weights();
  BleuBreakdown out;
  out.brevity_penalty = brevity_penalty(cand.size(), ref.size());

  double log_sum = 0.0;
  for (std::size_t n = 1; n <= cfg.max_order; ++n) {
    const ClippedCounts counts = modified_precision(cand, ref, n);
    const double p = counts.ratio().value_or(0.0);
    const double floored = p > 0.0 ? p : cfg.epsilon;
    out.counts.push_back(counts);
    out.precisions.push_back(floored);
    log_sum += weights[n - 1] * std::log(floored);
  }

  out.score = cand.empty() ? 0.0 : out.brevity_penalty * std::exp(log_sum);
  return out;
}

}  // namespace chatgrade
