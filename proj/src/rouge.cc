#include "chatgrade/rouge.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace chatgrade {
namespace {

void check_length(const TokenSequence& seq, const char* op) {
  if (seq.size() > kMaxRougeTokens) {
    throw std::length_error(std::string(op) + ": input exceeds " +
                            std::to_string(kMaxRougeTokens) + " tokens");
  }
}

double ratio(double num, std::size_t den) {
  return den == 0 ? 0.0 : std::min(1.0, num / static_cast<double>(den));
}

ScoreTriple triple(double precision, double recall, double beta) {
  return {recall, precision, f_measure(precision, recall, beta)};
}

}  // namespace

void RougeConfig::validate() const {
  if (!(wlcs_alpha > 1.0)) throw std::invalid_argument("rouge: wlcs alpha must exceed 1");
  if (!(f_beta > 0.0)) throw std::invalid_argument("rouge: f beta must be positive");
}

double f_measure(double precision, double recall, double beta) {
  if (precision + recall <= 0.0) return 0.0;
  const double b2 = beta * beta;
  return std::min(1.0, (1.0 + b2) * precision * recall / (recall + b2 * precision));
}

ScoreTriple rouge_n(const TokenSequence& cand, const TokenSequence& ref, std::size_t n,
                    double f_beta) {
  const NGramMultiset ref_grams = ngrams(ref, n);
  const NGramMultiset cand_grams = ngrams(cand, n);
  if (ref_grams.empty()) return {};
  const auto overlap = static_cast<double>(cand_grams.clipped_overlap(ref_grams));
  return triple(ratio(overlap, cand_grams.total()), ratio(overlap, ref_grams.total()), f_beta);
}

std::size_t lcs_length(const TokenSequence& a, const TokenSequence& b) {
  check_length(a, "lcs");
  check_length(b, "lcs");
  // Two rolling rows of the (|a|+1) x (|b|+1) table.
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

ScoreTriple rouge_l(const TokenSequence& cand, const TokenSequence& ref, const RougeConfig& cfg) {
  cfg.validate();
  if (cand.empty() || ref.empty()) return {};
  const auto lcs = static_cast<double>(lcs_length(cand, ref));
  return triple(ratio(lcs, cand.size()), ratio(lcs, ref.size()), cfg.f_beta);
}

double wlcs(const TokenSequence& a, const TokenSequence& b, double alpha) {
  if (!(alpha > 1.0)) throw std::invalid_argument("wlcs: alpha must exceed 1");
  check_length(a, "wlcs");
  check_length(b, "wlcs");

  // The usual c/w table, with c split into the weight of completed runs and
  // the open diagonal run: c = settled + run^alpha.
  struct Cell {
    double settled = 0.0;
    std::size_t run = 0;
  };
  const auto value = [alpha](const Cell& c) {
    return c.settled + std::pow(static_cast<double>(c.run), alpha);
  };

  const std::size_t cols = b.size() + 1;
  std::vector<Cell> prev(cols), cur(cols);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = Cell{};
    for (std::size_t j = 1; j <= b.size(); ++j) {
      if (a[i - 1] == b[j - 1]) {
        cur[j] = Cell{prev[j - 1].settled, prev[j - 1].run + 1};
      } else {
        const double up = value(prev[j]);
        const double left = value(cur[j - 1]);
        cur[j] = Cell{up > left ? up : left, 0};
      }
    }
    std::swap(prev, cur);
  }
  return value(prev[b.size()]);
}

ScoreTriple rouge_w(const TokenSequence& cand, const TokenSequence& ref, const RougeConfig& cfg) {
  cfg.validate();
  if (cand.empty() || ref.empty()) return {};
  const double alpha = cfg.wlcs_alpha;
  const double weight = wlcs(cand, ref, alpha);
  const auto normalized = [&](std::size_t len) {
    const double full = std::pow(static_cast<double>(len), alpha);
    return std::min(1.0, std::pow(weight / full, 1.0 / alpha));
  };
  return triple(normalized(cand.size()), normalized(ref.size()), cfg.f_beta);
}

SkipBigramMultiset skip_bigrams(const TokenSequence& seq, std::optional<std::size_t> max_gap) {
  check_length(seq, "skip_bigrams");
  SkipBigramMultiset out;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    std::size_t last = seq.size() - 1;
    if (max_gap && *max_gap < last - i) last = i + 1 + *max_gap;
    for (std::size_t j = i + 1; j <= last; ++j) ++out[{seq[i], seq[j]}];
  }
  return out;
}

std::size_t total_count(const SkipBigramMultiset& pairs) {
  std::size_t total = 0;
  for (const auto& [pair, n] : pairs) total += n;
  return total;
}

ScoreTriple rouge_s(const TokenSequence& cand, const TokenSequence& ref, const RougeConfig& cfg) {
  cfg.validate();
  const SkipBigramMultiset cand_pairs = skip_bigrams(cand, cfg.skip_max_gap);
  const SkipBigramMultiset ref_pairs = skip_bigrams(ref, cfg.skip_max_gap);
  const std::size_t ref_total = total_count(ref_pairs);
  if (ref_total == 0) return {};

  std::size_t overlap = 0;
  for (const auto& [pair, n] : cand_pairs) {
    const auto it = ref_pairs.find(pair);
    if (it != ref_pairs.end()) overlap += std::min(n, it->second);
  }
  const auto hits = static_cast<double>(overlap);
  return triple(ratio(hits, total_count(cand_pairs)), ratio(hits, ref_total), cfg.f_beta);
}

}  // namespace chatgrade
