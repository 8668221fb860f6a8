#include "chatgrade/meteor.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "chatgrade/porter_stemmer.h"

namespace chatgrade {

void MeteorParams::validate() const {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("meteor: alpha must be in [0, 1]");
  if (!(beta > 0.0)) throw std::invalid_argument("meteor: beta must be positive");
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw std::invalid_argument("meteor: gamma must be in [0, 1]");
}

namespace {

std::vector<std::string> stage_keys(const TokenSequence& seq, MatchStage stage) {
  std::vector<std::string> keys;
  keys.reserve(seq.size());
  for (const auto& tok : seq) keys.push_back(stage == MatchStage::kStem ? porter_stem(tok) : tok);
  return keys;
}

}  // namespace

Alignment align(const TokenSequence& cand, const TokenSequence& ref, const MeteorParams& params) {
  std::vector<bool> cand_used(cand.size(), false);
  std::vector<bool> ref_used(ref.size(), false);
  Alignment out;

  for (MatchStage stage : params.stages) {
    const auto cand_keys = stage_keys(cand, stage);
    const auto ref_keys = stage_keys(ref, stage);
    for (std::size_t i = 0; i < cand.size(); ++i) {
      if (cand_used[i]) continue;
      for (std::size_t j = 0; j < ref.size(); ++j) {
        if (!ref_used[j] && ref_keys[j] == cand_keys[i]) {
          cand_used[i] = ref_used[j] = true;
          out.pairs.emplace_back(i, j);
          break;
        }
      }
    }
  }

  std::sort(out.pairs.begin(), out.pairs.end());
  out.chunks = chunk_count(out.pairs);
  return out;
}

std::size_t chunk_count(std::span<const std::pair<std::size_t, std::size_t>> pairs) {
  if (pairs.empty()) return 0;
  std::size_t chunks = 1;
  for (std::size_t k = 1; k < pairs.size(); ++k) {
    const auto& [pc, pr] = pairs[k - 1];
    const auto& [c, r] = pairs[k];
    if (c != pc + 1 || r != pr + 1) ++chunks;
  }
  return chunks;
}

MeteorBreakdown meteor_breakdown(const TokenSequence& cand, const TokenSequence& ref,
                                 const MeteorParams& params) {
  params.validate();
  const Alignment alignment = align(cand, ref, params);
  MeteorBreakdown out;
  out.matches = alignment.matches();
  out.chunks = alignment.chunks;
  if (out.matches == 0) return out;

  const double m = static_cast<double>(out.matches);
  out.precision = m / static_cast<double>(cand.size());
  out.recall = m / static_cast<double>(ref.size());
  out.fmean = out.precision * out.recall /
              (params.alpha * out.precision + (1.0 - params.alpha) * out.recall);
  out.penalty = params.gamma * std::pow(static_cast<double>(out.chunks) / m, params.beta);
  out.score = out.fmean * (1.0 - out.penalty);
  return out;
}

double meteor(const TokenSequence& cand, const TokenSequence& ref, const MeteorParams& params) {
  return meteor_breakdown(cand, ref, params).score;
}

}  // namespace chatgrade
