#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "chatgrade/text.h"

namespace chatgrade {

enum class MatchStage {
  kExact,
  kStem,  // Porter stems compare equal
};

struct MeteorParams {
  double alpha = 0.9;  // precision weight in the F-mean
  double beta = 3.0;   // fragmentation exponent
  double gamma = 0.5;  // maximum fragmentation penalty
  std::vector<MatchStage> stages = {MatchStage::kExact};

  void validate() const;
};

struct Alignment {
  // (candidate index, reference index), sorted by candidate index.
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::size_t chunks = 0;

  std::size_t matches() const { return pairs.size(); }
};

// Runs the configured stages in order. Within a stage each unmatched candidate
// token, left to right, takes the earliest unused reference token that it
// matches.
Alignment align(const TokenSequence& cand, const TokenSequence& ref,
                const MeteorParams& params = {});

// Maximal runs in which successive pairs advance both indices by exactly one.
// Pairs must be sorted by candidate index.
std::size_t chunk_count(std::span<const std::pair<std::size_t, std::size_t>> pairs);

struct MeteorBreakdown {
  std::size_t matches = 0;
  std::size_t chunks = 0;
  double precision = 0.0;
  double recall = 0.0;
  double fmean = 0.0;
  double penalty = 0.0;
  double score = 0.0;
};

MeteorBreakdown meteor_breakdown(const TokenSequence& cand, const TokenSequence& ref,
                                 const MeteorParams& params = {});

double meteor(const TokenSequence& cand, const TokenSequence& ref,
              const MeteorParams& params = {});

}  // namespace chatgrade
