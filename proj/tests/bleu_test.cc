#include "chatgrade/bleu.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "oracles.h"

namespace chatgrade {
namespace {

TEST(ModifiedPrecision, ClipsRepeatedWord) {
  const auto c = modified_precision(words("the the the the the the the"),
                                    words("the cat is on the mat"), 1);
  EXPECT_EQ(c.matched, 2u);
  EXPECT_EQ(c.total, 7u);
  EXPECT_EQ(c.ratio().value(), 2.0 / 7.0);
}

TEST(ModifiedPrecision, Identity) {
  const auto c = modified_precision(words("a b c d"), words("a b c d"), 2);
  EXPECT_EQ(c.matched, 3u);
  EXPECT_EQ(c.total, 3u);
  EXPECT_EQ(c.ratio().value(), 1.0);
}

TEST(ModifiedPrecision, DisjointVocabularies) {
  EXPECT_EQ(modified_precision(words("x y"), words("a b"), 1).ratio().value(), 0.0);
}

TEST(ModifiedPrecision, NoCandidateNgramsIsUndefined) {
  EXPECT_FALSE(modified_precision(words("x y"), words("x y z"), 3).ratio().has_value());
}

TEST(ModifiedPrecision, RejectsOrderZero) {
  EXPECT_THROW(modified_precision(words("a"), words("a"), 0), std::invalid_argument);
}

TEST(ModifiedPrecision, NeverExceedsOneAndMatchesNaiveCounter) {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 500; ++trial) {
    const auto a = testing::random_words(rng, 0, 10, 3);
    const auto b = testing::random_words(rng, 0, 10, 3);
    for (std::size_t n = 1; n <= 4; ++n) {
      const auto c = modified_precision(TokenSequence(a), TokenSequence(b), n);
      const auto [hits, total] = testing::naive_clipped_overlap(a, b, n);
      ASSERT_EQ(c.matched, hits);
      ASSERT_EQ(c.total, total);
      ASSERT_LE(c.matched, c.total);
    }
  }
}

TEST(BrevityPenalty, Values) {
  EXPECT_EQ(brevity_penalty(10, 6), 1.0);
  EXPECT_EQ(brevity_penalty(6, 6), 1.0);
  EXPECT_NEAR(brevity_penalty(3, 6), std::exp(-1.0), 1e-12);
  EXPECT_NEAR(brevity_penalty(3, 6), 0.36788, 1e-5);
  EXPECT_EQ(brevity_penalty(0, 5), 0.0);
  EXPECT_THROW(brevity_penalty(3, 0), std::invalid_argument);
}

TEST(BrevityPenalty, MonotoneInReferenceLength) {
  for (std::size_t c = 1; c < 20; ++c) {
    for (std::size_t r = c; r < 40; ++r) {
      ASSERT_GE(brevity_penalty(c, r), brevity_penalty(c, r + 1));
    }
  }
}

TEST(Bleu, IdentityIsExactlyOne) {
  const auto b = bleu(words("the quick brown fox jumps"), words("the quick brown fox jumps"));
  EXPECT_EQ(b.score, 1.0);
  EXPECT_EQ(b.brevity_penalty, 1.0);
  ASSERT_EQ(b.precisions.size(), 4u);
  for (double p : b.precisions) EXPECT_EQ(p, 1.0);
}

TEST(Bleu, NoOverlapFallsToSmoothingFloor) {
  const auto b = bleu(words("alpha beta"), words("gamma delta epsilon"));
  const double bp = std::exp(1.0 - 3.0 / 2.0);
  EXPECT_NEAR(b.brevity_penalty, bp, 1e-15);
  for (double p : b.precisions) EXPECT_EQ(p, 1e-9);
  EXPECT_NEAR(b.score, bp * 1e-9, 1e-20);
  EXPECT_LT(b.score, 1e-8);
}

TEST(Bleu, EmptyCandidateScoresZero) {
  const auto b = bleu(TokenSequence{}, words("a b c"));
  EXPECT_EQ(b.score, 0.0);
  EXPECT_EQ(b.brevity_penalty, 0.0);
  EXPECT_EQ(b.counts.size(), 4u);
  EXPECT_EQ(b.precisions.size(), 4u);
}

TEST(Bleu, EmptyReferenceIsAnError) {
  EXPECT_THROW(bleu(words("a"), TokenSequence{}), std::invalid_argument);
}

TEST(Bleu, ShortCandidateFloorsHigherOrders) {
  // Two tokens: orders 3 and 4 have no n-grams and are floored, not dropped.
  const auto b = bleu(words("a b"), words("a b"));
  EXPECT_FALSE(b.counts[2].ratio().has_value());
  EXPECT_EQ(b.precisions[2], 1e-9);
  EXPECT_NEAR(b.score, std::exp(0.5 * std::log(1e-9)), 1e-18);
}

TEST(Bleu, CustomWeightsAndOrder) {
  BleuConfig cfg;
  cfg.max_order = 2;
  cfg.weights = {0.75, 0.25};
  // p1 = 3/4, p2 = 1/3; equal lengths so BP = 1.
  const auto b = bleu(words("a b c x"), words("a b c d"), cfg);
  EXPECT_NEAR(b.precisions[0], 0.75, 1e-15);
  EXPECT_NEAR(b.precisions[1], 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(b.score, std::pow(0.75, 0.75) * std::pow(2.0 / 3.0, 0.25), 1e-15);
}

TEST(Bleu, ConfigValidation) {
  BleuConfig cfg;
  cfg.max_order = 0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.weights = {0.5, 0.5};
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg.weights = {0.5, 0.5, 0.5, -0.5};
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.epsilon = 0.0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg.epsilon = 1.0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

TEST(Bleu, BreakdownInvariants) {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    const TokenSequence c(testing::random_words(rng, 0, 15, 4));
    const TokenSequence r(testing::random_words(rng, 1, 15, 4));
    const auto b = bleu(c, r);
    double log_sum = 0.0;
    for (double p : b.precisions) {
      ASSERT_GE(p, 0.0);
      ASSERT_LE(p, 1.0);
      log_sum += 0.25 * std::log(p);
    }
    ASSERT_GE(b.score, 0.0);
    ASSERT_LE(b.score, 1.0);
    ASSERT_NEAR(b.score, b.brevity_penalty * std::exp(log_sum), 1e-12);
  }
}

TEST(Bleu, UnigramPrecisionPermutationInvariant) {
  std::mt19937 rng(9);
  for (int trial = 0; trial < 200; ++trial) {
    auto c = testing::random_words(rng, 1, 12, 5);
    const TokenSequence r(testing::random_words(rng, 1, 12, 5));
    const auto before = modified_precision(TokenSequence(c), r, 1);
    std::shuffle(c.begin(), c.end(), rng);
    const auto after = modified_precision(TokenSequence(c), r, 1);
    ASSERT_EQ(before.matched, after.matched);
    ASSERT_EQ(before.total, after.total);
  }
}

TEST(Bleu, IdentityOnRandomSequences) {
  std::mt19937 rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    const TokenSequence x(testing::random_words(rng, 4, 30, 8));
    ASSERT_EQ(bleu(x, x).score, 1.0);
  }
}

}  // namespace
}  // namespace chatgrade
