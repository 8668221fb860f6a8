#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chatgrade/bleu.h"
#include "chatgrade/meteor.h"
#include "chatgrade/rouge.h"
#include "chatgrade/text.h"

namespace chatgrade {

// Declaration order is the canonical column order.
enum class Metric { kBleu, kMeteor, kRouge1, kRouge2, kRougeL, kRougeS, kRougeW };

inline constexpr std::size_t kMetricCount = 7;
inline constexpr std::array<Metric, kMetricCount> kAllMetrics = {
    Metric::kBleu,   Metric::kMeteor, Metric::kRouge1, Metric::kRouge2,
    Metric::kRougeL, Metric::kRougeS, Metric::kRougeW};

std::string_view metric_name(Metric m);
std::optional<Metric> parse_metric(std::string_view name);

// Comma-separated metric names, deduplicated and returned in canonical order.
// Throws std::invalid_argument on an unknown name or an empty list.
std::vector<Metric> parse_metric_list(std::string_view csv);

// Per-record metric values; a metric that was not computed is absent.
class ScoreVector {
 public:
  void set(Metric m, double value) { values_[index(m)] = value; }
  bool has(Metric m) const { return values_[index(m)].has_value(); }
  std::optional<double> get(Metric m) const { return values_[index(m)]; }
  double at(Metric m) const;
  std::vector<Metric> metrics() const;

  friend bool operator==(const ScoreVector&, const ScoreVector&) = default;

 private:
  static std::size_t index(Metric m) { return static_cast<std::size_t>(m); }
  std::array<std::optional<double>, kMetricCount> values_{};
};

// Which ScoreTriple component becomes the headline value in a ScoreVector.
enum class TripleComponent { kRecall, kPrecision, kF };

double component(const ScoreTriple& t, TripleComponent c);

struct MetricConfig {
  TokenizerConfig tokenizer;
  BleuConfig bleu;
  MeteorParams meteor;
  RougeConfig rouge;
  TripleComponent rouge_n_component = TripleComponent::kRecall;
  TripleComponent rouge_lsw_component = TripleComponent::kF;

  void validate() const;
};

ScoreVector score_tokens(const TokenSequence& response, const TokenSequence& reference,
                         const MetricConfig& cfg, const std::vector<Metric>& metrics);

ScoreVector score_texts(std::string_view response, std::string_view reference,
                        const MetricConfig& cfg,
                        const std::vector<Metric>& metrics = {kAllMetrics.begin(),
                                                              kAllMetrics.end()});

}  // namespace chatgrade
