#include "chatgrade/scoring.h"

#include <algorithm>
#include <stdexcept>

namespace chatgrade {

std::string_view metric_name(Metric m) {
  switch (m) {
    case Metric::kBleu: return "bleu";
    case Metric::kMeteor: return "meteor";
    case Metric::kRouge1: return "rouge1";
    case Metric::kRouge2: return "rouge2";
    case Metric::kRougeL: return "rougeL";
    case Metric::kRougeS: return "rougeS";
    case Metric::kRougeW: return "rougeW";
  }
  return "?";
}

std::optional<Metric> parse_metric(std::string_view name) {
  for (Metric m : kAllMetrics) {
    if (metric_name(m) == name) return m;
  }
  return std::nullopt;
}

std::vector<Metric> parse_metric_list(std::string_view csv) {
  std::array<bool, kMetricCount> wanted{};
  std::size_t pos = 0;
  while (pos <= csv.size()) {
    const std::size_t comma = std::min(csv.find(',', pos), csv.size());
    const std::string_view name = csv.substr(pos, comma - pos);
    if (!name.empty()) {
      const auto m = parse_metric(name);
      if (!m) throw std::invalid_argument("unknown metric: " + std::string(name));
      wanted[static_cast<std::size_t>(*m)] = true;
    }
    pos = comma + 1;
  }
  std::vector<Metric> out;
  for (Metric m : kAllMetrics) {
    if (wanted[static_cast<std::size_t>(m)]) out.push_back(m);
  }
  if (out.empty()) throw std::invalid_argument("no metrics selected");
  return out;
}

double ScoreVector::at(Metric m) const {
  const auto v = get(m);
  if (!v) throw std::out_of_range("metric not present: " + std::string(metric_name(m)));
  return *v;
}

std::vector<Metric> ScoreVector::metrics() const {
  std::vector<Metric> out;
  for (Metric m : kAllMetrics) {
    if (has(m)) out.push_back(m);
  }
  return out;
}

double component(const ScoreTriple& t, TripleComponent c) {
  switch (c) {
    case TripleComponent::kRecall: return t.recall;
    case TripleComponent::kPrecision: return t.precision;
    case TripleComponent::kF: return t.f;
  }
  return t.f;
}

void MetricConfig::validate() const {
  bleu.validate();
  meteor.validate();
  rouge.validate();
}

ScoreVector score_tokens(const TokenSequence& response, const TokenSequence& reference,
                         const MetricConfig& cfg, const std::vector<Metric>& metrics) {
  ScoreVector out;
  for (Metric m : metrics) {
    switch (m) {
      case Metric::kBleu:
        out.set(m, bleu(response, reference, cfg.bleu).score);
        break;
      case Metric::kMeteor:
        out.set(m, meteor(response, reference, cfg.meteor));
        break;
      case Metric::kRouge1:
        out.set(m, component(rouge_n(response, reference, 1, cfg.rouge.f_beta),
                             cfg.rouge_n_component));
        break;
      case Metric::kRouge2:
        out.set(m, component(rouge_n(response, reference, 2, cfg.rouge.f_beta),
                             cfg.rouge_n_component));
        break;
      case Metric::kRougeL:
        out.set(m, component(rouge_l(response, reference, cfg.rouge), cfg.rouge_lsw_component));
        break;
      case Metric::kRougeS:
        out.set(m, component(rouge_s(response, reference, cfg.rouge), cfg.rouge_lsw_component));
        break;
      case Metric::kRougeW:
        out.set(m, component(rouge_w(response, reference, cfg.rouge), cfg.rouge_lsw_component));
        break;
    }
  }
  return out;
}

ScoreVector score_texts(std::string_view response, std::string_view reference,
                        const MetricConfig& cfg, const std::vector<Metric>& metrics) {
  return score_tokens(tokenize(response, cfg.tokenizer), tokenize(reference, cfg.tokenizer), cfg,
                      metrics);
}

}  // namespace chatgrade
