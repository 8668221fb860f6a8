#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "chatgrade/dataset.h"

namespace chatgrade {

struct AggregateReport {
  std::size_t record_count = 0;
  std::vector<Metric> metrics;  // canonical order
  std::map<Metric, double> means;
  std::map<Metric, std::vector<std::pair<std::string, double>>> series;  // input order
};

// Unweighted per-metric means. Throws std::invalid_argument on empty input
// and SchemaError when rows do not all carry the same metrics.
AggregateReport aggregate(const std::vector<ScoreRow>& rows);

enum class ReportFormat { kCsv, kJson, kSvg };

std::optional<ReportFormat> parse_report_format(std::string_view name);

// csv:  kind,metric,id,value rows; kind is "mean" (empty id) or "item".
// json: {"count": n, "means": {metric: v}, "series": {metric: [[id, v], ...]}}
// svg:  one line chart per metric plus a bar chart of the means.
void emit_report(const AggregateReport& report, ReportFormat format, std::ostream& out);

std::string render_svg(const AggregateReport& report);

// Compares mean ROUGE-L with mean METEOR when both are present, e.g.
// "mean rougeL 0.150 > mean meteor 0.133 over 5 records".
std::optional<std::string> rouge_l_vs_meteor(const AggregateReport& report);

}  // namespace chatgrade
