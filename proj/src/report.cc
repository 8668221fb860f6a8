#include "chatgrade/report.h"

#include <fmt/format.h>

#include <algorithm>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "chatgrade/error.h"
#include "json.hpp"

namespace chatgrade {
namespace {

using json = nlohmann::ordered_json;

std::string xml_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

// Summing in sorted order makes the mean independent of row order.
double mean_of(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const double sum = std::accumulate(values.begin(), values.end(), 0.0);
  const double mean = sum / static_cast<double>(values.size());
  return std::clamp(mean, values.front(), values.back());
}

// Chart geometry, in SVG user units.
constexpr double kWidth = 720;
constexpr double kMarginLeft = 60;
constexpr double kMarginRight = 20;
constexpr double kPanelHeight = 150;
constexpr double kPanelGap = 50;
constexpr double kTop = 40;

double plot_width() { return kWidth - kMarginLeft - kMarginRight; }

void axes(std::string& svg, double top) {
  const double bottom = top + kPanelHeight;
  svg += fmt::format(
      "<line class=\"axis\" x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" y2=\"{2:.2f}\"/>\n",
      kMarginLeft, top, bottom);
  svg += fmt::format(
      "<line class=\"axis\" x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{2:.2f}\" y2=\"{1:.2f}\"/>\n",
      kMarginLeft, bottom, kMarginLeft + plot_width());
  for (double tick : {0.0, 0.5, 1.0}) {
    const double y = bottom - tick * kPanelHeight;
    svg += fmt::format("<text class=\"tick\" x=\"{:.2f}\" y=\"{:.2f}\">{:.1f}</text>\n",
                       kMarginLeft - 8, y + 4, tick);
  }
}

}  // namespace

AggregateReport aggregate(const std::vector<ScoreRow>& rows) {
  if (rows.empty()) throw std::invalid_argument("cannot aggregate an empty score list");
  AggregateReport rep;
  rep.record_count = rows.size();
  rep.metrics = rows.front().scores.metrics();
  for (const auto& row : rows) {
    if (row.scores.metrics() != rep.metrics) {
      throw SchemaError("record " + row.id + " carries a different metric set");
    }
  }
  for (Metric m : rep.metrics) {
    auto& series = rep.series[m];
    std::vector<double> values;
    for (const auto& row : rows) {
      series.emplace_back(row.id, row.scores.at(m));
      values.push_back(row.scores.at(m));
    }
    rep.means[m] = mean_of(std::move(values));
  }
  return rep;
}

std::optional<ReportFormat> parse_report_format(std::string_view name) {
  if (name == "csv") return ReportFormat::kCsv;
  if (name == "json") return ReportFormat::kJson;
  if (name == "svg") return ReportFormat::kSvg;
  return std::nullopt;
}

void emit_report(const AggregateReport& rep, ReportFormat format, std::ostream& out) {
  switch (format) {
    case ReportFormat::kCsv:
      out << "kind,metric,id,value\n";
      for (Metric m : rep.metrics) {
        out << "mean," << metric_name(m) << ",," << format_score(rep.means.at(m)) << '\n';
      }
      for (Metric m : rep.metrics) {
        for (const auto& [id, value] : rep.series.at(m)) {
          out << "item," << metric_name(m) << ',' << csv_field(id) << ',' << format_score(value)
              << '\n';
        }
      }
      break;
    case ReportFormat::kJson: {
      json doc;
      doc["count"] = rep.record_count;
      json means = json::object();
      json series = json::object();
      for (Metric m : rep.metrics) {
        const std::string name(metric_name(m));
        means[name] = rep.means.at(m);
        json points = json::array();
        for (const auto& [id, value] : rep.series.at(m)) points.push_back(json::array({id, value}));
        series[name] = std::move(points);
      }
      doc["means"] = std::move(means);
      doc["series"] = std::move(series);
      out << doc.dump(2) << '\n';
      break;
    }
    case ReportFormat::kSvg:
      out << render_svg(rep);
      break;
  }
  if (!out) throw IoError("report write failed");
}

std::string render_svg(const AggregateReport& rep) {
  const std::size_t panels = rep.metrics.size() + 1;
  const double height = kTop + static_cast<double>(panels) * (kPanelHeight + kPanelGap);

  std::string svg = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0:.0f}\" height=\"{1:.0f}\" "
      "viewBox=\"0 0 {0:.0f} {1:.0f}\" font-family=\"sans-serif\" font-size=\"12\">\n",
      kWidth, height);
  svg +=
      "<style>.axis{stroke:#333;stroke-width:1}.series{fill:none;stroke:#1f77b4;stroke-width:1.5}"
      ".point{fill:#1f77b4}.bar{fill:#ff7f0e}.tick{text-anchor:end;fill:#333}"
      ".label{font-weight:bold}</style>\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  // Per-response series, one panel per metric.
  const std::size_t n = rep.record_count;
  const double step = n > 1 ? plot_width() / static_cast<double>(n - 1) : 0.0;
  double top = kTop;
  for (Metric m : rep.metrics) {
    const std::string name(metric_name(m));
    svg += fmt::format("<g class=\"panel\" data-metric=\"{}\">\n", name);
    svg += fmt::format("<text class=\"label\" x=\"{:.2f}\" y=\"{:.2f}\">{} per response</text>\n",
                       kMarginLeft, top - 10, name);
    axes(svg, top);
    std::string points;
    std::string markers;
    const auto& series = rep.series.at(m);
    for (std::size_t i = 0; i < series.size(); ++i) {
      const double x = kMarginLeft + (n > 1 ? step * static_cast<double>(i) : plot_width() / 2);
      const double y = top + kPanelHeight - series[i].second * kPanelHeight;
      if (i) points.push_back(' ');
      points += fmt::format("{:.2f},{:.2f}", x, y);
      markers += fmt::format(
          "<circle class=\"point\" cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"3\"><title>{}: {}</title>"
          "</circle>\n",
          x, y, xml_escape(series[i].first), format_score(series[i].second));
    }
    svg += fmt::format("<polyline class=\"series\" points=\"{}\"/>\n", points);
    svg += markers;
    svg += "</g>\n";
    top += kPanelHeight + kPanelGap;
  }

  // Mean of every metric.
  svg += "<g class=\"panel\" data-metric=\"means\">\n";
  svg += fmt::format("<text class=\"label\" x=\"{:.2f}\" y=\"{:.2f}\">mean over {} responses</text>\n",
                     kMarginLeft, top - 10, n);
  axes(svg, top);
  const double slot = plot_width() / static_cast<double>(std::max<std::size_t>(1, rep.metrics.size()));
  for (std::size_t i = 0; i < rep.metrics.size(); ++i) {
    const Metric m = rep.metrics[i];
    const double value = rep.means.at(m);
    const double bar_height = value * kPanelHeight;
    const double x = kMarginLeft + slot * static_cast<double>(i) + slot * 0.15;
    svg += fmt::format(
        "<rect class=\"bar\" x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\">"
        "<title>{}: {}</title></rect>\n",
        x, top + kPanelHeight - bar_height, slot * 0.7, bar_height, metric_name(m),
        format_score(value));
    svg += fmt::format(
        "<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">{}</text>\n",
        x + slot * 0.35, top + kPanelHeight + 16, metric_name(m));
  }
  svg += "</g>\n</svg>\n";
  return svg;
}

std::optional<std::string> rouge_l_vs_meteor(const AggregateReport& rep) {
  const auto l = rep.means.find(Metric::kRougeL);
  const auto m = rep.means.find(Metric::kMeteor);
  if (l == rep.means.end() || m == rep.means.end()) return std::nullopt;
  const char* relation = l->second > m->second ? ">" : (l->second < m->second ? "<" : "=");
  return fmt::format("mean rougeL {:.6f} {} mean meteor {:.6f} over {} records", l->second,
                     relation, m->second, rep.record_count);
}

}  // namespace chatgrade
