#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chatgrade/scoring.h"

namespace chatgrade {

// One (prompt, reference, response) triple. An empty response counts as
// absent: the record is still waiting for generation.
struct EvalRecord {
  std::string id;
  std::string prompt;
  std::string reference;
  std::optional<std::string> response;

  friend bool operator==(const EvalRecord&, const EvalRecord&) = default;
};

struct ScoreRow {
  std::string id;
  ScoreVector scores;

  friend bool operator==(const ScoreRow&, const ScoreRow&) = default;
};

enum class RecordFormat { kCsv, kJsonl };
enum class ScoreFormat { kCsv, kJson };

// ".jsonl" selects JSONL, anything else CSV.
RecordFormat record_format_for_path(std::string_view path);
// ".json" selects JSON, anything else CSV.
ScoreFormat score_format_for_path(std::string_view path);

// RFC-4180 reader. Accepts CRLF or LF record terminators, skips blank lines
// and a leading UTF-8 byte order mark. Throws ParseError naming the line.
std::vector<std::vector<std::string>> parse_csv(std::string_view text);
std::string csv_field(std::string_view value);

// Throws ParseError, SchemaError or EncodingError; see README for the schema.
std::vector<EvalRecord> read_records(std::istream& in, RecordFormat format);
std::vector<EvalRecord> read_records_file(const std::string& path);

void write_records(const std::vector<EvalRecord>& records, std::ostream& out,
                   RecordFormat format);

// Fixed six-decimal rendering used by every CSV score column.
std::string format_score(double value);

// Writes the selected columns in canonical metric order. Every row must carry
// every selected metric.
void write_scores(const std::vector<ScoreRow>& rows, std::ostream& out, ScoreFormat format,
                  const std::vector<Metric>& metrics = {kAllMetrics.begin(), kAllMetrics.end()});

// Reads back what write_scores produced. Values outside [0, 1] are a
// SchemaError.
std::vector<ScoreRow> read_scores(std::istream& in, ScoreFormat format);

}  // namespace chatgrade
