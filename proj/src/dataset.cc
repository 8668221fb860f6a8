#include "chatgrade/dataset.h"

#include <fmt/format.h>
#include <unicode/utf8.h>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <iterator>
#include <map>
#include <ostream>
#include <set>

#include "chatgrade/error.h"
#include "json.hpp"

namespace chatgrade {
namespace {

using json = nlohmann::ordered_json;

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

std::string slurp(std::istream& in) {
  std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  if (in.bad()) throw IoError("read failed");
  return text;
}

void require_utf8(std::string_view text) {
  const auto* bytes = reinterpret_cast<const uint8_t*>(text.data());
  const auto length = static_cast<int32_t>(text.size());
  std::size_t line = 1;
  for (int32_t i = 0; i < length;) {
    const int32_t start = i;
    UChar32 c;
    U8_NEXT(bytes, i, length, c);
    if (c < 0) {
      throw EncodingError(fmt::format("line {}: invalid UTF-8 at byte offset {}", line, start));
    }
    if (c == '\n') ++line;
  }
}

std::string_view strip_bom(std::string_view text) {
  if (text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);
  return text;
}

void check_record(const EvalRecord& r, std::size_t line) {
  if (r.prompt.empty()) throw SchemaError(fmt::format("line {}: empty prompt", line));
  if (r.reference.empty()) throw SchemaError(fmt::format("line {}: empty reference", line));
}

void check_unique_ids(const std::vector<EvalRecord>& records) {
  std::set<std::string_view> seen;
  for (const auto& r : records) {
    if (!seen.insert(r.id).second) throw SchemaError("duplicate record id: " + r.id);
  }
}

std::optional<std::string> non_empty(std::string value) {
  if (value.empty()) return std::nullopt;
  return value;
}

// Line number of each CSV record's first character, kept alongside the rows
// so schema errors can point at the source.
struct CsvTable {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> lines;
};

CsvTable parse_csv_with_lines(std::string_view text) {
  text = strip_bom(text);
  CsvTable table;
  std::vector<std::string> row;
  std::string field;
  std::size_t line = 1;
  std::size_t row_line = 1;
  std::size_t quote_line = 0;
  bool in_quotes = false;
  bool field_was_quoted = false;
  bool after_quote = false;  // closing quote seen; only a separator may follow

  auto end_field = [&] {
    row.push_back(std::move(field));
    field.clear();
    field_was_quoted = false;
    after_quote = false;
  };
  auto end_row = [&] {
    const bool blank = row.empty() && field.empty() && !field_was_quoted;
    end_field();
    if (!blank) {
      table.rows.push_back(std::move(row));
      table.lines.push_back(row_line);
    }
    row.clear();
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
          after_quote = true;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case ',':
        end_field();
        break;
      case '\r':
        if (i + 1 < text.size() && text[i + 1] == '\n') break;
        throw ParseError("bare carriage return outside quotes", line);
      case '\n':
        end_row();
        ++line;
        row_line = line;
        break;
      case '"':
        if (!field.empty() || after_quote) {
          throw ParseError("unexpected quote inside unquoted field", line);
        }
        in_quotes = true;
        field_was_quoted = true;
        quote_line = line;
        break;
      default:
        if (after_quote) throw ParseError("unexpected character after closing quote", line);
        field.push_back(c);
    }
  }
  if (in_quotes) throw ParseError("unterminated quoted field", quote_line);
  if (!field.empty() || !row.empty() || field_was_quoted) end_row();
  return table;
}

std::vector<EvalRecord> read_csv_records(std::string_view text) {
  const CsvTable table = parse_csv_with_lines(text);
  if (table.rows.empty()) throw SchemaError("missing CSV header");

  const auto& header = table.rows.front();
  std::map<std::string, std::size_t> column;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (!column.emplace(header[i], i).second) {
      throw SchemaError("duplicate column in header: " + header[i]);
    }
  }
  for (const char* required : {"prompt", "reference"}) {
    if (!column.contains(required)) {
      throw SchemaError(fmt::format("missing required column: {}", required));
    }
  }
  const auto optional_col = [&](const char* name) -> std::optional<std::size_t> {
    const auto it = column.find(name);
    if (it == column.end()) return std::nullopt;
    return it->second;
  };
  const auto id_col = optional_col("id");
  const auto response_col = optional_col("response");

  std::vector<EvalRecord> records;
  for (std::size_t r = 1; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const std::size_t line = table.lines[r];
    if (row.size() != header.size()) {
      throw ParseError(fmt::format("expected {} fields, found {}", header.size(), row.size()),
                       line);
    }
    EvalRecord rec;
    rec.id = id_col && !row[*id_col].empty() ? row[*id_col] : std::to_string(records.size());
    rec.prompt = row[column.at("prompt")];
    rec.reference = row[column.at("reference")];
    if (response_col) rec.response = non_empty(row[*response_col]);
    check_record(rec, line);
    records.push_back(std::move(rec));
  }
  return records;
}

std::string required_string(const json& obj, const char* key, std::size_t line) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError(fmt::format("line {}: missing key \"{}\"", line, key));
  if (!it->is_string()) {
    throw SchemaError(fmt::format("line {}: \"{}\" must be a string", line, key));
  }
  return it->get<std::string>();
}

std::vector<EvalRecord> read_jsonl_records(std::string_view text) {
  std::vector<EvalRecord> records;
  std::size_t line = 0;
  std::size_t pos = 0;
  text = strip_bom(text);
  while (pos < text.size()) {
    ++line;
    const std::size_t nl = std::min(text.find('\n', pos), text.size());
    std::string_view raw = text.substr(pos, nl - pos);
    pos = nl + 1;
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    if (raw.find_first_not_of(" \t") == std::string_view::npos) continue;

    json obj;
    try {
      obj = json::parse(raw);
    } catch (const json::parse_error& e) {
      throw ParseError(std::string("invalid JSON: ") + e.what(), line);
    }
    if (!obj.is_object()) throw SchemaError(fmt::format("line {}: expected a JSON object", line));

    EvalRecord rec;
    rec.prompt = required_string(obj, "prompt", line);
    rec.reference = required_string(obj, "reference", line);
    if (const auto it = obj.find("response"); it != obj.end() && !it->is_null()) {
      if (!it->is_string()) {
        throw SchemaError(fmt::format("line {}: \"response\" must be a string", line));
      }
      rec.response = non_empty(it->get<std::string>());
    }
    if (const auto it = obj.find("id"); it != obj.end() && !it->is_null()) {
      if (it->is_string()) {
        rec.id = it->get<std::string>();
      } else if (it->is_number_integer()) {
        rec.id = it->dump();
      } else {
        throw SchemaError(fmt::format("line {}: \"id\" must be a string or integer", line));
      }
    } else {
      rec.id = std::to_string(records.size());
    }
    check_record(rec, line);
    records.push_back(std::move(rec));
  }
  return records;
}

double parse_score_value(std::string_view text, std::string_view where) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw SchemaError(fmt::format("{}: not a number: \"{}\"", where, text));
  }
  if (!(value >= 0.0 && value <= 1.0)) {
    throw SchemaError(fmt::format("{}: score {} outside [0, 1]", where, text));
  }
  return value;
}

Metric require_metric(std::string_view name) {
  const auto m = parse_metric(name);
  if (!m) throw SchemaError("unknown metric column: " + std::string(name));
  return *m;
}

std::vector<ScoreRow> read_csv_scores(std::string_view text) {
  const CsvTable table = parse_csv_with_lines(text);
  if (table.rows.empty()) throw SchemaError("missing CSV header");
  const auto& header = table.rows.front();
  if (header.empty() || header[0] != "id") throw SchemaError("score header must start with id");
  std::vector<Metric> metrics;
  for (std::size_t i = 1; i < header.size(); ++i) metrics.push_back(require_metric(header[i]));

  std::vector<ScoreRow> rows;
  for (std::size_t r = 1; r < table.rows.size(); ++r) {
    const auto& fields = table.rows[r];
    const std::size_t line = table.lines[r];
    if (fields.size() != header.size()) {
      throw ParseError(fmt::format("expected {} fields, found {}", header.size(), fields.size()),
                       line);
    }
    ScoreRow row{fields[0], {}};
    for (std::size_t i = 0; i < metrics.size(); ++i) {
      row.scores.set(metrics[i], parse_score_value(fields[i + 1], fmt::format("line {}", line)));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<ScoreRow> read_json_scores(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what(), 0);
  }
  if (!doc.is_array()) throw SchemaError("score JSON must be an array of objects");
  std::vector<ScoreRow> rows;
  for (const auto& item : doc) {
    if (!item.is_object() || !item.contains("id") || !item["id"].is_string()) {
      throw SchemaError("each score object needs a string id");
    }
    ScoreRow row{item["id"].get<std::string>(), {}};
    for (const auto& [key, value] : item.items()) {
      if (key == "id") continue;
      const Metric m = require_metric(key);
      if (!value.is_number()) throw SchemaError("record " + row.id + ": " + key + " not a number");
      const double v = value.get<double>();
      if (!(v >= 0.0 && v <= 1.0)) {
        throw SchemaError("record " + row.id + ": " + key + " outside [0, 1]");
      }
      row.scores.set(m, v);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void check_stream(std::ostream& out) {
  if (!out) throw IoError("write failed");
}

}  // namespace

RecordFormat record_format_for_path(std::string_view path) {
  return ends_with(path, ".jsonl") ? RecordFormat::kJsonl : RecordFormat::kCsv;
}

ScoreFormat score_format_for_path(std::string_view path) {
  return ends_with(path, ".json") ? ScoreFormat::kJson : ScoreFormat::kCsv;
}

std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
  return parse_csv_with_lines(text).rows;
}

std::string csv_field(std::string_view value) {
  if (value.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(value);
  std::string out = "\"";
  for (char c : value) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::vector<EvalRecord> read_records(std::istream& in, RecordFormat format) {
  const std::string text = slurp(in);
  require_utf8(text);
  auto records = format == RecordFormat::kCsv ? read_csv_records(text) : read_jsonl_records(text);
  check_unique_ids(records);
  return records;
}

std::vector<EvalRecord> read_records_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  return read_records(in, record_format_for_path(path));
}

void write_records(const std::vector<EvalRecord>& records, std::ostream& out,
                   RecordFormat format) {
  if (format == RecordFormat::kCsv) {
    out << "id,prompt,reference,response\n";
    for (const auto& r : records) {
      out << csv_field(r.id) << ',' << csv_field(r.prompt) << ',' << csv_field(r.reference) << ','
          << csv_field(r.response.value_or("")) << '\n';
    }
  } else {
    for (const auto& r : records) {
      json obj;
      obj["id"] = r.id;
      obj["prompt"] = r.prompt;
      obj["reference"] = r.reference;
      obj["response"] = r.response ? json(*r.response) : json(nullptr);
      out << obj.dump() << '\n';
    }
  }
  check_stream(out);
}

std::string format_score(double value) { return fmt::format("{:.6f}", value); }

void write_scores(const std::vector<ScoreRow>& rows, std::ostream& out, ScoreFormat format,
                  const std::vector<Metric>& metrics) {
  std::vector<Metric> columns = metrics;
  std::sort(columns.begin(), columns.end());
  columns.erase(std::unique(columns.begin(), columns.end()), columns.end());

  if (format == ScoreFormat::kCsv) {
    out << "id";
    for (Metric m : columns) out << ',' << metric_name(m);
    out << '\n';
    for (const auto& row : rows) {
      out << csv_field(row.id);
      for (Metric m : columns) out << ',' << format_score(row.scores.at(m));
      out << '\n';
    }
  } else {
    json doc = json::array();
    for (const auto& row : rows) {
      json obj;
      obj["id"] = row.id;
      for (Metric m : columns) obj[std::string(metric_name(m))] = row.scores.at(m);
      doc.push_back(std::move(obj));
    }
    out << doc.dump(2) << '\n';
  }
  check_stream(out);
}

std::vector<ScoreRow> read_scores(std::istream& in, ScoreFormat format) {
  const std::string text = slurp(in);
  require_utf8(text);
  return format == ScoreFormat::kCsv ? read_csv_scores(text) : read_json_scores(text);
}

}  // namespace chatgrade
