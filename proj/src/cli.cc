#include "chatgrade/cli.h"

#include <fmt/format.h>

#include <atomic>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "chatgrade/dataset.h"
#include "chatgrade/error.h"
#include "chatgrade/http_transport.h"
#include "chatgrade/report.h"
#include "chatgrade/scoring.h"

namespace chatgrade {
namespace {

// A usage problem found after CLI11 parsing succeeded (bad metric name,
// out-of-range parameter, ...).
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ScoreOptions {
  std::string input;
  std::string output = "-";
  std::string metrics = "bleu,meteor,rouge1,rouge2,rougeL,rougeS,rougeW";
  std::string format;
  int jobs = 1;
  std::size_t bleu_max_order = 4;
  double bleu_epsilon = 1e-9;
  double meteor_alpha = 0.9;
  double meteor_beta = 3.0;
  double meteor_gamma = 0.5;
  bool meteor_stem = false;
  double rouge_wlcs_alpha = 1.2;
  std::string rouge_skip_gap = "unlimited";
  double rouge_beta = 1.0;
  std::string rouge_n_value = "recall";
  std::string rouge_lsw_value = "f";
  bool strip_punct = false;
  bool keep_case = false;
};

struct GenerateOptions {
  std::string input;
  std::string output = "-";
  bool force = false;
  CompletionConfig completion;
  long backoff_ms = 500;
};

struct ReportOptions {
  std::string scores;
  std::string output = "-";
  std::string format;
};

TripleComponent parse_component(const std::string& name) {
  if (name == "recall") return TripleComponent::kRecall;
  if (name == "precision") return TripleComponent::kPrecision;
  return TripleComponent::kF;
}

MetricConfig metric_config(const ScoreOptions& o) {
  MetricConfig cfg;
  cfg.tokenizer.punctuation = o.strip_punct ? TokenizerConfig::Punctuation::kStrip
                                            : TokenizerConfig::Punctuation::kIsolate;
  cfg.tokenizer.lowercase = !o.keep_case;
  cfg.bleu.max_order = o.bleu_max_order;
  cfg.bleu.epsilon = o.bleu_epsilon;
  cfg.meteor.alpha = o.meteor_alpha;
  cfg.meteor.beta = o.meteor_beta;
  cfg.meteor.gamma = o.meteor_gamma;
  if (o.meteor_stem) cfg.meteor.stages = {MatchStage::kExact, MatchStage::kStem};
  cfg.rouge.wlcs_alpha = o.rouge_wlcs_alpha;
  cfg.rouge.f_beta = o.rouge_beta;
  if (o.rouge_skip_gap != "unlimited") {
    std::size_t gap = 0;
    const auto* end = o.rouge_skip_gap.data() + o.rouge_skip_gap.size();
    const auto [ptr, ec] = std::from_chars(o.rouge_skip_gap.data(), end, gap);
    if (ec != std::errc() || ptr != end) {
      throw UsageError("--rouge.skip-gap expects a non-negative integer or \"unlimited\"");
    }
    cfg.rouge.skip_max_gap = gap;
  }
  cfg.rouge_n_component = parse_component(o.rouge_n_value);
  cfg.rouge_lsw_component = parse_component(o.rouge_lsw_value);
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return cfg;
}

void require_file(const std::string& path) {
  if (path == "-") return;
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) throw IoError("no such file: " + path);
}

void require_output_dir(const std::string& path) {
  if (path == "-") return;
  const auto parent = std::filesystem::path(path).parent_path();
  std::error_code ec;
  if (!parent.empty() && !std::filesystem::is_directory(parent, ec)) {
    throw IoError("output directory does not exist: " + parent.string());
  }
}

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::ostringstream buf;
    buf << std::cin.rdbuf();
    return buf.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_output(const std::string& path, const std::string& data, std::ostream& stdout_stream) {
  if (path == "-") {
    stdout_stream << data;
    stdout_stream.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << data;
  out.close();
  if (!out) throw IoError("write to " + path + " failed");
}

int run_score(const ScoreOptions& o, std::ostream& out, std::ostream& err) {
  std::vector<Metric> metrics;
  try {
    metrics = parse_metric_list(o.metrics);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const MetricConfig cfg = metric_config(o);
  require_file(o.input);
  require_output_dir(o.output);

  std::istringstream input(read_input(o.input));
  const auto records = read_records(input, record_format_for_path(o.input));

  std::vector<ScoreRow> rows(records.size());
  std::vector<std::optional<std::string>> failures(records.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < records.size(); i = next++) {
      const EvalRecord& rec = records[i];
      try {
        if (!rec.response) throw std::runtime_error("record has no response");
        rows[i] = ScoreRow{rec.id, score_texts(*rec.response, rec.reference, cfg, metrics)};
      } catch (const std::exception& e) {
        failures[i] = e.what();
      }
    }
  };
  const std::size_t jobs = std::min<std::size_t>(std::max(1, o.jobs), records.size());
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }
  bool failed = false;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (failures[i]) {
      err << fmt::format("error: record {}: {}\n", records[i].id, *failures[i]);
      failed = true;
    }
  }
  if (failed) return kExitFailure;

  const ScoreFormat format = o.format.empty() ? score_format_for_path(o.output)
                             : o.format == "json" ? ScoreFormat::kJson
                                                  : ScoreFormat::kCsv;
  std::ostringstream buf;
  write_scores(rows, buf, format, metrics);
  write_output(o.output, buf.str(), out);
  err << fmt::format("scored {} records\n", rows.size());
  return kExitOk;
}

int run_generate(GenerateOptions o, const CliContext& ctx, std::ostream& out,
                 std::ostream& err) {
  o.completion.retry.backoff_base = std::chrono::milliseconds(o.backoff_ms);
  try {
    o.completion.validate();
  } catch (const ConfigError& e) {
    throw UsageError(e.what());
  }
  require_file(o.input);
  require_output_dir(o.output);

  std::istringstream input(read_input(o.input));
  const auto records = read_records(input, record_format_for_path(o.input));

  if (!o.force) {
    std::vector<std::string> filled;
    for (const auto& r : records) {
      if (r.response) filled.push_back(r.id);
    }
    if (!filled.empty()) {
      err << fmt::format(
          "error: {} record(s) already have responses (ids: {}); pass --force to overwrite\n",
          filled.size(), fmt::join(filled, ", "));
      return kExitFailure;
    }
  }

  std::unique_ptr<Transport> transport =
      ctx.make_transport ? ctx.make_transport() : std::make_unique<HttpTransport>();
  CompletionClient client(
      o.completion, *transport, ctx.env,
      [&err](std::string_view msg) { err << msg << '\n'; }, ctx.sleep);
  const auto outcomes = client.generate_batch(records);

  std::vector<EvalRecord> filled;
  std::size_t failed = 0;
  for (const auto& outcome : outcomes) {
    filled.push_back(outcome.record);
    if (!outcome.ok()) ++failed;
  }
  std::ostringstream buf;
  write_records(filled, buf, record_format_for_path(o.output));
  write_output(o.output, buf.str(), out);
  err << fmt::format("generated {} of {} responses\n", outcomes.size() - failed, outcomes.size());
  return failed == 0 ? kExitOk : kExitFailure;
}

int run_report(const ReportOptions& o, std::ostream& out, std::ostream& err) {
  std::optional<ReportFormat> format;
  if (!o.format.empty()) {
    format = parse_report_format(o.format);
  } else if (o.output.ends_with(".svg")) {
    format = ReportFormat::kSvg;
  } else if (o.output.ends_with(".csv")) {
    format = ReportFormat::kCsv;
  } else {
    format = ReportFormat::kJson;
  }
  require_file(o.scores);
  require_output_dir(o.output);

  std::istringstream input(read_input(o.scores));
  const auto rows = read_scores(input, score_format_for_path(o.scores));
  if (rows.empty()) throw SchemaError("score file has no rows");
  const AggregateReport rep = aggregate(rows);

  std::ostringstream buf;
  emit_report(rep, *format, buf);
  write_output(o.output, buf.str(), out);
  if (const auto note = rouge_l_vs_meteor(rep)) err << *note << '\n';
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& argv, const CliContext& ctx) {
  std::ostream& out = ctx.out ? *ctx.out : std::cout;
  std::ostream& err = ctx.err ? *ctx.err : std::cerr;

  CLI::App app{"Grade chatbot responses against reference answers with BLEU, METEOR and ROUGE.",
               "chatgrade"};
  app.require_subcommand(1);

  ScoreOptions score;
  auto* score_cmd = app.add_subcommand("score", "Score every record's response");
  score_cmd->add_option("--input", score.input, "Records (.csv or .jsonl)")->required();
  score_cmd->add_option("--output", score.output, "Score file, - for stdout");
  score_cmd->add_option("--metrics", score.metrics, "Comma-separated metric names");
  score_cmd->add_option("--format", score.format, "csv or json (default: from --output)")
      ->check(CLI::IsMember({"csv", "json"}));
  score_cmd->add_option("--jobs", score.jobs, "Records scored in parallel")
      ->check(CLI::PositiveNumber);
  score_cmd->add_option("--bleu.max-order", score.bleu_max_order, "Highest n-gram order");
  score_cmd->add_option("--bleu.epsilon", score.bleu_epsilon, "Floor for zero precisions");
  score_cmd->add_option("--meteor.alpha", score.meteor_alpha, "Precision weight in the F-mean");
  score_cmd->add_option("--meteor.beta", score.meteor_beta, "Fragmentation exponent");
  score_cmd->add_option("--meteor.gamma", score.meteor_gamma, "Maximum fragmentation penalty");
  score_cmd->add_flag("--meteor.stem", score.meteor_stem, "Add a Porter-stem match stage");
  score_cmd->add_option("--rouge.wlcs-alpha", score.rouge_wlcs_alpha, "ROUGE-W run exponent");
  score_cmd->add_option("--rouge.skip-gap", score.rouge_skip_gap,
                        "ROUGE-S maximum gap, or \"unlimited\"");
  score_cmd->add_option("--rouge.beta", score.rouge_beta, "F-measure beta");
  score_cmd->add_option("--rouge.n-value", score.rouge_n_value, "ROUGE-1/2 reported value")
      ->check(CLI::IsMember({"recall", "precision", "f"}));
  score_cmd->add_option("--rouge.lsw-value", score.rouge_lsw_value,
                        "ROUGE-L/S/W reported value")
      ->check(CLI::IsMember({"recall", "precision", "f"}));
  score_cmd->add_flag("--tokenizer.strip-punct", score.strip_punct,
                      "Drop punctuation instead of isolating it");
  score_cmd->add_flag("--tokenizer.keep-case", score.keep_case, "Do not lowercase");

  GenerateOptions gen;
  auto* gen_cmd = app.add_subcommand("generate", "Fill responses from a completion endpoint");
  gen_cmd->add_option("--input", gen.input, "Records (.csv or .jsonl)")->required();
  gen_cmd->add_option("--output", gen.output, "Filled records, - for stdout");
  gen_cmd->add_flag("--force", gen.force, "Overwrite existing responses");
  gen_cmd->add_option("--base-url", gen.completion.base_url, "Endpoint base URL");
  gen_cmd->add_option("--model", gen.completion.model, "Model identifier");
  gen_cmd->add_option("--max-tokens", gen.completion.max_tokens, "Completion length cap");
  gen_cmd->add_option("--temperature", gen.completion.temperature, "Sampling temperature");
  gen_cmd->add_option("--api-key-env", gen.completion.api_key_env,
                      "Environment variable holding the API key");
  gen_cmd->add_option("--max-concurrent", gen.completion.max_concurrent,
                      "Requests in flight");
  gen_cmd->add_option("--retries", gen.completion.retry.attempts, "Attempts per request");
  gen_cmd->add_option("--backoff-ms", gen.backoff_ms, "Initial retry backoff");

  ReportOptions rep;
  auto* rep_cmd = app.add_subcommand("report", "Aggregate a score file");
  rep_cmd->add_option("--scores", rep.scores, "Score file (.csv or .json)")->required();
  rep_cmd->add_option("--output", rep.output, "Report file, - for stdout");
  rep_cmd->add_option("--format", rep.format, "csv, json or svg (default: from --output)")
      ->check(CLI::IsMember({"csv", "json", "svg"}));

  std::vector<const char*> args;
  args.reserve(argv.size());
  for (const auto& a : argv) args.push_back(a.c_str());
  if (args.empty()) args.push_back("chatgrade");

  try {
    app.parse(static_cast<int>(args.size()), args.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (score_cmd->parsed()) return run_score(score, out, err);
    if (gen_cmd->parsed()) return run_generate(gen, ctx, out, err);
    return run_report(rep, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace chatgrade
