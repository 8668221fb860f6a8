// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "chatgrade/bleu.h"
#include "chatgrade/cli.h"
#include "chatgrade/dataset.h"
#include "chatgrade/meteor.h"
#include "chatgrade/report.h"
#include "chatgrade/rouge.h"
#include "chatgrade/scoring.h"
#include "golden.h"
#include "mock_transport.h"
#include "oracles.h"

namespace chatgrade {
namespace {

namespace fs = std::filesystem;
using testing::Words;

const std::string kSample = std::string(CHATGRADE_SOURCE_DIR) + "/samples/quora5.csv";

// Collects the first failed check of a criterion.
class Check {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok && failure_.empty()) failure_ = what;
  }
  bool ok() const { return failure_.empty(); }
  const std::string& failure() const { return failure_; }

 private:
  std::string failure_;
};

bool in_unit(double v) { return std::isfinite(v) && v >= 0.0 && v <= 1.0; }
bool ones(const ScoreTriple& t) { return t.recall == 1.0 && t.precision == 1.0 && t.f == 1.0; }
bool in_unit(const ScoreTriple& t) { return in_unit(t.recall) && in_unit(t.precision) && in_unit(t.f); }

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

int run_cli(std::vector<std::string> args, std::ostream& err) {
  args.insert(args.begin(), "chatgrade");
  std::ostringstream out;
  CliContext ctx;
  ctx.env = testing::fixed_env("sk-acceptance");
  ctx.make_transport = [] {
    return std::make_unique<testing::MockTransport>(testing::echo_handler);
  };
  ctx.sleep = [](std::chrono::milliseconds) {};
  ctx.out = &out;
  ctx.err = &err;
  return run(args, ctx);
}

void identity_suite(Check& c) {
  std::mt19937 rng(1001);
  for (int i = 0; i < 200 && c.ok(); ++i) {
    const TokenSequence x(testing::random_words(rng, 4, 50, 12));
    const double m = static_cast<double>(x.size());
    c.expect(bleu(x, x).score == 1.0, "bleu(x,x) != 1 for " + x.join());
    c.expect(ones(rouge_n(x, x, 1)), "rouge1(x,x) != (1,1,1)");
    c.expect(ones(rouge_n(x, x, 2)), "rouge2(x,x) != (1,1,1)");
    c.expect(ones(rouge_l(x, x)), "rougeL(x,x) != (1,1,1)");
    c.expect(ones(rouge_s(x, x)), "rougeS(x,x) != (1,1,1)");
    c.expect(ones(rouge_w(x, x)), "rougeW(x,x) != (1,1,1)");
    c.expect(std::abs(meteor(x, x) - (1.0 - 0.5 * std::pow(1.0 / m, 3.0))) <= 1e-12,
             "meteor(x,x) off the identity formula");
  }
}

void range_suite(Check& c) {
  std::mt19937 rng(1002);
  MetricConfig stemmed;
  stemmed.meteor.stages = {MatchStage::kExact, MatchStage::kStem};
  for (int i = 0; i < 1000 && c.ok(); ++i) {
    const TokenSequence cand(testing::random_words(rng, 0, 40, 8));
    const TokenSequence ref(testing::random_words(rng, 1, 40, 8));
    const auto b = bleu(cand, ref);
    c.expect(in_unit(b.score) && in_unit(b.brevity_penalty), "bleu out of range");
    for (double p : b.precisions) c.expect(in_unit(p), "bleu precision out of range");
    const auto mb = meteor_breakdown(cand, ref);
    for (double v : {mb.precision, mb.recall, mb.fmean, mb.penalty, mb.score}) {
      c.expect(in_unit(v), "meteor component out of range");
    }
    c.expect(in_unit(rouge_n(cand, ref, 1)) && in_unit(rouge_n(cand, ref, 2)) &&
                 in_unit(rouge_l(cand, ref)) && in_unit(rouge_s(cand, ref)) &&
                 in_unit(rouge_w(cand, ref)),
             "rouge triple out of range");
    for (const MetricConfig& cfg : {MetricConfig{}, stemmed}) {
      const auto v = score_tokens(cand, ref, cfg, {kAllMetrics.begin(), kAllMetrics.end()});
      for (Metric m : kAllMetrics) c.expect(in_unit(v.at(m)), "score vector out of range");
    }
  }
}

void bleu_clipping(Check& c) {
  const auto counts = modified_precision(words("the the the the the the the"),
                                         words("the cat is on the mat"), 1);
  c.expect(counts.matched == 2 && counts.total == 7, "clipped counts are not 2/7");
  c.expect(counts.ratio() == 2.0 / 7.0, "modified precision is not exactly 2/7");
}

void brevity(Check& c) {
  c.expect(std::abs(brevity_penalty(3, 6) - std::exp(-1.0)) <= 1e-12, "BP(3,6) != e^-1");
  for (std::size_t r = 1; r <= 20; ++r) {
    for (std::size_t n = r; n <= 25; ++n) c.expect(brevity_penalty(n, r) == 1.0, "BP != 1");
  }
}

void meteor_fragmentation(Check& c) {
  c.expect(meteor(words("cat the"), words("the cat")) == 0.5, "meteor(cat the, the cat) != 0.5");
}

void rouge_l_example(Check& c) {
  c.expect(std::abs(rouge_l(words("the cat"), words("the cat sat")).f - 0.8) <= 1e-12,
           "rougeL F1 != 0.8");
}

void rouge_s_example(Check& c) {
  c.expect(rouge_s(words("police kill the gunman"), words("police killed the gunman")).recall ==
               0.5,
           "rougeS recall != 0.5");
}

void rouge_w_ordering(Check& c) {
  const auto a = words("A B C D E F G");
  const auto b1 = words("A B C D H I K");
  const auto b2 = words("A H B K C I D");
  c.expect(lcs_length(a, b1) == 4 && lcs_length(a, b2) == 4, "LCS lengths are not both 4");
  c.expect(rouge_w(a, b1).f > rouge_w(a, b2).f, "rougeW does not prefer consecutive matches");
  const Words aw(a.begin(), a.end()), b1w(b1.begin(), b1.end()), b2w(b2.begin(), b2.end());
  c.expect(testing::brute_force_max_run_weight(aw, b1w, 1.2) >
               testing::brute_force_max_run_weight(aw, b2w, 1.2),
           "exhaustive run decomposition disagrees");
}

void oracle_equivalence(Check& c) {
  std::mt19937 rng(1009);
  for (int i = 0; i < 500 && c.ok(); ++i) {
    const auto a = testing::random_words(rng, 0, 10, 3);
    const auto b = testing::random_words(rng, 0, 10, 3);
    c.expect(lcs_length(TokenSequence(a), TokenSequence(b)) == testing::brute_force_lcs(a, b),
             "LCS DP disagrees with exhaustive search");
  }
  for (int i = 0; i < 500 && c.ok(); ++i) {
    const auto cand = testing::random_words(rng, 0, 20, 4);
    const auto ref = testing::random_words(rng, 0, 20, 4);
    const std::size_t n = 1 + rng() % 4;
    const auto [hits, total] = testing::naive_clipped_overlap(cand, ref, n);
    const auto cg = ngrams(TokenSequence(cand), n);
    c.expect(cg.clipped_overlap(ngrams(TokenSequence(ref), n)) == hits && cg.total() == total,
             "clipped overlap disagrees with the naive counter");
  }
}

void golden_run(Check& c, const fs::path& dir) {
  std::ostringstream err;
  const fs::path out = dir / "golden.json";
  c.expect(run_cli({"score", "--input", kSample, "--output", out.string()}, err) == 0,
           "score failed: " + err.str());
  if (!c.ok()) return;
  std::ifstream in(out);
  const auto rows = read_scores(in, ScoreFormat::kJson);
  c.expect(rows.size() == 5, "expected 5 scored records");
  if (!c.ok()) return;
  std::array<double, kMetricCount> sums{};
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t k = 0; k < kMetricCount; ++k) {
      const Metric m = kAllMetrics[k];
      const double v = rows[i].scores.at(m);
      c.expect(in_unit(v), "value out of range");
      c.expect(std::abs(v - testing::kQuoraGolden[i][k]) <= 1e-12,
               "record " + rows[i].id + " " + std::string(metric_name(m)) + " off golden");
      sums[k] += v;
    }
  }
  for (std::size_t k = 0; k < kMetricCount; ++k) {
    c.expect(sums[k] / 5.0 < 0.5, std::string(metric_name(kAllMetrics[k])) + " mean >= 0.5");
  }
}

std::string direction_note() {
  std::vector<ScoreRow> rows;
  for (const auto& r : read_records_file(kSample)) {
    rows.push_back({r.id, score_texts(*r.response, r.reference, MetricConfig{})});
  }
  return rouge_l_vs_meteor(aggregate(rows)).value_or("unavailable");
}

void pipeline_determinism(Check& c, const fs::path& dir) {
  fs::path records = dir / "prompts.csv";
  {
    const auto sample = read_records_file(kSample);
    std::vector<EvalRecord> blank;
    for (auto r : sample) {
      r.response.reset();
      blank.push_back(std::move(r));
    }
    std::ofstream out(records, std::ios::binary);
    write_records(blank, out, RecordFormat::kCsv);
  }
  const std::vector<std::string> artifacts = {"filled.csv", "scores.csv", "report.json",
                                              "report.csv", "report.svg"};
  std::vector<std::string> first;
  for (int pass = 0; pass < 2; ++pass) {
    const fs::path run_dir = dir / ("run" + std::to_string(pass));
    fs::create_directories(run_dir);
    auto p = [&](const std::string& name) { return (run_dir / name).string(); };
    std::ostringstream err;
    c.expect(run_cli({"generate", "--input", records.string(), "--output", p("filled.csv"),
                      "--max-concurrent", "4"},
                     err) == 0,
             "generate failed: " + err.str());
    c.expect(run_cli({"score", "--input", p("filled.csv"), "--output", p("scores.csv"),
                      "--jobs", "3"},
                     err) == 0,
             "score failed: " + err.str());
    for (const char* ext : {"json", "csv", "svg"}) {
      c.expect(run_cli({"report", "--scores", p("scores.csv"), "--output",
                        p(std::string("report.") + ext)},
                       err) == 0,
               "report failed: " + err.str());
    }
    if (!c.ok()) return;
    std::vector<std::string> contents;
    for (const auto& a : artifacts) contents.push_back(read_file(run_dir / a));
    if (pass == 0) {
      first = contents;
    } else {
      for (std::size_t i = 0; i < artifacts.size(); ++i) {
        c.expect(!contents[i].empty() && contents[i] == first[i], artifacts[i] + " differs");
      }
    }
  }
}

}  // namespace
}  // namespace chatgrade

int main() {
  namespace fs = std::filesystem;
  using namespace chatgrade;

  std::random_device rd;
  const fs::path dir = fs::temp_directory_path() / ("chatgrade_acceptance_" + std::to_string(rd()));
  fs::create_directories(dir);

  const std::vector<std::pair<std::string, std::function<void(Check&)>>> criteria = {
      {"identity suite", identity_suite},
      {"range suite", range_suite},
      {"BLEU clipping", bleu_clipping},
      {"brevity penalty", brevity},
      {"METEOR fragmentation", meteor_fragmentation},
      {"ROUGE-L example", rouge_l_example},
      {"ROUGE-S example", rouge_s_example},
      {"ROUGE-W ordering", rouge_w_ordering},
      {"oracle equivalence", oracle_equivalence},
      {"sample golden run", [&](Check& c) { golden_run(c, dir); }},
      {"ROUGE-L vs METEOR direction", {}},
      {"pipeline determinism", [&](Check& c) { pipeline_determinism(c, dir); }},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto& [name, body] = criteria[i];
    if (!body) {
      std::string note;
      try {
        note = direction_note();
      } catch (const std::exception& e) {
        note = std::string("error: ") + e.what();
      }
      std::cout << "[INFO] " << i + 1 << ". " << name << ": " << note << '\n';
      continue;
    }
    Check c;
    try {
      body(c);
    } catch (const std::exception& e) {
      c.expect(false, std::string("exception: ") + e.what());
    }
    std::cout << (c.ok() ? "[PASS] " : "[FAIL] ") << i + 1 << ". " << name;
    if (!c.ok()) std::cout << ": " << c.failure();
    std::cout << '\n';
    if (!c.ok()) ++failures;
  }
  fs::remove_all(dir);
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " failed")
            << '\n';
  return failures == 0 ? 0 : 1;
}
