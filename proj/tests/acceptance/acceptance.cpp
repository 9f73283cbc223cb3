// One PASS/FAIL line per acceptance criterion. Progress goes to stderr.
#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "seqrules/config.hpp"
#include "seqrules/error.hpp"
#include "seqrules/trainer.hpp"

using namespace seqrules;
namespace fs = std::filesystem;

namespace {

const fs::path kSource = SEQRULES_SOURCE_DIR;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Run {
  train::Report report;
  std::uint64_t seed = 0;
};

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

config::RunConfig load(const std::string& name) { return config::parse_config(kSource / "configs" / name); }

Run run(const config::RunConfig& base, std::uint64_t seed, bool baseline = false, bool pretrain = true) {
  config::RunConfig cfg = base;
  cfg.train.seed = seed;
  cfg.train.pretrain = pretrain;
  const data::Dataset ds = config::load_dataset(cfg.dataset, seed);
  const auto targets = cfg.targets.empty() ? train::default_targets(ds) : cfg.targets;
  Run r{baseline ? train::run_hard_baseline(ds, cfg.train, targets) : train::run_experiment(ds, cfg.train, targets),
        seed};
  std::fprintf(stderr, "  %s seed %llu%s%s: N %.4f R %.4f rules %zu %.1fs\n", ds.name.c_str(),
               static_cast<unsigned long long>(seed), baseline ? " baseline" : "", pretrain ? "" : " no-pretrain",
               r.report.accuracy_neural, r.report.accuracy_rules, r.report.rules.size(), r.report.seconds);
  return r;
}

std::vector<Run> runs(const config::RunConfig& cfg, std::uint64_t seeds, bool pretrain = true) {
  std::vector<Run> out;
  for (std::uint64_t s = 1; s <= seeds; ++s) out.push_back(run(cfg, s, false, pretrain));
  return out;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

Outcome synthetic(const std::string& name) {
  const auto cfg = load(name);
  std::size_t hits = 0;
  double slowest = 0.0;
  for (const auto& r : runs(cfg, 10)) {
    slowest = std::max(slowest, r.report.seconds);
    if (r.report.rules.empty()) continue;
    const auto& top = r.report.rules.front();
    if (top.test_precision == 1.0 && top.test_recall == 1.0) ++hits;
  }
  return {hits >= 8 && slowest < 60.0, fmt("top rule p=r=1 on test in %zu/10 seeds (need 8), slowest %.1fs (limit 60)",
                                           hits, slowest)};
}

Outcome best_of_five(const std::string& name, double need_n, double need_r,
                     std::optional<double> time_limit = std::nullopt) {
  const auto all = runs(load(name), 5);
  const Run* best = &all.front();
  bool ok = false;
  double slowest = 0.0;
  for (const auto& r : all) {
    slowest = std::max(slowest, r.report.seconds);
    const bool meets = r.report.accuracy_neural >= need_n && r.report.accuracy_rules >= need_r;
    const double score = r.report.accuracy_neural + r.report.accuracy_rules;
    if ((meets && !ok) || (meets == ok && score > best->report.accuracy_neural + best->report.accuracy_rules)) best = &r;
    ok = ok || meets;
  }
  std::string detail = fmt("best seed %llu: N %.4f (need %.2f) R %.4f (need %.2f), slowest %.1fs",
                           static_cast<unsigned long long>(best->seed), best->report.accuracy_neural, need_n,
                           best->report.accuracy_rules, need_r, slowest);
  if (time_limit) detail += fmt(" (limit %.0f)", *time_limit);
  return {ok && slowest <= time_limit.value_or(slowest), detail};
}

Outcome ecg() {
  const auto all = runs(load("ecg200.json"), 5);
  const Run* best = nullptr;
  for (const auto& r : all) {
    const bool has_rule = std::any_of(r.report.rules.begin(), r.report.rules.end(),
                                      [](const logic::Rule& rule) { return rule.precision.value_or(0.0) >= 0.80; });
    if (has_rule && (!best || r.report.accuracy_neural > best->report.accuracy_neural)) best = &r;
  }
  if (!best) return {false, "no seed produced a rule with training precision >= 0.80"};
  double top = 0.0;
  for (const auto& rule : best->report.rules) top = std::max(top, rule.precision.value_or(0.0));
  return {best->report.accuracy_neural >= 0.82,
          fmt("best seed %llu: rule train precision %.4f (need 0.80), N %.4f (need 0.82)",
              static_cast<unsigned long long>(best->seed), top, best->report.accuracy_neural)};
}

Outcome mnist() {
  const auto cfg = load("mnist.json");
  const Run r = run(cfg, 1);
  double top = 0.0;
  for (const auto& rule : r.report.rules) top = std::max(top, rule.test_precision.value_or(0.0));
  return {top > 0.9 && r.report.accuracy_neural >= 0.95,
          fmt("best rule test precision %.4f (need > 0.9), N %.4f (need 0.95)", top, r.report.accuracy_neural)};
}

Outcome speed() {
  bool ok = true;
  std::string detail;
  for (const char* name : {"coffee.json", "ecg200.json"}) {
    const auto cfg = load(name);
    const Run diff = run(cfg, 1);
    const Run hard = run(cfg, 1, true);
    const double ratio = diff.report.seconds / hard.report.seconds;
    const double drop = hard.report.accuracy_rules - diff.report.accuracy_rules;
    ok = ok && ratio <= 0.5 && drop <= 0.05;
    detail += fmt("%s time ratio %.3f (limit 0.5), R %.4f vs baseline %.4f; ", cfg.dataset.path.filename().c_str(),
                  ratio, diff.report.accuracy_rules, hard.report.accuracy_rules);
  }
  detail.resize(detail.size() - 2);
  return {ok, detail};
}

Outcome pretraining() {
  const auto cfg = load("coffee.json");
  std::vector<double> with, without;
  for (const auto& r : runs(cfg, 5, true)) with.push_back(r.report.accuracy_neural);
  for (const auto& r : runs(cfg, 5, false)) without.push_back(r.report.accuracy_neural);
  const double a = median(with), b = median(without);
  return {a - b >= 0.05, fmt("median N with pretraining %.4f, without %.4f, gap %.4f (need 0.05)", a, b, a - b)};
}

std::size_t matching_tests(const std::string& filter) {
  const std::string cmd = std::string("\"") + UNIT_TESTS_PATH + "\" --count -tc=\"" + filter + "\" 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return 0;
  std::string out;
  char buf[256];
  while (std::fgets(buf, sizeof buf, pipe)) out += buf;
  pclose(pipe);
  const auto colon = out.rfind(':');
  return colon == std::string::npos ? 0 : std::strtoull(out.c_str() + colon + 1, nullptr, 10);
}

Outcome properties() {
  const std::vector<std::pair<const char*, const char*>> parts = {
      {"a", "net_backward agrees*,sequence gradients agree*,rulenet gradients agree*"},
      {"b", "every activated weight matrix and the program tensor are row-stochastic"},
      {"c", "tp_step equals set-based*"},
      {"d", "rule network with program weights emulates*"},
      {"e", "soft assignment at alpha 1e6*"},
      {"f", "every region block of a fuzzy interpretation sums to one"},
      {"g", "raising tau only shrinks rule bodies"},
  };
  std::string failed;
  for (const auto& [tag, filter] : parts) {
    const std::size_t expected = tag == std::string("a") ? 3 : 1;
    const std::string cmd = std::string("\"") + UNIT_TESTS_PATH + "\" --no-intro --minimal -tc=\"" + filter + "\"" +
                            " >/dev/null 2>&1";
    if (matching_tests(filter) != expected || std::system(cmd.c_str()) != 0) failed += std::string(" ") + tag;
  }
  return {failed.empty(), failed.empty() ? "(a)-(g) hold" : "failing:" + failed};
}

}  // namespace

/// With arguments, only the listed criterion numbers run.
int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"synthetic triangular rule recovery", [] { return synthetic("triangular.json"); }},
      {"synthetic trigonometric rule recovery", [] { return synthetic("trigonometric.json"); }},
      {"Coffee accuracy", [] { return best_of_five("coffee.json", 0.95, 0.90, 300.0); }},
      {"ItalyPowerDemand accuracy", [] { return best_of_five("italypower.json", 0.87, 0.87); }},
      {"ECG200 rule precision and accuracy", ecg},
      {"MNIST 1 vs 0", mnist},
      {"speed against the hard k-means baseline", speed},
      {"pretraining ablation on Coffee", pretraining},
      {"property suite", properties},
  };
  std::vector<bool> selected(criteria.size(), argc == 1);
  for (int a = 1; a < argc; ++a) {
    const unsigned long n = std::strtoul(argv[a], nullptr, 10);
    if (n >= 1 && n <= criteria.size()) selected[n - 1] = true;
  }
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (!selected[i]) continue;
    const auto& [title, check] = criteria[i];
    std::fprintf(stderr, "criterion %zu: %s\n", i + 1, title);
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    failures += o.pass ? 0 : 1;
    std::printf("%s %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, title, o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
