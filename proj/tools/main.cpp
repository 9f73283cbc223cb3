#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "seqrules/config.hpp"
#include "seqrules/error.hpp"
#include "seqrules/plot.hpp"
#include "seqrules/report.hpp"
#include "seqrules/trainer.hpp"

namespace fs = std::filesystem;
using namespace seqrules;

namespace {

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  bool no_pretrain = false;
  std::vector<std::size_t> targets;
  std::vector<double> taus;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config, "JSON run configuration (omitted: all defaults)");
  cmd->add_option("--seed", c.seed, "Override training.seed");
  cmd->add_option("--out", c.out, "Override the output directory");
  cmd->add_flag("--no-pretrain", c.no_pretrain, "Skip autoencoder pretraining");
  cmd->add_option("--target-class", c.targets, "Class id(s) to learn rules for");
  cmd->add_option("--tau", c.taus, "Extraction threshold(s), replaces the configured sweep");
}

config::RunConfig resolve(const Common& c) {
  config::RunConfig cfg = c.config.empty() ? config::parse_config_text("") : config::parse_config(c.config);
  if (c.seed) cfg.train.seed = *c.seed;
  if (!c.out.empty()) cfg.output = c.out;
  if (c.no_pretrain) cfg.train.pretrain = false;
  if (!c.targets.empty()) cfg.targets = c.targets;
  if (!c.taus.empty()) cfg.train.taus = c.taus;
  try {
    cfg.train.validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
  config::check_paths(cfg.dataset);
  fs::create_directories(cfg.output);
  std::ofstream echo(cfg.output / "config.json", std::ios::trunc);
  if (!echo) throw IoError("cannot write " + (cfg.output / "config.json").string());
  echo << config::to_json(cfg);
  return cfg;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
}

void print_summary(const train::Report& r) {
  std::printf("dataset %s  acc(neural) %.4f  acc(rules) %.4f  rules %zu  %.2fs\n", r.dataset.c_str(), r.accuracy_neural,
              r.accuracy_rules, r.rules.size(), r.seconds);
  for (std::size_t i = 0; i < r.rules.size() && i < 5; ++i) std::printf("  %s\n", logic::format_rule(r.rules[i]).c_str());
}

void finish(const config::RunConfig& cfg, const train::Report& report, const std::string& name) {
  report::emit_report(report, config::config_hash(cfg), cfg.output / (name + ".json"));
  std::string rules;
  for (const auto& r : report.rules) rules += logic::format_rule(r) + "\n";
  write_text(cfg.output / "rules.lp", rules);
  print_summary(report);
}

fs::path model_path(const config::RunConfig& cfg) { return cfg.output / "model.bin"; }

// Loads the archive from the output directory and applies CLI tau overrides.
std::vector<train::TrainedModel> load_for(const config::RunConfig& cfg) {
  auto models = train::load_models(model_path(cfg));
  for (auto& m : models) m.config.taus = cfg.train.taus;
  return models;
}

int exit_code(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::config: return 2;
    case ErrorCategory::data: return 3;
    case ErrorCategory::training: return 4;
    case ErrorCategory::io: return 5;
    case ErrorCategory::argument: return 6;
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rule learning from sequence data"};
  app.require_subcommand(1);
  Common common;

  auto* gen = app.add_subcommand("gen-data", "Write the configured dataset as UCR-style TSV files");
  auto* train_cmd = app.add_subcommand("train", "Pretrain, train jointly, evaluate, save the model");
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate the saved model on the test split");
  auto* extract = app.add_subcommand("extract", "Print rules extracted from the saved model");
  auto* baseline = app.add_subcommand("baseline", "Hard k-means baseline run");
  auto* sweep_cmd = app.add_subcommand("sweep", "Train once per value of one hyperparameter");
  auto* plot_cmd = app.add_subcommand("plot", "Write SVG highlights of the top rules on test sequences");
  for (auto* c : {gen, train_cmd, eval_cmd, extract, baseline, sweep_cmd, plot_cmd}) add_common(c, common);

  std::string axis = "clusters";
  std::vector<std::size_t> values;
  sweep_cmd->add_option("--axis", axis, "clusters | regions | window_length");
  sweep_cmd->add_option("--values", values, "Axis values, comma separated or repeated")->required()->delimiter(',');
  std::size_t plot_rules = 3, plot_sequences = 2;
  plot_cmd->add_option("--rules", plot_rules, "Number of top rules to draw");
  plot_cmd->add_option("--sequences", plot_sequences, "Positive test sequences drawn per rule");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_code(ErrorCategory::argument);
  }

  try {
    const config::RunConfig cfg = resolve(common);
    const data::Dataset ds = config::load_dataset(cfg.dataset, cfg.train.seed);

    if (gen->parsed()) {
      data::write_ucr(cfg.output / (ds.name + "_TRAIN.tsv"), ds.train);
      data::write_ucr(cfg.output / (ds.name + "_TEST.tsv"), ds.test);
      std::printf("wrote %zu train / %zu test sequences to %s\n", ds.train.size(), ds.test.size(),
                  cfg.output.string().c_str());
    } else if (train_cmd->parsed() || baseline->parsed()) {
      std::vector<train::TrainedModel> models;
      const auto report = train_cmd->parsed() ? train::run_experiment(ds, cfg.train, cfg.targets, &models)
                                              : train::run_hard_baseline(ds, cfg.train, cfg.targets, &models);
      train::save_models(models, train_cmd->parsed() ? model_path(cfg) : cfg.output / "baseline.bin");
      finish(cfg, report, train_cmd->parsed() ? "report" : "baseline_report");
    } else if (eval_cmd->parsed()) {
      const auto models = load_for(cfg);
      finish(cfg, train::evaluate(models, ds), "eval_report");
    } else if (extract->parsed()) {
      for (const auto& m : load_for(cfg)) {
        for (const auto& r : train::extract_scored_rules(m, ds)) std::printf("%s\n", logic::format_rule(r).c_str());
      }
    } else if (sweep_cmd->parsed()) {
      const auto a = report::parse_axis(axis);
      const auto rows = report::sweep(ds, cfg.train, a, values, cfg.targets);
      const std::string table = report::sweep_table(rows, a);
      write_text(cfg.output / ("sweep_" + std::string(report::to_string(a)) + ".tsv"), table);
      std::fputs(table.c_str(), stdout);
    } else if (plot_cmd->parsed()) {
      const auto models = load_for(cfg);
      const auto report = train::evaluate(models, ds);
      std::size_t written = 0;
      for (std::size_t ri = 0; ri < report.rules.size() && ri < plot_rules; ++ri) {
        const auto& rule = report.rules[ri];
        const auto owner = std::find_if(models.begin(), models.end(), [&](const auto& m) { return m.target == rule.head; });
        const auto& model = owner == models.end() ? models.front() : *owner;
        std::size_t drawn = 0;
        for (std::size_t i = 0; i < ds.test.size() && drawn < plot_sequences; ++i) {
          if (ds.test[i].label != rule.head) continue;
          const auto path = cfg.output / ("rule" + std::to_string(ri) + "_test" + std::to_string(i) + ".svg");
          plot::render_highlights(ds.test[i].values, rule, model, path);
          ++drawn;
          ++written;
        }
      }
      std::printf("wrote %zu plots to %s\n", written, cfg.output.string().c_str());
    }
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_code(e.category());
  } catch (const fs::filesystem_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_code(ErrorCategory::io);
  }
  return 0;
}
