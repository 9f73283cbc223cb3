#include "seqrules/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "seqrules/error.hpp"

namespace seqrules::train {

namespace {

// Independent random streams so that, e.g., the rule network's shape does not
// perturb the autoencoder's initialization or the batch order.
enum Stream : std::uint64_t { kPretrain = 1, kRuleInit = 2, kBatchOrder = 3, kBaseline = 4 };

std::vector<std::size_t> class_counts(const data::Dataset& ds) {
  std::vector<std::size_t> counts(ds.num_classes, 0);
  for (const auto& s : ds.train) ++counts.at(s.label);
  return counts;
}

void shuffle(std::vector<std::size_t>& idx, nn::Rng& rng) {
  for (std::size_t i = idx.size(); i > 1; --i) std::swap(idx[i - 1], idx[rng.index(i)]);
}

// Distinct sample of `count` indices out of `n`, in draw order.
std::vector<std::size_t> sample_indices(std::size_t n, std::size_t count, nn::Rng& rng) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  count = std::min(count, n);
  for (std::size_t i = 0; i < count; ++i) std::swap(idx[i], idx[i + rng.index(n - i)]);
  idx.resize(count);
  return idx;
}

Matrix collect_windows(const data::Dataset& ds, std::size_t l) {
  const std::size_t per = ds.length() - l + 1;
  Matrix out(ds.train.size() * per, l);
  std::size_t r = 0;
  for (const auto& s : ds.train) {
    for (std::size_t w = 0; w < per; ++w, ++r) {
      std::copy(s.values.begin() + static_cast<std::ptrdiff_t>(w),
                s.values.begin() + static_cast<std::ptrdiff_t>(w + l), out.row(r).begin());
    }
  }
  return out;
}

Matrix embed_rows(const nn::DenseNet& encoder, const Matrix& windows, std::span<const std::size_t> rows) {
  Matrix out(rows.size(), encoder.output_size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Vector z = nn::net_predict(encoder, windows.row(rows[i]));
    std::copy(z.begin(), z.end(), out.row(i).begin());
  }
  return out;
}

std::vector<std::size_t> all_rows(std::size_t n) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  return idx;
}

double bce(double prediction, double label) {
  const double p = std::clamp(prediction, nn::kBceClamp, 1.0 - nn::kBceClamp);
  return -(label * std::log(p) + (1.0 - label) * std::log(1.0 - p));
}

double bce_grad(double prediction, double label) {
  const double p = std::clamp(prediction, nn::kBceClamp, 1.0 - nn::kBceClamp);
  return (p - label) / (p * (1.0 - p));
}

void check_dataset(const data::Dataset& ds, const TrainConfig& cfg, std::size_t target) {
  cfg.validate();
  ds.validate();
  cfg.symbolizer.validate(ds.length());
  if (target >= ds.num_classes) throw InvalidArgument("target class " + std::to_string(target) + " out of range");
}

}  // namespace

void TrainConfig::validate() const {
  symbolizer.validate();
  rulenet.validate();
  if (!(lambda_cluster >= 0.0) || !(lambda_rule >= 0.0)) throw InvalidArgument("lambdas must be >= 0");
  if (!(learning_rate > 0.0) || !(rule_learning_rate >= 0.0)) throw InvalidArgument("learning rates must be > 0");
  if (batch_size == 0 || pretrain_batch == 0) throw InvalidArgument("batch sizes must be >= 1");
  if (baseline_refresh == 0) throw InvalidArgument("baseline_refresh must be >= 1");
  if (taus.empty()) throw InvalidArgument("need at least one tau");
  for (double t : taus) {
    if (!(t > 0.0 && t < 1.0)) throw InvalidArgument("tau values must lie in (0, 1)");
  }
  if (!(min_precision >= 0.0 && min_precision <= 1.0)) throw InvalidArgument("min_precision must lie in [0, 1]");
}

std::size_t TrainedModel::majority_class() const {
  if (train_counts.empty()) return 0;
  return static_cast<std::size_t>(std::max_element(train_counts.begin(), train_counts.end()) - train_counts.begin());
}

void TrainedModel::validate() const {
  autoencoder.encoder.validate();
  autoencoder.decoder.validate();
  rulenet.validate();
  const auto& s = config.symbolizer;
  if (autoencoder.encoder.input_size() != s.window || autoencoder.decoder.output_size() != s.window ||
      autoencoder.encoder.output_size() != bank.dimension() || autoencoder.decoder.input_size() != bank.dimension() ||
      bank.size() != s.clusters || rulenet.input_size() != s.clusters * s.regions) {
    throw FormatError("model components are dimensionally inconsistent");
  }
}

Pretrained pretrain(const data::Dataset& ds, const TrainConfig& cfg, nn::Rng& rng) {
  const auto& scfg = cfg.symbolizer;
  scfg.validate(ds.length());
  Pretrained out;
  out.autoencoder = sym::Autoencoder::create(scfg, rng);
  const Matrix windows = collect_windows(ds, scfg.window);
  if (windows.rows() < scfg.clusters) throw InvalidDataset("fewer training windows than clusters");
  auto& enc = out.autoencoder.encoder;
  auto& dec = out.autoencoder.decoder;

  if (!cfg.pretrain) {
    const auto picks = sample_indices(windows.rows(), scfg.clusters, rng);
    out.bank.centers = embed_rows(enc, windows, picks);
    return out;
  }

  nn::Adam adam({.learning_rate = cfg.learning_rate});
  std::vector<std::size_t> order = all_rows(windows.rows());
  const std::size_t per_epoch =
      cfg.pretrain_windows == 0 ? windows.rows() : std::min(cfg.pretrain_windows, windows.rows());
  for (std::size_t epoch = 0; epoch < cfg.pretrain_epochs; ++epoch) {
    shuffle(order, rng);
    double epoch_loss = 0.0;
    for (std::size_t b0 = 0; b0 < per_epoch; b0 += cfg.pretrain_batch) {
      const std::size_t b1 = std::min(per_epoch, b0 + cfg.pretrain_batch);
      auto genc = nn::NetGradient::zeros_like(enc);
      auto gdec = nn::NetGradient::zeros_like(dec);
      const double scale = 1.0 / static_cast<double>(b1 - b0);
      for (std::size_t i = b0; i < b1; ++i) {
        const auto s = windows.row(order[i]);
        const auto te = nn::net_forward(enc, s);
        const auto td = nn::net_forward(dec, te.output());
        const auto loss = nn::loss_eval(nn::LossKind::mean_squared_error, td.output(), s);
        epoch_loss += loss.value;
        Vector up = loss.grad;
        for (double& g : up) g *= scale;
        const Vector gz = nn::net_backward(dec, td, up, gdec);
        nn::net_backward(enc, te, gz, genc);
      }
      std::vector<nn::ParamGroup> groups;
      nn::append_groups(groups, "encoder", enc, genc);
      nn::append_groups(groups, "decoder", dec, gdec);
      adam.step(groups);
    }
    epoch_loss /= static_cast<double>(per_epoch);
    if (!std::isfinite(epoch_loss)) throw TrainingDiverged("pretraining diverged at epoch " + std::to_string(epoch));
    out.losses.push_back(epoch_loss);
  }

  const std::vector<std::size_t> rows =
      cfg.kmeans_points == 0 ? all_rows(windows.rows()) : sample_indices(windows.rows(), cfg.kmeans_points, rng);
  out.bank = sym::lloyd_kmeans(embed_rows(enc, windows, rows), scfg.clusters, rng);
  return out;
}

namespace {

struct SequenceLoss {
  double reconstruction = 0.0;
  double clustering = 0.0;
  double rule = 0.0;
};

// Forward and (optionally) backward of one sequence's share of the objective,
// scaled by `weight`; gradients accumulate into the supplied buffers.
SequenceLoss sequence_step(const TrainedModel& m, const std::vector<Matrix>& rule_weights,
                           std::span<const double> x, double label, double weight,
                           sym::SymbolizerGradient* sgrad, rules::RuleNetGradient* rgrad) {
  const auto& cfg = m.config;
  const auto trace =
      sym::trace_sequence(x, m.autoencoder.encoder, &m.autoencoder.decoder, m.bank, cfg.symbolizer, {});
  const double windows = static_cast<double>(trace.windows());
  const auto rtrace = rules::rulenet_trace(m.rulenet, rule_weights, trace.interpretation);
  SequenceLoss out{trace.reconstruction / windows, trace.clustering / windows, bce(rtrace.output, label)};
  if (sgrad == nullptr) return out;

  Vector grad_interp;
  if (cfg.lambda_rule != 0.0) {
    const double up = weight * cfg.lambda_rule * bce_grad(rtrace.output, label);
    grad_interp = rules::rulenet_backward(m.rulenet, rtrace, up, *rgrad);
  }
  const sym::SequenceLossWeights w{weight / windows, weight * cfg.lambda_cluster / windows};
  sym::backward_sequence(x, trace, m.autoencoder.encoder, m.autoencoder.decoder, m.bank, cfg.symbolizer, w,
                         grad_interp, *sgrad);
  return out;
}

TrainedModel initial_model(const data::Dataset& ds, const TrainConfig& cfg, std::size_t target) {
  check_dataset(ds, cfg, target);
  TrainedModel m;
  m.config = cfg;
  m.target = target;
  m.train_counts = class_counts(ds);
  nn::Rng pre_rng = nn::Rng::stream(cfg.seed, kPretrain);
  Pretrained pre = pretrain(ds, cfg, pre_rng);
  m.autoencoder = std::move(pre.autoencoder);
  m.bank = std::move(pre.bank);
  m.history.pretrain = std::move(pre.losses);
  nn::Rng rule_rng = nn::Rng::stream(cfg.seed, kRuleInit);
  m.rulenet = rules::RuleNetParams::create(cfg.symbolizer.clusters * cfg.symbolizer.regions, cfg.rulenet, rule_rng);
  return m;
}

}  // namespace

ObjectiveTerms evaluate_objective(const TrainedModel& model, std::span<const data::LabeledSequence> split) {
  if (split.empty()) throw InvalidDataset("evaluate_objective: empty split");
  const auto weights = rules::activated_weights(model.rulenet);
  ObjectiveTerms t;
  for (const auto& s : split) {
    const auto l = sequence_step(model, weights, s.values, s.label == model.target ? 1.0 : 0.0, 1.0, nullptr, nullptr);
    t.reconstruction += l.reconstruction;
    t.clustering += l.clustering;
    t.rule += l.rule;
  }
  const double n = static_cast<double>(split.size());
  t.reconstruction /= n;
  t.clustering /= n;
  t.rule /= n;
  t.total = t.reconstruction + model.config.lambda_cluster * t.clustering + model.config.lambda_rule * t.rule;
  return t;
}

TrainedModel train_joint(const data::Dataset& ds, const TrainConfig& cfg, std::size_t target) {
  TrainedModel m = initial_model(ds, cfg, target);
  nn::Rng order_rng = nn::Rng::stream(cfg.seed, kBatchOrder);
  nn::Adam adam_sym({.learning_rate = cfg.learning_rate});
  nn::Adam adam_rule({.learning_rate = cfg.effective_rule_lr()});
  std::vector<std::size_t> order = all_rows(ds.train.size());

  for (std::size_t epoch = 0; epoch < cfg.joint_epochs; ++epoch) {
    shuffle(order, order_rng);
    EpochLoss epoch_loss;
    for (std::size_t b0 = 0; b0 < order.size(); b0 += cfg.batch_size) {
      const std::size_t b1 = std::min(order.size(), b0 + cfg.batch_size);
      const double weight = 1.0 / static_cast<double>(b1 - b0);
      auto sgrad = sym::SymbolizerGradient::zeros_like(m.autoencoder.encoder, m.autoencoder.decoder, m.bank);
      auto rgrad = rules::RuleNetGradient::zeros_like(m.rulenet);
      const auto rule_weights = rules::activated_weights(m.rulenet);
      for (std::size_t i = b0; i < b1; ++i) {
        const auto& s = ds.train[order[i]];
        const double label = s.label == target ? 1.0 : 0.0;
        const auto l = sequence_step(m, rule_weights, s.values, label, weight, &sgrad, &rgrad);
        epoch_loss.reconstruction += l.reconstruction;
        epoch_loss.clustering += l.clustering;
        epoch_loss.rule += l.rule;
      }
      std::vector<nn::ParamGroup> groups;
      nn::append_groups(groups, "encoder", m.autoencoder.encoder, sgrad.encoder);
      nn::append_groups(groups, "decoder", m.autoencoder.decoder, sgrad.decoder);
      groups.push_back({"centers", m.bank.centers.values(), sgrad.centers.values()});
      adam_sym.step(groups);
      if (cfg.lambda_rule != 0.0) {
        std::vector<nn::ParamGroup> rgroups;
        for (std::size_t i = 0; i < m.rulenet.raw.size(); ++i) {
          rgroups.push_back({"rule." + std::to_string(i), m.rulenet.raw[i].values(), rgrad.raw[i].values()});
        }
        adam_rule.step(rgroups);
      }
    }
    const double n = static_cast<double>(order.size());
    epoch_loss.reconstruction /= n;
    epoch_loss.clustering /= n;
    epoch_loss.rule /= n;
    epoch_loss.total =
        epoch_loss.reconstruction + cfg.lambda_cluster * epoch_loss.clustering + cfg.lambda_rule * epoch_loss.rule;
    if (!std::isfinite(epoch_loss.total)) {
      throw TrainingDiverged("joint training diverged at epoch " + std::to_string(epoch));
    }
    m.history.joint.push_back(epoch_loss);
  }
  return m;
}

namespace {

// Permute `next` so each of its centers sits at the index of the closest
// remaining center of `prev`, keeping cluster ids stable across refreshes.
void align_centers(const sym::ClusterBank& prev, sym::ClusterBank& next) {
  const std::size_t k = prev.size();
  std::vector<bool> used_prev(k, false), used_next(k, false);
  Matrix aligned(k, next.dimension());
  for (std::size_t step = 0; step < k; ++step) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t bp = 0, bn = 0;
    for (std::size_t p = 0; p < k; ++p) {
      if (used_prev[p]) continue;
      for (std::size_t q = 0; q < k; ++q) {
        if (used_next[q]) continue;
        const double d = squared_distance(prev.centers.row(p), next.centers.row(q));
        if (d < best) {
          best = d;
          bp = p;
          bn = q;
        }
      }
    }
    used_prev[bp] = used_next[bn] = true;
    std::copy(next.centers.row(bn).begin(), next.centers.row(bn).end(), aligned.row(bp).begin());
  }
  next.centers = std::move(aligned);
}

}  // namespace

TrainedModel train_hard_baseline(const data::Dataset& ds, const TrainConfig& cfg, std::size_t target) {
  TrainConfig pre_cfg = cfg;
  pre_cfg.pretrain = true;
  TrainedModel m = initial_model(ds, pre_cfg, target);
  m.config = cfg;
  m.hard_assignment = true;
  nn::Rng order_rng = nn::Rng::stream(cfg.seed, kBatchOrder);
  nn::Rng km_rng = nn::Rng::stream(cfg.seed, kBaseline);
  nn::Adam adam({.learning_rate = cfg.effective_rule_lr()});

  const Matrix windows = collect_windows(ds, cfg.symbolizer.window);
  std::vector<Vector> features(ds.train.size());
  std::vector<std::size_t> order = all_rows(ds.train.size());
  const sym::TraceOptions hard{.reconstruct = false, .hard = true};

  for (std::size_t epoch = 0; epoch < cfg.joint_epochs; ++epoch) {
    if (epoch % cfg.baseline_refresh == 0) {
      const std::vector<std::size_t> rows = cfg.kmeans_points == 0
                                                ? all_rows(windows.rows())
                                                : sample_indices(windows.rows(), cfg.kmeans_points, km_rng);
      sym::ClusterBank next =
          sym::lloyd_kmeans(embed_rows(m.autoencoder.encoder, windows, rows), cfg.symbolizer.clusters, km_rng);
      align_centers(m.bank, next);
      m.bank = std::move(next);
      for (std::size_t i = 0; i < ds.train.size(); ++i) {
        features[i] = sym::trace_sequence(ds.train[i].values, m.autoencoder.encoder, nullptr, m.bank,
                                          cfg.symbolizer, hard)
                          .interpretation;
      }
    }
    shuffle(order, order_rng);
    EpochLoss epoch_loss;
    for (std::size_t b0 = 0; b0 < order.size(); b0 += cfg.batch_size) {
      const std::size_t b1 = std::min(order.size(), b0 + cfg.batch_size);
      const double weight = 1.0 / static_cast<double>(b1 - b0);
      auto rgrad = rules::RuleNetGradient::zeros_like(m.rulenet);
      const auto rule_weights = rules::activated_weights(m.rulenet);
      for (std::size_t i = b0; i < b1; ++i) {
        const auto& s = ds.train[order[i]];
        const double label = s.label == target ? 1.0 : 0.0;
        const auto rt = rules::rulenet_trace(m.rulenet, rule_weights, features[order[i]]);
        epoch_loss.rule += bce(rt.output, label);
        rules::rulenet_backward(m.rulenet, rt, weight * bce_grad(rt.output, label), rgrad);
      }
      std::vector<nn::ParamGroup> groups;
      for (std::size_t i = 0; i < m.rulenet.raw.size(); ++i) {
        groups.push_back({"rule." + std::to_string(i), m.rulenet.raw[i].values(), rgrad.raw[i].values()});
      }
      adam.step(groups);
    }
    epoch_loss.rule /= static_cast<double>(order.size());
    epoch_loss.total = epoch_loss.rule;
    if (!std::isfinite(epoch_loss.total)) {
      throw TrainingDiverged("baseline training diverged at epoch " + std::to_string(epoch));
    }
    m.history.joint.push_back(epoch_loss);
  }
  return m;
}

Symbolized symbolize_with(const TrainedModel& model, std::span<const double> x) {
  const sym::TraceOptions opts{.reconstruct = false, .hard = model.hard_assignment};
  auto trace = sym::trace_sequence(x, model.autoencoder.encoder, nullptr, model.bank, model.config.symbolizer, opts);
  Symbolized out;
  out.discretized = sym::discretize_flat(trace.region_cluster);
  out.output = rules::rulenet_forward(model.rulenet, trace.interpretation);
  out.interpretation = std::move(trace.interpretation);
  out.region_cluster = std::move(trace.region_cluster);
  return out;
}

std::vector<std::size_t> window_clusters(const TrainedModel& model, std::span<const double> x) {
  const std::size_t l = model.config.symbolizer.window;
  if (l > x.size()) throw InvalidArgument("window_clusters: window longer than sequence");
  std::vector<std::size_t> out;
  for (std::size_t w = 0; w + l <= x.size(); ++w) {
    out.push_back(sym::hard_assign(nn::net_predict(model.autoencoder.encoder, x.subspan(w, l)), model.bank));
  }
  return out;
}

namespace {

std::vector<logic::LabeledInterpretation> discretize_split(const TrainedModel& model,
                                                           std::span<const data::LabeledSequence> split) {
  std::vector<logic::LabeledInterpretation> out;
  out.reserve(split.size());
  for (const auto& s : split) out.push_back({symbolize_with(model, s.values).discretized, s.label});
  return out;
}

bool has_class(std::span<const logic::LabeledInterpretation> data, std::size_t c) {
  return std::any_of(data.begin(), data.end(), [&](const auto& d) { return d.label == c; });
}

struct ScoredRules {
  std::vector<logic::Rule> rules;
  std::vector<logic::LabeledInterpretation> train;
};

ScoredRules score_rules(const TrainedModel& model, const data::Dataset& ds) {
  ScoredRules out;
  out.train = discretize_split(model, ds.train);
  const std::size_t k = model.config.symbolizer.clusters;
  if (!has_class(out.train, model.target)) return out;
  const Matrix program = rules::program_tensor(model.rulenet);
  for (double tau : model.config.taus) {
    for (auto& r : logic::extract_rules(program, k, tau, model.target)) {
      if (std::any_of(out.rules.begin(), out.rules.end(), [&](const auto& o) { return o.same_clause(r); })) continue;
      const auto metrics = logic::rule_metrics(r, out.train, k);
      r.precision = metrics.precision;
      r.recall = metrics.recall;
      if (r.precision && *r.precision >= model.config.min_precision) out.rules.push_back(std::move(r));
    }
  }
  return out;
}

}  // namespace

std::vector<logic::Rule> extract_scored_rules(const TrainedModel& model, const data::Dataset& ds) {
  return score_rules(model, ds).rules;
}

std::vector<std::size_t> default_targets(const data::Dataset& ds) {
  if (ds.num_classes == 2) return {1};
  std::vector<std::size_t> all(ds.num_classes);
  std::iota(all.begin(), all.end(), 0);
  return all;
}

Report evaluate(std::span<const TrainedModel> models, const data::Dataset& input) {
  if (models.empty()) throw InvalidArgument("evaluate: no models");
  if (input.test.empty()) throw InvalidDataset("evaluate: empty test split");
  const bool one_vs_rest = models.size() == 1 && input.num_classes > 2;
  const data::Dataset ds = one_vs_rest ? data::binarize(input, models.front().target) : input;
  const auto target_of = [&](const TrainedModel& m) { return one_vs_rest ? std::size_t{1} : m.target; };

  Report report;
  report.dataset = input.name;
  std::vector<std::vector<logic::LabeledInterpretation>> test_views;
  std::vector<std::vector<double>> outputs;
  std::vector<std::pair<std::size_t, logic::Rule>> pooled;  // (model index, rule)
  for (std::size_t mi = 0; mi < models.size(); ++mi) {
    TrainedModel m = models[mi];
    m.target = target_of(models[mi]);
    report.targets.push_back(models[mi].target);
    report.losses.push_back(m.history);
    auto scored = score_rules(m, ds);
    std::vector<logic::LabeledInterpretation> test_view;
    std::vector<double> out;
    for (const auto& s : ds.test) {
      const auto sym = symbolize_with(m, s.values);
      test_view.push_back({sym.discretized, s.label});
      out.push_back(sym.output);
    }
    const std::size_t k = m.config.symbolizer.clusters;
    for (auto& r : scored.rules) {
      if (has_class(test_view, r.head)) {
        const auto tm = logic::rule_metrics(r, test_view, k);
        r.test_precision = tm.precision;
        r.test_recall = tm.recall;
      }
      pooled.emplace_back(mi, std::move(r));
    }
    test_views.push_back(std::move(test_view));
    outputs.push_back(std::move(out));
  }

  std::vector<std::size_t> train_counts(ds.num_classes, 0);
  for (const auto& s : ds.train) ++train_counts[s.label];
  const logic::ClassPrior prior{
      static_cast<std::size_t>(std::max_element(train_counts.begin(), train_counts.end()) - train_counts.begin()),
      train_counts};

  std::size_t neural_hits = 0, rule_hits = 0;
  for (std::size_t i = 0; i < ds.test.size(); ++i) {
    const std::size_t truth = ds.test[i].label;
    std::size_t neural = 0;
    if (models.size() == 1) {
      const std::size_t t = target_of(models.front());
      neural = predicts_positive(outputs[0][i]) ? t : 1 - t;
    } else {
      std::size_t best = 0;
      for (std::size_t mi = 1; mi < models.size(); ++mi) {
        if (outputs[mi][i] > outputs[best][i]) best = mi;
      }
      neural = models[best].target;
    }
    neural_hits += neural == truth ? 1 : 0;

    std::vector<const logic::Rule*> firing;
    for (const auto& [mi, rule] : pooled) {
      if (logic::rule_satisfied(rule, test_views[mi][i].atoms, models[mi].config.symbolizer.clusters)) {
        firing.push_back(&rule);
      }
    }
    rule_hits += logic::resolve_firing(firing, prior) == truth ? 1 : 0;
  }
  const double n = static_cast<double>(ds.test.size());
  report.accuracy_neural = static_cast<double>(neural_hits) / n;
  report.accuracy_rules = static_cast<double>(rule_hits) / n;
  for (auto& entry : pooled) report.rules.push_back(std::move(entry.second));
  std::stable_sort(report.rules.begin(), report.rules.end(), logic::better_rule);
  return report;
}

namespace {

template <typename TrainFn>
Report timed_run(const data::Dataset& ds, const TrainConfig& cfg, std::span<const std::size_t> targets,
                 std::vector<TrainedModel>* models_out, TrainFn&& train_fn) {
  const auto start = std::chrono::steady_clock::now();
  std::vector<std::size_t> chosen(targets.begin(), targets.end());
  if (chosen.empty()) chosen = default_targets(ds);
  std::vector<TrainedModel> models;
  for (std::size_t t : chosen) models.push_back(train_fn(ds, cfg, t));
  Report report = evaluate(models, ds);
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (models_out != nullptr) *models_out = std::move(models);
  return report;
}

}  // namespace

Report run_experiment(const data::Dataset& ds, const TrainConfig& cfg, std::span<const std::size_t> targets,
                      std::vector<TrainedModel>* models_out) {
  return timed_run(ds, cfg, targets, models_out, train_joint);
}

Report run_hard_baseline(const data::Dataset& ds, const TrainConfig& cfg, std::span<const std::size_t> targets,
                         std::vector<TrainedModel>* models_out) {
  return timed_run(ds, cfg, targets, models_out, train_hard_baseline);
}

}  // namespace seqrules::train
