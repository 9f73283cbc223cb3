#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "seqrules/data.hpp"
#include "seqrules/logic.hpp"
#include "seqrules/nn.hpp"
#include "seqrules/rulenet.hpp"
#include "seqrules/symbolizer.hpp"

namespace seqrules::train {

struct TrainConfig {
  sym::SymbolizerConfig symbolizer;
  rules::RuleNetConfig rulenet;
  double lambda_cluster = 1.0;
  double lambda_rule = 1.0;
  double learning_rate = 1e-3;
  double rule_learning_rate = 0.0;   // 0: same as learning_rate
  std::size_t pretrain_epochs = 50;
  std::size_t joint_epochs = 100;
  std::size_t batch_size = 16;       // sequences per joint step
  std::size_t pretrain_batch = 256;  // windows per pretraining step
  std::size_t pretrain_windows = 0;  // windows sampled per pretraining epoch, 0 = all
  std::size_t kmeans_points = 0;     // embeddings sampled for k-means initialization, 0 = all
  std::uint64_t seed = 0;
  bool pretrain = true;
  std::vector<double> taus{0.1, 0.2, 0.3, 0.4, 0.5};
  double min_precision = 0.8;
  std::size_t baseline_refresh = 10;  // hard baseline: epochs between Lloyd re-runs

  void validate() const;
  double effective_rule_lr() const { return rule_learning_rate > 0.0 ? rule_learning_rate : learning_rate; }
  bool operator==(const TrainConfig&) const = default;
};

struct EpochLoss {
  double reconstruction = 0.0;
  double clustering = 0.0;
  double rule = 0.0;
  double total = 0.0;
  bool operator==(const EpochLoss&) const = default;
};

struct LossHistory {
  std::vector<double> pretrain;
  std::vector<EpochLoss> joint;
  bool operator==(const LossHistory&) const = default;
};

struct TrainedModel {
  sym::Autoencoder autoencoder;
  sym::ClusterBank bank;
  rules::RuleNetParams rulenet;
  TrainConfig config;
  std::size_t target = 1;            // class id this model's head atom stands for
  std::vector<std::size_t> train_counts;  // per class, training split
  bool hard_assignment = false;      // nearest-center memberships (baseline)
  LossHistory history;

  std::size_t majority_class() const;
  void validate() const;
  bool operator==(const TrainedModel&) const = default;
};

struct Pretrained {
  sym::Autoencoder autoencoder;
  sym::ClusterBank bank;
  std::vector<double> losses;  // mean reconstruction loss per epoch
};

/// Reconstruction pretraining over all training windows followed by Lloyd
/// initialization of the bank; with pretraining disabled the bank holds the
/// embeddings of K randomly chosen windows under the untrained encoder.
Pretrained pretrain(const data::Dataset& ds, const TrainConfig& cfg, nn::Rng& rng);

/// Per-sequence mean of the three objective terms over a split.
struct ObjectiveTerms {
  double reconstruction = 0.0;  // mean over sequences of (1/W) Σ_s ‖s − A(s)‖²
  double clustering = 0.0;      // mean over sequences of (1/W) Σ_s Σ_k f G_k
  double rule = 0.0;            // mean binary cross-entropy of ŷ against [label == target]
  double total = 0.0;           // reconstruction + λ1 clustering + λ2 rule
};

ObjectiveTerms evaluate_objective(const TrainedModel& model, std::span<const data::LabeledSequence> split);

/// Joint minimization of reconstruction, clustering and rule losses; instances
/// whose label equals `target` are positive. Deterministic given cfg.seed.
TrainedModel train_joint(const data::Dataset& ds, const TrainConfig& cfg, std::size_t target = 1);

/// Hard-clustering variant: frozen pretrained autoencoder, Lloyd re-run every
/// `baseline_refresh` epochs, only the rule network learns.
TrainedModel train_hard_baseline(const data::Dataset& ds, const TrainConfig& cfg, std::size_t target = 1);

/// Symbolized view of one sequence under a trained model.
struct Symbolized {
  Vector interpretation;
  Matrix region_cluster;
  std::vector<std::uint8_t> discretized;
  double output = 0.0;  // ŷ
};

Symbolized symbolize_with(const TrainedModel& model, std::span<const double> x);
/// Nearest-center cluster of every window of x under the model's encoder and bank.
std::vector<std::size_t> window_clusters(const TrainedModel& model, std::span<const double> x);

/// Neural-classifier decision for one model: the boundary itself counts as positive.
inline bool predicts_positive(double output) { return output >= 0.5; }

struct Report {
  std::string dataset;
  std::vector<std::size_t> targets;
  double accuracy_neural = 0.0;  // classification by the rule network output
  double accuracy_rules = 0.0;   // classification by the extracted rules
  std::vector<logic::Rule> rules;  // best first
  double seconds = 0.0;
  std::vector<LossHistory> losses;  // one per model
};

/// Rules of one model that pass the precision filter, scored on the training split.
std::vector<logic::Rule> extract_scored_rules(const TrainedModel& model, const data::Dataset& ds);

/// Accuracy of both classifiers on the test split. A single model on a
/// multi-class dataset is evaluated one-vs-rest.
Report evaluate(std::span<const TrainedModel> models, const data::Dataset& ds);

/// Targets used when none are requested: class 1 for binary data, every class otherwise.
std::vector<std::size_t> default_targets(const data::Dataset& ds);

/// Train one model per target, evaluate, and time the whole run.
Report run_experiment(const data::Dataset& ds, const TrainConfig& cfg, std::span<const std::size_t> targets,
                      std::vector<TrainedModel>* models_out = nullptr);
Report run_hard_baseline(const data::Dataset& ds, const TrainConfig& cfg, std::span<const std::size_t> targets,
                         std::vector<TrainedModel>* models_out = nullptr);

inline constexpr std::uint32_t kArchiveVersion = 1;

/// Versioned little-endian archive holding one or more models.
void save_models(std::span<const TrainedModel> models, const std::filesystem::path& path);
std::vector<TrainedModel> load_models(const std::filesystem::path& path);
void save_model(const TrainedModel& model, const std::filesystem::path& path);
TrainedModel load_model(const std::filesystem::path& path);

std::string serialize_models(std::span<const TrainedModel> models);
std::vector<TrainedModel> deserialize_models(std::string_view bytes);

}  // namespace seqrules::train
