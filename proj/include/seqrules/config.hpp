#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "seqrules/data.hpp"
#include "seqrules/trainer.hpp"

namespace seqrules::config {

enum class DatasetKind { triangular, trigonometric, ucr, mnist };

struct DatasetConfig {
  DatasetKind kind = DatasetKind::triangular;
  std::filesystem::path path;   // UCR prefix (`<path>_TRAIN.tsv`) or MNIST directory
  std::size_t per_class = 2;    // synthetic
  double noise_std = 0.31622776601683794;
  bool znormalize = true;       // UCR only
  unsigned positive = 1;        // MNIST digits
  unsigned negative = 0;
  std::size_t limit_train = 0;  // MNIST images per digit, 0 = all
  std::size_t limit_test = 0;
  bool operator==(const DatasetConfig&) const = default;
};

struct RunConfig {
  DatasetConfig dataset;
  train::TrainConfig train;
  std::filesystem::path output = "out";
  std::vector<std::size_t> targets;  // empty: default targets for the dataset
  bool operator==(const RunConfig&) const = default;
};

std::string_view to_string(DatasetKind kind);

/// Parses JSON config text. Omitted keys keep their defaults; unknown keys
/// and type mismatches raise ConfigError naming the offending path.
RunConfig parse_config_text(std::string_view text);
/// Reads and parses `path`; an empty file yields the defaults. Dataset paths
/// are resolved relative to the config file and must exist.
RunConfig parse_config(const std::filesystem::path& path);

/// Fully resolved config as pretty-printed JSON with every field present.
std::string to_json(const RunConfig& cfg);
std::string to_json(const train::TrainConfig& cfg);
train::TrainConfig train_config_from_json(std::string_view text);

/// FNV-1a 64 of the resolved JSON, as 16 lowercase hex digits.
std::string config_hash(const RunConfig& cfg);

/// Throws ConfigError when a referenced dataset path is missing.
void check_paths(const DatasetConfig& cfg);

/// Materializes the dataset; synthetic data is drawn from `seed`.
data::Dataset load_dataset(const DatasetConfig& cfg, std::uint64_t seed);

/// Closest candidate by edit distance, or empty when nothing is close.
std::string suggest(std::string_view key, const std::vector<std::string>& candidates);

}  // namespace seqrules::config
