#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "seqrules/matrix.hpp"
#include "seqrules/nn.hpp"

namespace seqrules::data {

struct LabeledSequence {
  Vector values;
  std::size_t label = 0;
  bool operator==(const LabeledSequence&) const = default;
};

struct Dataset {
  std::string name;
  std::vector<LabeledSequence> train;
  std::vector<LabeledSequence> test;
  std::size_t num_classes = 0;
  /// Original label text for each class id (UCR files use arbitrary labels).
  std::vector<std::string> class_names;

  std::size_t length() const { return train.empty() ? 0 : train.front().values.size(); }
  /// Throws InvalidDataset on empty splits, ragged lengths, out-of-range labels or non-finite values.
  void validate() const;
  bool operator==(const Dataset&) const = default;
};

enum class SyntheticKind { triangular, trigonometric };

struct SyntheticSpec {
  SyntheticKind kind = SyntheticKind::triangular;
  std::size_t per_class = 2;
  double noise_std = 0.31622776601683794;  // variance 0.1
};

/// Sequence length of the synthetic templates for `kind`.
std::size_t synthetic_length(SyntheticKind kind);
/// Noise-free template; class 1 is the positive class.
Vector synthetic_template(SyntheticKind kind, std::size_t label);

Dataset gen_synthetic(const SyntheticSpec& spec, nn::Rng& rng);

/// Parses one UCR split: each line is a label followed by the series, tab- or comma-separated.
/// Labels are returned as written; `load_ucr` remaps them.
struct RawSplit {
  std::vector<std::string> labels;
  std::vector<Vector> series;
};
RawSplit parse_ucr(std::istream& in);

/// Loads `<prefix>_TRAIN.tsv` and `<prefix>_TEST.tsv` and remaps labels to 0..u−1 in sorted order.
Dataset load_ucr(const std::filesystem::path& prefix);
Dataset load_ucr(const std::filesystem::path& train_path, const std::filesystem::path& test_path);

struct IdxImages {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::vector<std::uint8_t>> images;
};
IdxImages read_idx_images(const std::filesystem::path& path);
std::vector<std::uint8_t> read_idx_labels(const std::filesystem::path& path);

struct MnistPaths {
  std::filesystem::path train_images, train_labels, test_images, test_labels;

  /// Standard file names inside `dir`.
  static MnistPaths in_directory(const std::filesystem::path& dir);
};

/// Two-digit task: images flattened row-major, scaled to [0, 1], `positive` → class 1.
/// `limit_train` / `limit_test` cap the images kept per digit (0 keeps all).
Dataset load_mnist(const MnistPaths& paths, unsigned positive, unsigned negative, std::size_t limit_train = 0,
                   std::size_t limit_test = 0);

/// target → 1, every other class → 0.
Dataset binarize(const Dataset& ds, std::size_t target);

/// Per-series z-normalization; constant series become all-zero.
void znormalize(Dataset& ds);

/// Writes one split in UCR tab-separated form.
void write_ucr(const std::filesystem::path& path, const std::vector<LabeledSequence>& split);

}  // namespace seqrules::data
