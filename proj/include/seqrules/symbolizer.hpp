#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "seqrules/matrix.hpp"
#include "seqrules/nn.hpp"

namespace seqrules::sym {

struct SymbolizerConfig {
  std::size_t window = 5;      // subsequence length l
  std::size_t regions = 4;     // R
  std::size_t clusters = 3;    // K
  std::size_t embedding = 8;   // p
  std::size_t hidden = 32;     // autoencoder hidden width
  double alpha = 1000.0;       // assignment sharpness

  /// Checks field ranges and, when `length` is non-zero, that the window fits.
  void validate(std::size_t length = 0) const;
  bool operator==(const SymbolizerConfig&) const = default;
};

struct Window {
  Vector values;
  std::size_t start = 0;
};

/// Cluster representations, one row per cluster (K × p).
struct ClusterBank {
  Matrix centers;

  std::size_t size() const noexcept { return centers.rows(); }
  std::size_t dimension() const noexcept { return centers.cols(); }
  bool operator==(const ClusterBank&) const = default;
};

/// Soft cluster memberships laid out K × l_p × R; slots with no window stay all-zero.
struct ClusterIndexTensor {
  std::size_t clusters = 0;
  std::size_t slots = 0;
  std::size_t regions = 0;
  Vector values;
  std::vector<bool> occupied;  // slots × regions

  ClusterIndexTensor(std::size_t k, std::size_t lp, std::size_t r)
      : clusters(k), slots(lp), regions(r), values(k * lp * r, 0.0), occupied(lp * r, false) {}

  double& at(std::size_t k, std::size_t slot, std::size_t region) {
    return values[(k * slots + slot) * regions + region];
  }
  double at(std::size_t k, std::size_t slot, std::size_t region) const {
    return values[(k * slots + slot) * regions + region];
  }
};

std::vector<Window> slide_windows(std::span<const double> x, std::size_t length);

/// Number of window slots per region, ⌈T/R⌉.
std::size_t region_length(std::size_t length, std::size_t regions);
/// Region of a window from its first point.
std::size_t assign_region(std::size_t start, std::size_t length, std::size_t regions);

/// softmin over squared Euclidean distances at sharpness alpha.
Vector soft_assign(std::span<const double> z, const ClusterBank& bank, double alpha);
/// Index of the nearest center (lowest index on ties).
std::size_t hard_assign(std::span<const double> z, const ClusterBank& bank);

/// Packs per-window memberships (rows of `assignments`, window w starting at w) into the tensor.
ClusterIndexTensor build_index_tensor(const Matrix& assignments, std::size_t length, std::size_t regions);

/// Sum memberships per region, then softmax each column over clusters (K × R).
Matrix region_cluster_matrix(const ClusterIndexTensor& cx);

/// Region-major flatten: entry j·K + i holds pattern i in region j.
Vector flatten_region_major(const Matrix& region_cluster);

/// One-hot per column at the column maximum, lowest index on ties.
Matrix discretize(const Matrix& region_cluster);
/// Discretized interpretation in region-major layout.
std::vector<std::uint8_t> discretize_flat(const Matrix& region_cluster);

/// Encoder l → hidden → p (relu, linear) and its mirror.
struct Autoencoder {
  nn::DenseNet encoder;
  nn::DenseNet decoder;

  bool operator==(const Autoencoder&) const = default;
  static Autoencoder create(const SymbolizerConfig& cfg, nn::Rng& rng);
};

/// Everything the backward pass needs from one sequence.
struct SequenceTrace {
  std::size_t length = 0;
  std::vector<nn::ForwardTrace> encoder;
  std::vector<nn::ForwardTrace> decoder;  // empty when reconstruction was not requested
  Matrix distances;                       // W × K
  Matrix assignments;                     // W × K
  Matrix region_cluster;                  // K × R
  Vector interpretation;                  // K·R
  double reconstruction = 0.0;            // Σ_s ‖s − A(s)‖²
  double clustering = 0.0;                // Σ_s Σ_k f(h(s), r_k) G_k

  std::size_t windows() const noexcept { return distances.rows(); }
};

struct TraceOptions {
  bool reconstruct = true;
  bool hard = false;  // one-hot nearest-center memberships instead of softmin
};

SequenceTrace trace_sequence(std::span<const double> x, const nn::DenseNet& encoder, const nn::DenseNet* decoder,
                             const ClusterBank& bank, const SymbolizerConfig& cfg, TraceOptions options = {});

/// Differentiable body symbolization of one sequence.
Vector symbolize(std::span<const double> x, const nn::DenseNet& encoder, const ClusterBank& bank,
                 const SymbolizerConfig& cfg);

struct SymbolizerGradient {
  nn::NetGradient encoder;
  nn::NetGradient decoder;
  Matrix centers;

  static SymbolizerGradient zeros_like(const nn::DenseNet& encoder, const nn::DenseNet& decoder,
                                       const ClusterBank& bank);
  void add(const SymbolizerGradient& other, double scale = 1.0);
};

/// Weights applied to the terms of one sequence's loss:
///   recon_weight · reconstruction + cluster_weight · clustering + ⟨grad_interpretation, v_I⟩.
struct SequenceLossWeights {
  double reconstruction = 0.0;
  double clustering = 0.0;
};

/// Accumulates parameter gradients of the weighted sequence loss into `grad`.
/// `grad_interpretation` may be empty when no downstream loss is attached.
void backward_sequence(std::span<const double> x, const SequenceTrace& trace, const nn::DenseNet& encoder,
                       const nn::DenseNet& decoder, const ClusterBank& bank, const SymbolizerConfig& cfg,
                       SequenceLossWeights weights, std::span<const double> grad_interpretation,
                       SymbolizerGradient& grad);

/// Hard k-means with k-means++ seeding over the rows of `points`.
ClusterBank lloyd_kmeans(const Matrix& points, std::size_t k, nn::Rng& rng, std::size_t max_iter = 100);

/// Σ_s ‖s − A(s)‖² + λ Σ_s Σ_k ‖h(s) − r_k‖² G_k(h(s)).
double dkm_objective(std::span<const Window> windows, const nn::DenseNet& encoder, const nn::DenseNet& decoder,
                     const ClusterBank& bank, double alpha, double lambda);

}  // namespace seqrules::sym
