#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "seqrules/matrix.hpp"

namespace seqrules::nn {

/// Seeded pseudorandom source. Same seed, same draw sequence.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
  double normal(double mean, double stddev) { return std::normal_distribution<double>(mean, stddev)(engine_); }
  std::size_t index(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_); }

  std::mt19937_64& engine() noexcept { return engine_; }

  /// Independent stream derived from `seed` and a stream tag (splitmix64 mixing).
  static Rng stream(std::uint64_t seed, std::uint64_t tag);

 private:
  std::mt19937_64 engine_;
};

/// Row-wise softmax with per-row max shift. Throws InvalidArgument on non-finite input.
Matrix softmax_rows(const Matrix& raw);
Vector softmax(std::span<const double> logits);

/// Backward of a row softmax: given probabilities p and dL/dp, returns dL/dlogits.
Vector softmax_backward(std::span<const double> probs, std::span<const double> grad_probs);

enum class Activation : std::uint8_t { linear = 0, relu = 1, sigmoid = 2 };

struct DenseLayer {
  Matrix weights;  // out × in
  Vector bias;     // out
  Activation activation = Activation::linear;

  std::size_t input_size() const noexcept { return weights.cols(); }
  std::size_t output_size() const noexcept { return weights.rows(); }
  bool operator==(const DenseLayer&) const = default;
};

struct DenseNet {
  std::vector<DenseLayer> layers;

  /// Glorot-uniform weights, zero biases. `sizes` has one more entry than `activations`.
  static DenseNet create(std::span<const std::size_t> sizes, std::span<const Activation> activations, Rng& rng);

  std::size_t input_size() const;
  std::size_t output_size() const;
  std::size_t parameter_count() const;
  /// Throws InvalidArgument when consecutive layer sizes do not chain.
  void validate() const;
  bool operator==(const DenseNet&) const = default;
};

/// Per-layer pre-activations and outputs. `post[0]` is the input itself.
struct ForwardTrace {
  std::vector<Vector> pre;
  std::vector<Vector> post;

  const Vector& output() const { return post.back(); }
};

ForwardTrace net_forward(const DenseNet& net, std::span<const double> x);
/// Output only; skips storing intermediate activations.
Vector net_predict(const DenseNet& net, std::span<const double> x);

struct NetGradient {
  std::vector<Matrix> weights;
  std::vector<Vector> bias;

  static NetGradient zeros_like(const DenseNet& net);
  void add(const NetGradient& other, double scale = 1.0);
  void scale(double factor);
};

/// Accumulates d⟨upstream, output⟩/dθ into `grad` and returns the input gradient.
Vector net_backward(const DenseNet& net, const ForwardTrace& trace, std::span<const double> upstream,
                    NetGradient& grad);

enum class LossKind { mean_squared_error, binary_cross_entropy };

struct LossValue {
  double value = 0.0;
  Vector grad;
};

inline constexpr double kBceClamp = 1e-7;

LossValue loss_eval(LossKind kind, std::span<const double> pred, std::span<const double> target);

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// A named view of one parameter block and its gradient.
struct ParamGroup {
  std::string name;
  std::span<double> values;
  std::span<const double> grads;
};

/// Adaptive-moment optimizer. Moment buffers are keyed by group name and
/// created on first use; the step counter advances once per `step` call.
class Adam {
 public:
  explicit Adam(AdamConfig config = {}) : config_(config) {}

  /// Throws TrainingDiverged naming the first group with a non-finite gradient;
  /// in that case no parameter is modified.
  void step(std::span<const ParamGroup> groups);

  std::uint64_t steps() const noexcept { return steps_; }
  const AdamConfig& config() const noexcept { return config_; }

 private:
  struct Moments {
    Vector first;
    Vector second;
  };
  AdamConfig config_;
  std::uint64_t steps_ = 0;
  std::map<std::string, Moments> moments_;
};

/// Parameter groups for every weight matrix and bias of `net`, named `<prefix>.<i>.w|b`.
void append_groups(std::vector<ParamGroup>& groups, const std::string& prefix, DenseNet& net,
                   const NetGradient& grad);

}  // namespace seqrules::nn
