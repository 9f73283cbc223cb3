#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "seqrules/matrix.hpp"
#include "seqrules/nn.hpp"

namespace seqrules::rules {

struct RuleNetConfig {
  std::vector<std::size_t> hidden{16};  // widths h_1 … h_{k−1}
  std::size_t rules = 4;                // m, width of the last dense layer
  double bias = 0.5;                    // fixed threshold d
  double init_scale = 0.1;              // raw weights drawn uniformly from ±init_scale
  double init_anchor = 3.0;             // per-row anchor margin, 0 disables

  void validate() const;
  bool operator==(const RuleNetConfig&) const = default;
};

/// Trainable raw weights M̃_1 … M̃_k, applied in that order to the input.
struct RuleNetParams {
  std::vector<Matrix> raw;
  double bias = 0.5;

  static RuleNetParams create(std::size_t inputs, const RuleNetConfig& cfg, nn::Rng& rng);

  std::size_t input_size() const { return raw.empty() ? 0 : raw.front().cols(); }
  std::size_t rule_count() const { return raw.empty() ? 0 : raw.back().rows(); }
  void validate() const;
  bool operator==(const RuleNetParams&) const = default;
};

/// relu(softmax_rows(raw)·x − d) / (1 − d)
Vector rule_layer(const Matrix& raw, std::span<const double> x, double bias);

/// Probabilistic-sum disjunction 1 − ∏(1 − v_i).
double fuzzy_or(std::span<const double> v);

struct RuleNetTrace {
  std::vector<Matrix> weights;  // softmax-activated M_i
  std::vector<Vector> pre;      // M_i x_{i−1} − d
  std::vector<Vector> post;     // post[0] = input
  double output = 0.0;
};

/// softmax_rows of every raw matrix; reusable across inputs while params stay fixed.
std::vector<Matrix> activated_weights(const RuleNetParams& params);

RuleNetTrace rulenet_trace(const RuleNetParams& params, std::span<const double> interpretation);
RuleNetTrace rulenet_trace(const RuleNetParams& params, const std::vector<Matrix>& weights,
                           std::span<const double> interpretation);
double rulenet_forward(const RuleNetParams& params, std::span<const double> interpretation);

struct RuleNetGradient {
  std::vector<Matrix> raw;

  static RuleNetGradient zeros_like(const RuleNetParams& params);
  void add(const RuleNetGradient& other, double scale = 1.0);
};

/// Accumulates upstream·dŷ/dM̃_i into `grad` and returns upstream·dŷ/dv_I.
Vector rulenet_backward(const RuleNetParams& params, const RuleNetTrace& trace, double upstream,
                        RuleNetGradient& grad);

/// M_P = M_k · … · M_1 (m × n), every row a probability vector.
Matrix program_tensor(const RuleNetParams& params);

}  // namespace seqrules::rules
