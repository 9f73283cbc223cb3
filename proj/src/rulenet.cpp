#include "seqrules/rulenet.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "seqrules/error.hpp"

namespace seqrules::rules {

void RuleNetConfig::validate() const {
  if (rules == 0) throw InvalidArgument("rulenet: rules must be >= 1");
  for (std::size_t h : hidden) {
    if (h == 0) throw InvalidArgument("rulenet: hidden widths must be >= 1");
  }
  if (!(bias > 0.0 && bias < 1.0)) throw InvalidArgument("rulenet: bias must lie in (0, 1)");
  if (!(init_scale >= 0.0) || !std::isfinite(init_scale)) throw InvalidArgument("rulenet: init_scale must be >= 0");
  if (!std::isfinite(init_anchor)) throw InvalidArgument("rulenet: init_anchor must be finite");
}

RuleNetParams RuleNetParams::create(std::size_t inputs, const RuleNetConfig& cfg, nn::Rng& rng) {
  cfg.validate();
  if (inputs == 0) throw InvalidArgument("rulenet: zero inputs");
  RuleNetParams p;
  p.bias = cfg.bias;
  std::vector<std::size_t> widths{inputs};
  widths.insert(widths.end(), cfg.hidden.begin(), cfg.hidden.end());
  widths.push_back(cfg.rules);
  for (std::size_t i = 0; i + 1 < widths.size(); ++i) {
    Matrix m(widths[i + 1], widths[i]);
    for (double& v : m.values()) v = rng.uniform(-cfg.init_scale, cfg.init_scale);
    if (cfg.init_anchor > 0.0) {
      // Row r leans on input perm[r mod n]: its softmax weight starts near
      // e^a / (e^a + 1), so every unit is live on inputs where that atom holds.
      std::vector<std::size_t> perm(widths[i]);
      for (std::size_t j = 0; j < perm.size(); ++j) perm[j] = j;
      for (std::size_t j = perm.size(); j > 1; --j) std::swap(perm[j - 1], perm[rng.index(j)]);
      const double logit = std::log(static_cast<double>(std::max<std::size_t>(widths[i], 2) - 1)) + cfg.init_anchor;
      for (std::size_t r = 0; r < m.rows(); ++r) m(r, perm[r % perm.size()]) += logit;
    }
    p.raw.push_back(std::move(m));
  }
  return p;
}

void RuleNetParams::validate() const {
  if (raw.empty()) throw InvalidArgument("rulenet: no layers");
  if (!(bias > 0.0 && bias < 1.0)) throw InvalidArgument("rulenet: bias must lie in (0, 1)");
  for (std::size_t i = 1; i < raw.size(); ++i) {
    if (raw[i].cols() != raw[i - 1].rows()) {
      throw InvalidArgument("rulenet: layer " + std::to_string(i) + " does not chain");
    }
  }
}

namespace {

Vector threshold_layer(const Matrix& weights, std::span<const double> x, double bias, Vector* pre_out) {
  Vector pre = matvec(weights, x);
  Vector post(pre.size());
  for (std::size_t i = 0; i < pre.size(); ++i) {
    pre[i] -= bias;
    post[i] = pre[i] > 0.0 ? pre[i] / (1.0 - bias) : 0.0;
  }
  if (pre_out != nullptr) *pre_out = std::move(pre);
  return post;
}

}  // namespace

Vector rule_layer(const Matrix& raw, std::span<const double> x, double bias) {
  if (x.size() != raw.cols()) throw InvalidArgument("rule_layer: dimension mismatch");
  return threshold_layer(nn::softmax_rows(raw), x, bias, nullptr);
}

double fuzzy_or(std::span<const double> v) {
  double keep = 1.0;
  for (double x : v) keep *= (1.0 - x);
  return 1.0 - keep;
}

std::vector<Matrix> activated_weights(const RuleNetParams& params) {
  std::vector<Matrix> out;
  out.reserve(params.raw.size());
  for (const auto& raw : params.raw) out.push_back(nn::softmax_rows(raw));
  return out;
}

RuleNetTrace rulenet_trace(const RuleNetParams& params, std::span<const double> interpretation) {
  return rulenet_trace(params, activated_weights(params), interpretation);
}

RuleNetTrace rulenet_trace(const RuleNetParams& params, const std::vector<Matrix>& weights,
                           std::span<const double> interpretation) {
  if (weights.size() != params.raw.size()) throw InvalidArgument("rulenet_forward: weight count mismatch");
  if (interpretation.size() != params.input_size()) {
    throw InvalidArgument("rulenet_forward: expected " + std::to_string(params.input_size()) + " inputs, got " +
                          std::to_string(interpretation.size()));
  }
  RuleNetTrace t;
  t.post.emplace_back(interpretation.begin(), interpretation.end());
  t.weights = weights;
  for (const auto& m : t.weights) {
    Vector pre;
    Vector post = threshold_layer(m, t.post.back(), params.bias, &pre);
    t.pre.push_back(std::move(pre));
    t.post.push_back(std::move(post));
  }
  t.output = fuzzy_or(t.post.back());
  return t;
}

double rulenet_forward(const RuleNetParams& params, std::span<const double> interpretation) {
  return rulenet_trace(params, interpretation).output;
}

RuleNetGradient RuleNetGradient::zeros_like(const RuleNetParams& params) {
  RuleNetGradient g;
  for (const auto& m : params.raw) g.raw.emplace_back(m.rows(), m.cols());
  return g;
}

void RuleNetGradient::add(const RuleNetGradient& other, double scale) {
  for (std::size_t i = 0; i < raw.size(); ++i) seqrules::accumulate(raw[i].values(), other.raw[i].values(), scale);
}

Vector rulenet_backward(const RuleNetParams& params, const RuleNetTrace& trace, double upstream,
                        RuleNetGradient& grad) {
  const std::size_t layers = params.raw.size();
  if (trace.weights.size() != layers || grad.raw.size() != layers) {
    throw InvalidArgument("rulenet_backward: shape mismatch");
  }
  // dŷ/dx_i = ∏_{j≠i} (1 − x_j)
  const Vector& out = trace.post.back();
  Vector delta(out.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    double prod = 1.0;
    for (std::size_t j = 0; j < out.size(); ++j) {
      if (j != i) prod *= (1.0 - out[j]);
    }
    delta[i] = upstream * prod;
  }
  const double scale = 1.0 / (1.0 - params.bias);
  for (std::size_t li = layers; li-- > 0;) {
    const Matrix& m = trace.weights[li];
    const Vector& input = trace.post[li];
    for (std::size_t r = 0; r < delta.size(); ++r) delta[r] = trace.pre[li][r] > 0.0 ? delta[r] * scale : 0.0;
    // dL/dM[r,:] = δ_r xᵀ, pushed through the row softmax.
    for (std::size_t r = 0; r < m.rows(); ++r) {
      if (delta[r] == 0.0) continue;
      const auto mrow = m.row(r);
      const double inner = delta[r] * dot(mrow, input);
      auto grow = grad.raw[li].row(r);
      for (std::size_t c = 0; c < m.cols(); ++c) grow[c] += mrow[c] * (delta[r] * input[c] - inner);
    }
    delta = matvec_transposed(m, delta);
  }
  return delta;
}

Matrix program_tensor(const RuleNetParams& params) {
  params.validate();
  Matrix product = nn::softmax_rows(params.raw.front());
  for (std::size_t i = 1; i < params.raw.size(); ++i) product = matmul(nn::softmax_rows(params.raw[i]), product);
  return product;
}

}  // namespace seqrules::rules
