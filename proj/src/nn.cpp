#include "seqrules/nn.hpp"

#include <algorithm>
#include <cmath>

#include "seqrules/error.hpp"

namespace seqrules::nn {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

double activate(Activation a, double x) {
  switch (a) {
    case Activation::linear:
      return x;
    case Activation::relu:
      return x > 0.0 ? x : 0.0;
    case Activation::sigmoid:
      return 1.0 / (1.0 + std::exp(-x));
  }
  return x;
}

// Derivative expressed through pre- and post-activation values.
double activate_grad(Activation a, double pre, double post) {
  switch (a) {
    case Activation::linear:
      return 1.0;
    case Activation::relu:
      return pre > 0.0 ? 1.0 : 0.0;
    case Activation::sigmoid:
      return post * (1.0 - post);
  }
  return 1.0;
}

}  // namespace

Rng Rng::stream(std::uint64_t seed, std::uint64_t tag) {
  return Rng(splitmix64(splitmix64(seed) ^ splitmix64(tag + 0x5851F42D4C957F2DULL)));
}

Vector softmax(std::span<const double> logits) {
  if (!all_finite(logits)) throw InvalidArgument("softmax: non-finite input");
  Vector out(logits.size());
  if (logits.empty()) return out;
  const double shift = *std::max_element(logits.begin(), logits.end());
  double total = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - shift);
    total += out[i];
  }
  for (double& v : out) v /= total;
  return out;
}

Matrix softmax_rows(const Matrix& raw) {
  Matrix out(raw.rows(), raw.cols());
  for (std::size_t r = 0; r < raw.rows(); ++r) {
    const Vector row = softmax(raw.row(r));
    std::copy(row.begin(), row.end(), out.row(r).begin());
  }
  return out;
}

Vector softmax_backward(std::span<const double> probs, std::span<const double> grad_probs) {
  const double inner = dot(probs, grad_probs);
  Vector out(probs.size());
  for (std::size_t i = 0; i < probs.size(); ++i) out[i] = probs[i] * (grad_probs[i] - inner);
  return out;
}

DenseNet DenseNet::create(std::span<const std::size_t> sizes, std::span<const Activation> activations, Rng& rng) {
  if (sizes.size() < 2 || activations.size() + 1 != sizes.size()) {
    throw InvalidArgument("DenseNet::create: need one activation per layer");
  }
  DenseNet net;
  for (std::size_t i = 0; i + 1 < sizes.size(); ++i) {
    const std::size_t in = sizes[i];
    const std::size_t out = sizes[i + 1];
    if (in == 0 || out == 0) throw InvalidArgument("DenseNet::create: zero-width layer");
    DenseLayer layer{Matrix(out, in), Vector(out, 0.0), activations[i]};
    const double limit = std::sqrt(6.0 / static_cast<double>(in + out));
    for (double& w : layer.weights.values()) w = rng.uniform(-limit, limit);
    net.layers.push_back(std::move(layer));
  }
  return net;
}

std::size_t DenseNet::input_size() const { return layers.empty() ? 0 : layers.front().input_size(); }
std::size_t DenseNet::output_size() const { return layers.empty() ? 0 : layers.back().output_size(); }

std::size_t DenseNet::parameter_count() const {
  std::size_t n = 0;
  for (const auto& l : layers) n += l.weights.size() + l.bias.size();
  return n;
}

void DenseNet::validate() const {
  if (layers.empty()) throw InvalidArgument("DenseNet: no layers");
  for (std::size_t i = 0; i < layers.size(); ++i) {
    if (layers[i].bias.size() != layers[i].output_size()) {
      throw InvalidArgument("DenseNet: bias length mismatch in layer " + std::to_string(i));
    }
    if (i > 0 && layers[i].input_size() != layers[i - 1].output_size()) {
      throw InvalidArgument("DenseNet: layer " + std::to_string(i) + " does not chain");
    }
  }
}

ForwardTrace net_forward(const DenseNet& net, std::span<const double> x) {
  if (x.size() != net.input_size()) {
    throw InvalidArgument("net_forward: expected input of size " + std::to_string(net.input_size()) + ", got " +
                          std::to_string(x.size()));
  }
  ForwardTrace trace;
  trace.pre.reserve(net.layers.size());
  trace.post.reserve(net.layers.size() + 1);
  trace.post.emplace_back(x.begin(), x.end());
  for (const auto& layer : net.layers) {
    Vector z = matvec(layer.weights, trace.post.back());
    Vector a(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) {
      z[i] += layer.bias[i];
      a[i] = activate(layer.activation, z[i]);
    }
    trace.pre.push_back(std::move(z));
    trace.post.push_back(std::move(a));
  }
  return trace;
}

Vector net_predict(const DenseNet& net, std::span<const double> x) {
  if (x.size() != net.input_size()) throw InvalidArgument("net_predict: dimension mismatch");
  Vector cur(x.begin(), x.end());
  for (const auto& layer : net.layers) {
    Vector z = matvec(layer.weights, cur);
    for (std::size_t i = 0; i < z.size(); ++i) z[i] = activate(layer.activation, z[i] + layer.bias[i]);
    cur = std::move(z);
  }
  return cur;
}

NetGradient NetGradient::zeros_like(const DenseNet& net) {
  NetGradient g;
  for (const auto& l : net.layers) {
    g.weights.emplace_back(l.weights.rows(), l.weights.cols());
    g.bias.emplace_back(l.bias.size(), 0.0);
  }
  return g;
}

void NetGradient::add(const NetGradient& other, double s) {
  for (std::size_t i = 0; i < weights.size(); ++i) {
    seqrules::accumulate(weights[i].values(), other.weights[i].values(), s);
    seqrules::accumulate(bias[i], other.bias[i], s);
  }
}

void NetGradient::scale(double factor) {
  for (std::size_t i = 0; i < weights.size(); ++i) {
    for (double& v : weights[i].values()) v *= factor;
    for (double& v : bias[i]) v *= factor;
  }
}

Vector net_backward(const DenseNet& net, const ForwardTrace& trace, std::span<const double> upstream,
                    NetGradient& grad) {
  const std::size_t n = net.layers.size();
  if (trace.pre.size() != n || trace.post.size() != n + 1 || upstream.size() != net.output_size() ||
      grad.weights.size() != n) {
    throw InvalidArgument("net_backward: shape mismatch");
  }
  Vector delta(upstream.begin(), upstream.end());
  for (std::size_t li = n; li-- > 0;) {
    const auto& layer = net.layers[li];
    for (std::size_t i = 0; i < delta.size(); ++i) {
      delta[i] *= activate_grad(layer.activation, trace.pre[li][i], trace.post[li + 1][i]);
    }
    add_outer(grad.weights[li], delta, trace.post[li]);
    seqrules::accumulate(grad.bias[li], delta);
    delta = matvec_transposed(layer.weights, delta);
  }
  return delta;
}

LossValue loss_eval(LossKind kind, std::span<const double> pred, std::span<const double> target) {
  if (pred.size() != target.size()) throw InvalidArgument("loss_eval: length mismatch");
  LossValue out;
  out.grad.assign(pred.size(), 0.0);
  if (pred.empty()) return out;
  const double n = static_cast<double>(pred.size());
  if (kind == LossKind::mean_squared_error) {
    for (std::size_t i = 0; i < pred.size(); ++i) {
      const double d = pred[i] - target[i];
      out.value += d * d / n;
      out.grad[i] = 2.0 * d / n;
    }
    return out;
  }
  // Gradient is taken at the clamped point so saturated predictions still push back.
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double p = std::clamp(pred[i], kBceClamp, 1.0 - kBceClamp);
    const double t = target[i];
    out.value += -(t * std::log(p) + (1.0 - t) * std::log(1.0 - p)) / n;
    out.grad[i] = (p - t) / (p * (1.0 - p)) / n;
  }
  return out;
}

void Adam::step(std::span<const ParamGroup> groups) {
  for (const auto& g : groups) {
    if (g.values.size() != g.grads.size()) throw InvalidArgument("Adam::step: shape mismatch in " + g.name);
    if (!all_finite(g.grads)) throw TrainingDiverged("non-finite gradient in parameter '" + g.name + "'");
  }
  ++steps_;
  const double t = static_cast<double>(steps_);
  const double correction1 = 1.0 - std::pow(config_.beta1, t);
  const double correction2 = 1.0 - std::pow(config_.beta2, t);
  for (const auto& g : groups) {
    auto& m = moments_[g.name];
    if (m.first.size() != g.values.size()) {
      m.first.assign(g.values.size(), 0.0);
      m.second.assign(g.values.size(), 0.0);
    }
    for (std::size_t i = 0; i < g.values.size(); ++i) {
      const double gi = g.grads[i];
      m.first[i] = config_.beta1 * m.first[i] + (1.0 - config_.beta1) * gi;
      m.second[i] = config_.beta2 * m.second[i] + (1.0 - config_.beta2) * gi * gi;
      const double mhat = m.first[i] / correction1;
      const double vhat = m.second[i] / correction2;
      g.values[i] -= config_.learning_rate * mhat / (std::sqrt(vhat) + config_.epsilon);
    }
  }
}

void append_groups(std::vector<ParamGroup>& groups, const std::string& prefix, DenseNet& net,
                   const NetGradient& grad) {
  for (std::size_t i = 0; i < net.layers.size(); ++i) {
    const std::string base = prefix + "." + std::to_string(i);
    groups.push_back({base + ".w", net.layers[i].weights.values(), grad.weights[i].values()});
    groups.push_back({base + ".b", net.layers[i].bias, grad.bias[i]});
  }
}

}  // namespace seqrules::nn
