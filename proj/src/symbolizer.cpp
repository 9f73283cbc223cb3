#include "seqrules/symbolizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "seqrules/error.hpp"

namespace seqrules::sym {

void SymbolizerConfig::validate(std::size_t length) const {
  if (window == 0) throw InvalidArgument("symbolizer: window must be >= 1");
  if (regions == 0) throw InvalidArgument("symbolizer: regions must be >= 1");
  if (clusters == 0) throw InvalidArgument("symbolizer: clusters must be >= 1");
  if (embedding == 0 || hidden == 0) throw InvalidArgument("symbolizer: embedding and hidden must be >= 1");
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw InvalidArgument("symbolizer: alpha must be finite and >= 0");
  if (length != 0 && window > length) {
    throw InvalidArgument("symbolizer: window " + std::to_string(window) + " exceeds sequence length " +
                          std::to_string(length));
  }
}

std::vector<Window> slide_windows(std::span<const double> x, std::size_t length) {
  if (length == 0 || length > x.size()) {
    throw InvalidArgument("slide_windows: window length " + std::to_string(length) + " invalid for sequence of " +
                          std::to_string(x.size()));
  }
  std::vector<Window> out;
  out.reserve(x.size() - length + 1);
  for (std::size_t s = 0; s + length <= x.size(); ++s) {
    out.push_back({Vector(x.begin() + s, x.begin() + s + length), s});
  }
  return out;
}

std::size_t region_length(std::size_t length, std::size_t regions) { return (length + regions - 1) / regions; }

std::size_t assign_region(std::size_t start, std::size_t length, std::size_t regions) {
  return std::min(start / region_length(length, regions), regions - 1);
}

namespace {

void softmin_into(std::span<const double> distances, double alpha, std::span<double> out) {
  double best = std::numeric_limits<double>::infinity();
  for (double d : distances) best = std::min(best, d);
  double total = 0.0;
  for (std::size_t k = 0; k < distances.size(); ++k) {
    out[k] = std::exp(-alpha * (distances[k] - best));
    total += out[k];
  }
  for (double& v : out) v /= total;
}

std::size_t argmin(std::span<const double> v) {
  return static_cast<std::size_t>(std::min_element(v.begin(), v.end()) - v.begin());
}

}  // namespace

Vector soft_assign(std::span<const double> z, const ClusterBank& bank, double alpha) {
  if (bank.size() == 0) throw InvalidArgument("soft_assign: empty cluster bank");
  if (z.size() != bank.dimension()) throw InvalidArgument("soft_assign: embedding dimension mismatch");
  Vector d(bank.size());
  for (std::size_t k = 0; k < bank.size(); ++k) d[k] = squared_distance(z, bank.centers.row(k));
  Vector out(bank.size());
  softmin_into(d, alpha, out);
  return out;
}

std::size_t hard_assign(std::span<const double> z, const ClusterBank& bank) {
  if (bank.size() == 0) throw InvalidArgument("hard_assign: empty cluster bank");
  Vector d(bank.size());
  for (std::size_t k = 0; k < bank.size(); ++k) d[k] = squared_distance(z, bank.centers.row(k));
  return argmin(d);
}

ClusterIndexTensor build_index_tensor(const Matrix& assignments, std::size_t length, std::size_t regions) {
  const std::size_t lp = region_length(length, regions);
  ClusterIndexTensor cx(assignments.cols(), lp, regions);
  for (std::size_t w = 0; w < assignments.rows(); ++w) {
    const std::size_t j = assign_region(w, length, regions);
    const std::size_t slot = w - j * lp;
    if (slot >= lp) throw InvalidArgument("build_index_tensor: window does not fit its region");
    cx.occupied[slot * regions + j] = true;
    for (std::size_t k = 0; k < cx.clusters; ++k) cx.at(k, slot, j) = assignments(w, k);
  }
  return cx;
}

Matrix region_cluster_matrix(const ClusterIndexTensor& cx) {
  Matrix cp(cx.clusters, cx.regions);
  Vector column(cx.clusters);
  for (std::size_t j = 0; j < cx.regions; ++j) {
    std::fill(column.begin(), column.end(), 0.0);
    for (std::size_t slot = 0; slot < cx.slots; ++slot) {
      if (!cx.occupied[slot * cx.regions + j]) continue;
      for (std::size_t k = 0; k < cx.clusters; ++k) column[k] += cx.at(k, slot, j);
    }
    const Vector p = nn::softmax(column);
    for (std::size_t k = 0; k < cx.clusters; ++k) cp(k, j) = p[k];
  }
  return cp;
}

Vector flatten_region_major(const Matrix& cp) {
  Vector v(cp.rows() * cp.cols());
  for (std::size_t j = 0; j < cp.cols(); ++j) {
    for (std::size_t i = 0; i < cp.rows(); ++i) v[j * cp.rows() + i] = cp(i, j);
  }
  return v;
}

Matrix discretize(const Matrix& cp) {
  Matrix out(cp.rows(), cp.cols());
  for (std::size_t j = 0; j < cp.cols(); ++j) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < cp.rows(); ++i) {
      if (cp(i, j) > cp(best, j)) best = i;
    }
    if (cp.rows() > 0) out(best, j) = 1.0;
  }
  return out;
}

std::vector<std::uint8_t> discretize_flat(const Matrix& cp) {
  const Matrix d = discretize(cp);
  std::vector<std::uint8_t> out(cp.rows() * cp.cols(), 0);
  for (std::size_t j = 0; j < cp.cols(); ++j) {
    for (std::size_t i = 0; i < cp.rows(); ++i) out[j * cp.rows() + i] = d(i, j) > 0.5 ? 1 : 0;
  }
  return out;
}

Autoencoder Autoencoder::create(const SymbolizerConfig& cfg, nn::Rng& rng) {
  using nn::Activation;
  const std::size_t enc_sizes[] = {cfg.window, cfg.hidden, cfg.embedding};
  const std::size_t dec_sizes[] = {cfg.embedding, cfg.hidden, cfg.window};
  const Activation acts[] = {Activation::relu, Activation::linear};
  Autoencoder ae;
  ae.encoder = nn::DenseNet::create(enc_sizes, acts, rng);
  ae.decoder = nn::DenseNet::create(dec_sizes, acts, rng);
  return ae;
}

SequenceTrace trace_sequence(std::span<const double> x, const nn::DenseNet& encoder, const nn::DenseNet* decoder,
                             const ClusterBank& bank, const SymbolizerConfig& cfg, TraceOptions options) {
  const std::size_t l = cfg.window;
  const std::size_t k_count = bank.size();
  if (k_count == 0) throw InvalidArgument("symbolize: empty cluster bank");
  if (k_count != cfg.clusters) throw InvalidArgument("symbolize: bank size differs from configured cluster count");
  if (encoder.input_size() != l) throw InvalidArgument("symbolize: encoder input size differs from window length");
  if (encoder.output_size() != bank.dimension()) throw InvalidArgument("symbolize: embedding dimension mismatch");
  if (l > x.size()) throw InvalidArgument("symbolize: window longer than sequence");

  const std::size_t w_count = x.size() - l + 1;
  SequenceTrace t;
  t.length = x.size();
  t.encoder.reserve(w_count);
  t.distances = Matrix(w_count, k_count);
  t.assignments = Matrix(w_count, k_count);
  const bool reconstruct = options.reconstruct && decoder != nullptr;
  if (reconstruct) t.decoder.reserve(w_count);

  for (std::size_t w = 0; w < w_count; ++w) {
    const auto s = x.subspan(w, l);
    t.encoder.push_back(nn::net_forward(encoder, s));
    const Vector& z = t.encoder.back().output();
    auto dist = t.distances.row(w);
    for (std::size_t k = 0; k < k_count; ++k) dist[k] = squared_distance(z, bank.centers.row(k));
    auto assign = t.assignments.row(w);
    if (options.hard) {
      assign[argmin(dist)] = 1.0;
    } else {
      softmin_into(dist, cfg.alpha, assign);
    }
    t.clustering += dot(dist, assign);
    if (reconstruct) {
      t.decoder.push_back(nn::net_forward(*decoder, z));
      t.reconstruction += squared_distance(t.decoder.back().output(), s);
    }
  }
  t.region_cluster = region_cluster_matrix(build_index_tensor(t.assignments, x.size(), cfg.regions));
  t.interpretation = flatten_region_major(t.region_cluster);
  return t;
}

Vector symbolize(std::span<const double> x, const nn::DenseNet& encoder, const ClusterBank& bank,
                 const SymbolizerConfig& cfg) {
  return trace_sequence(x, encoder, nullptr, bank, cfg, {.reconstruct = false}).interpretation;
}

SymbolizerGradient SymbolizerGradient::zeros_like(const nn::DenseNet& encoder, const nn::DenseNet& decoder,
                                                  const ClusterBank& bank) {
  return {nn::NetGradient::zeros_like(encoder), nn::NetGradient::zeros_like(decoder),
          Matrix(bank.centers.rows(), bank.centers.cols())};
}

void SymbolizerGradient::add(const SymbolizerGradient& other, double scale) {
  encoder.add(other.encoder, scale);
  decoder.add(other.decoder, scale);
  seqrules::accumulate(centers.values(), other.centers.values(), scale);
}

void backward_sequence(std::span<const double> x, const SequenceTrace& trace, const nn::DenseNet& encoder,
                       const nn::DenseNet& decoder, const ClusterBank& bank, const SymbolizerConfig& cfg,
                       SequenceLossWeights weights, std::span<const double> grad_interpretation,
                       SymbolizerGradient& grad) {
  const std::size_t l = cfg.window;
  const std::size_t k_count = bank.size();
  const std::size_t r_count = cfg.regions;
  const std::size_t w_count = trace.windows();
  if (weights.reconstruction != 0.0 && trace.decoder.size() != w_count) {
    throw InvalidArgument("backward_sequence: reconstruction weight set but trace has no decoder pass");
  }

  // dL/dc[k, j] through the per-column softmax of the region cluster matrix.
  Matrix grad_sums(k_count, r_count);
  if (!grad_interpretation.empty()) {
    if (grad_interpretation.size() != k_count * r_count) {
      throw InvalidArgument("backward_sequence: interpretation gradient has wrong length");
    }
    Vector p(k_count), g(k_count);
    for (std::size_t j = 0; j < r_count; ++j) {
      for (std::size_t k = 0; k < k_count; ++k) {
        p[k] = trace.region_cluster(k, j);
        g[k] = grad_interpretation[j * k_count + k];
      }
      const Vector gs = nn::softmax_backward(p, g);
      for (std::size_t k = 0; k < k_count; ++k) grad_sums(k, j) = gs[k];
    }
  }

  Vector grad_dist(k_count), grad_assign(k_count), grad_z;
  for (std::size_t w = 0; w < w_count; ++w) {
    const auto dist = trace.distances.row(w);
    const auto assign = trace.assignments.row(w);
    const Vector& z = trace.encoder[w].output();
    grad_z.assign(z.size(), 0.0);

    if (weights.reconstruction != 0.0) {
      const Vector& recon = trace.decoder[w].output();
      Vector up(l);
      for (std::size_t i = 0; i < l; ++i) up[i] = 2.0 * weights.reconstruction * (recon[i] - x[w + i]);
      const Vector gz = nn::net_backward(decoder, trace.decoder[w], up, grad.decoder);
      seqrules::accumulate(grad_z, gz);
    }

    // Clustering term Σ_k d_k c_k with c = softmin(d).
    const double mean_dist = dot(dist, assign);
    for (std::size_t k = 0; k < k_count; ++k) {
      grad_dist[k] = weights.clustering * assign[k] * (1.0 - cfg.alpha * (dist[k] - mean_dist));
    }

    if (!grad_interpretation.empty()) {
      const std::size_t j = assign_region(w, trace.length, r_count);
      for (std::size_t k = 0; k < k_count; ++k) grad_assign[k] = grad_sums(k, j);
      // c = softmax(−α d): dL/dd = −α · softmax_backward(c, dL/dc).
      const Vector glogit = nn::softmax_backward(assign, grad_assign);
      for (std::size_t k = 0; k < k_count; ++k) grad_dist[k] -= cfg.alpha * glogit[k];
    }

    for (std::size_t k = 0; k < k_count; ++k) {
      const double gd = grad_dist[k];
      if (gd == 0.0) continue;
      const auto center = bank.centers.row(k);
      auto gcenter = grad.centers.row(k);
      for (std::size_t q = 0; q < z.size(); ++q) {
        const double diff = 2.0 * gd * (z[q] - center[q]);
        grad_z[q] += diff;
        gcenter[q] -= diff;
      }
    }
    nn::net_backward(encoder, trace.encoder[w], grad_z, grad.encoder);
  }
}

ClusterBank lloyd_kmeans(const Matrix& points, std::size_t k, nn::Rng& rng, std::size_t max_iter) {
  const std::size_t n = points.rows();
  const std::size_t dim = points.cols();
  if (k == 0) throw InvalidArgument("lloyd_kmeans: k must be >= 1");
  if (n < k) throw InvalidArgument("lloyd_kmeans: fewer points than clusters");

  // k-means++ seeding.
  ClusterBank bank{Matrix(k, dim)};
  Vector nearest(n, std::numeric_limits<double>::infinity());
  std::size_t first = rng.index(n);
  std::copy(points.row(first).begin(), points.row(first).end(), bank.centers.row(0).begin());
  for (std::size_t c = 1; c < k; ++c) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      nearest[i] = std::min(nearest[i], squared_distance(points.row(i), bank.centers.row(c - 1)));
      total += nearest[i];
    }
    std::size_t pick = rng.index(n);
    if (total > 0.0) {
      double target = rng.uniform(0.0, total);
      for (std::size_t i = 0; i < n; ++i) {
        target -= nearest[i];
        if (target <= 0.0) {
          pick = i;
          break;
        }
      }
    }
    std::copy(points.row(pick).begin(), points.row(pick).end(), bank.centers.row(c).begin());
  }

  std::vector<std::size_t> labels(n, k);
  Vector best_dist(n);
  for (std::size_t iter = 0; iter < max_iter; ++iter) {
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t best = 0;
      double bd = squared_distance(points.row(i), bank.centers.row(0));
      for (std::size_t c = 1; c < k; ++c) {
        const double d = squared_distance(points.row(i), bank.centers.row(c));
        if (d < bd) {
          bd = d;
          best = c;
        }
      }
      best_dist[i] = bd;
      if (labels[i] != best) {
        labels[i] = best;
        changed = true;
      }
    }
    if (!changed) break;

    Matrix sums(k, dim);
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
      seqrules::accumulate(sums.row(labels[i]), points.row(i));
      ++counts[labels[i]];
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] == 0) {
        // Re-seed an empty cluster at the point farthest from its current center.
        const std::size_t far =
            static_cast<std::size_t>(std::max_element(best_dist.begin(), best_dist.end()) - best_dist.begin());
        std::copy(points.row(far).begin(), points.row(far).end(), bank.centers.row(c).begin());
        best_dist[far] = 0.0;
        labels[far] = c;
        continue;
      }
      auto center = bank.centers.row(c);
      for (std::size_t q = 0; q < dim; ++q) center[q] = sums(c, q) / static_cast<double>(counts[c]);
    }
  }
  return bank;
}

double dkm_objective(std::span<const Window> windows, const nn::DenseNet& encoder, const nn::DenseNet& decoder,
                     const ClusterBank& bank, double alpha, double lambda) {
  double recon = 0.0;
  double cluster = 0.0;
  for (const auto& w : windows) {
    const Vector z = nn::net_predict(encoder, w.values);
    recon += squared_distance(nn::net_predict(decoder, z), w.values);
    const Vector g = soft_assign(z, bank, alpha);
    for (std::size_t k = 0; k < bank.size(); ++k) cluster += squared_distance(z, bank.centers.row(k)) * g[k];
  }
  return recon + lambda * cluster;
}

}  // namespace seqrules::sym
