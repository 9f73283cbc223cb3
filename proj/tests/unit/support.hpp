#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>

#include "seqrules/nn.hpp"

namespace testing {

/// |a − b| scaled by the larger magnitude; exact agreement of tiny values counts as zero.
inline double relative_error(double a, double b) {
  const double diff = std::abs(a - b);
  if (diff < 1e-8) return 0.0;
  return diff / std::max({std::abs(a), std::abs(b), 1e-6});
}

/// Central difference of f with respect to *p.
inline double central_difference(double* p, double h, const std::function<double()>& f) {
  const double saved = *p;
  *p = saved + h;
  const double up = f();
  *p = saved - h;
  const double down = f();
  *p = saved;
  return (up - down) / (2.0 * h);
}

inline seqrules::Vector random_vector(std::size_t n, seqrules::nn::Rng& rng, double lo = -1.0, double hi = 1.0) {
  seqrules::Vector v(n);
  for (double& x : v) x = rng.uniform(lo, hi);
  return v;
}

}  // namespace testing
