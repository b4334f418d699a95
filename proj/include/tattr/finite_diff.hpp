#pragma once

#include <cmath>
#include <functional>

#include "tattr/error.hpp"
#include "tattr/multi_index.hpp"
#include "tattr/types.hpp"

namespace tattr {

/// Scalar function over feature vectors, as seen by the finite-difference
/// oracle. Production derivatives come from the dual-number path; these
/// stencils exist to cross-check it.
using ScalarFn = std::function<double(const FeatureVector&)>;

namespace detail {

inline double checked_eval(const ScalarFn& f, const FeatureVector& x) {
  const double v = f(x);
  if (!std::isfinite(v)) throw NumericError("non-finite function value in finite-difference stencil");
  return v;
}

inline double fd_recurse(const ScalarFn& f, FeatureVector x, MultiIndex kappa, double h) {
  if (kappa.is_zero()) return checked_eval(f, x);
  int i = 0;
  while (kappa[i] == 0) ++i;
  kappa[i] -= 1;
  x[i] += h;
  const double hi = fd_recurse(f, x, kappa, h);
  x[i] -= 2.0 * h;
  const double lo = fd_recurse(f, x, kappa, h);
  return (hi - lo) / (2.0 * h);
}

}  // namespace detail

constexpr int kMaxFdOrder = 4;
constexpr double kDefaultFdStep1 = 1e-4;  // first order
constexpr double kDefaultFdStepK = 1e-3;  // orders 2..4

/// Central differences (f(x + h e_i) - f(x - h e_i)) / (2h) per coordinate.
inline FeatureVector fd_gradient(const ScalarFn& f, const FeatureVector& x, double h = kDefaultFdStep1) {
  if (h <= 0.0) throw ParameterError("finite-difference step must be > 0");
  FeatureVector g(x.size());
  FeatureVector p = x;
  for (int i = 0; i < x.size(); ++i) {
    p[i] = x[i] + h;
    const double hi = detail::checked_eval(f, p);
    p[i] = x[i] - h;
    const double lo = detail::checked_eval(f, p);
    p[i] = x[i];
    g[i] = (hi - lo) / (2.0 * h);
  }
  return g;
}

/// Nested central-difference estimate of the mixed partial d^|kappa| f / dx^kappa.
/// Supported up to total order 4; cost is 2^|kappa| evaluations.
inline double fd_mixed_partial(const ScalarFn& f, const FeatureVector& x, const MultiIndex& kappa,
                               double h = kDefaultFdStepK) {
  if (h <= 0.0) throw ParameterError("finite-difference step must be > 0");
  if (kappa.size() != x.size()) throw ShapeError("multi-index length does not match input length");
  const int order = kappa.order();
  if (order < 1) throw ParameterError("derivative order must be >= 1");
  if (order > kMaxFdOrder)
    throw ParameterError("finite-difference stencil supports order <= 4, requested " + std::to_string(order));
  return detail::fd_recurse(f, x, kappa, h);
}

}  // namespace tattr
