#pragma once

#include <map>
#include <optional>

#include "tattr/model_function.hpp"
#include "tattr/multi_index.hpp"

namespace tattr {

/// Raw mixed partial d^kappa f at x (1 <= |kappa| <= 4), via a hyper-dual
/// tower of order |kappa|; exact to machine precision on smooth functions.
double partial_derivative(const ModelFunction& f, const FeatureVector& x, const MultiIndex& kappa,
                          EvalFlags* flags = nullptr);

/// Exact gradient. Networks take a reverse sweep (one forward, one backward
/// pass); other models take one first-order dual pass per coordinate.
FeatureVector gradient(const ModelFunction& f, const FeatureVector& x, EvalFlags* flags = nullptr);

/// Exact symmetric Hessian via second-order duals (upper triangle evaluated,
/// mirrored to the lower).
Eigen::MatrixXd hessian(const ModelFunction& f, const FeatureVector& x, EvalFlags* flags = nullptr);

/// Taylor-monomial coefficients c_kappa = (d^kappa f)(anchor) / kappa! for all
/// 1 <= |kappa| <= max_order, optionally restricted to a support subset, so
/// that f(anchor + d) ~ f(anchor) + sum c_kappa d^kappa. Enumeration is
/// guarded by `budget` (ComplexityError past it).
std::map<MultiIndex, double> taylor_coefficients(const ModelFunction& f, const FeatureVector& anchor,
                                                 int max_order, const std::vector<int>* support = nullptr,
                                                 std::uint64_t budget = 100000, EvalFlags* flags = nullptr);

constexpr int kMaxDerivativeOrder = 4;

struct DerivativeBundle {
  double value = 0.0;
  FeatureVector gradient;
  std::optional<Eigen::MatrixXd> hessian;
  std::map<MultiIndex, double> higher;  // raw partials for |kappa| in [3, order]
  bool relu_kink = false;
};

/// Value, gradient, and (for order >= 2 / 3) Hessian and higher raw partials.
DerivativeBundle derivative_bundle(const ModelFunction& f, const FeatureVector& x, int order);

}  // namespace tattr
