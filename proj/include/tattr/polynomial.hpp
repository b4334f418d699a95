#pragma once

#include <map>
#include <string>

#include "tattr/dual.hpp"
#include "tattr/error.hpp"
#include "tattr/multi_index.hpp"
#include "tattr/types.hpp"

namespace tattr {

/// Exact multivariate polynomial sum_kappa c_kappa x^kappa. The ground-truth
/// model family: every Taylor statement is an exact identity on it.
class Polynomial {
 public:
  static constexpr int kMaxDegree = 8;
  static constexpr int kMaxVars = 8;

  explicit Polynomial(int n_vars);
  Polynomial(int n_vars, std::map<MultiIndex, double> terms);

  int var_count() const { return n_; }
  int total_degree() const;
  const std::map<MultiIndex, double>& terms() const { return terms_; }

  /// Adds c * x^kappa, pruning the term if the collected coefficient is 0.
  void add_term(const MultiIndex& kappa, double coeff);

  double operator()(const FeatureVector& x) const { return eval<double>(x); }

  template <class Scalar>
  Scalar eval(const VectorX<Scalar>& x) const {
    if (x.size() != n_)
      throw ShapeError("polynomial over " + std::to_string(n_) + " variables, input has length " +
                       std::to_string(x.size()));
    Scalar acc(0.0);
    for (const auto& [kappa, coeff] : terms_) {
      Scalar term(coeff);
      for (int i = 0; i < n_; ++i)
        if (kappa[i] > 0) term = term * pow_int<Scalar>(x[i], kappa[i]);
      acc = acc + term;
    }
    return acc;
  }

  /// Exact symbolic partial of order kappa.
  Polynomial partial(const MultiIndex& kappa) const;
  Polynomial partial(int var) const;

  /// Rewrites p as a polynomial in the displacement d, so that
  /// expand_about(a).eval(d) == p(a + d). Coefficient of d^kappa equals the
  /// Taylor coefficient (d^kappa p)(a) / kappa!.
  Polynomial expand_about(const FeatureVector& anchor) const;

  std::string to_string() const;

 private:
  int n_;
  std::map<MultiIndex, double> terms_;
};

/// Parses a polynomial literal such as "3*x1 + x1^2 + 2*x1*x2 - 0.5*x3".
/// Grammar: sum of terms joined by + or - (unary minus allowed); a term is a
/// '*'-separated product of decimal constants and powers xK or xK^P with
/// K >= 1, P >= 1. Variables are x1..xn. If n_vars < 0 the variable count is
/// inferred from the highest index used.
Polynomial parse_polynomial(const std::string& text, int n_vars = -1);

}  // namespace tattr
