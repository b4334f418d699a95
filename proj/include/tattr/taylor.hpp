#pragma once

#include <functional>
#include <map>

#include "tattr/attribution_result.hpp"
#include "tattr/derivatives.hpp"
#include "tattr/model_function.hpp"

namespace tattr {

/// Where the expansion is anchored. at_baseline expands around the baseline
/// with displacement x - baseline (the integrated-gradients orientation);
/// at_input expands around the input with displacement baseline - x (the
/// orientation the perturbation and layerwise identities hold in, up to an
/// overall sign flip).
enum class AnchorMode { at_input, at_baseline };

inline const char* to_string(AnchorMode m) { return m == AnchorMode::at_input ? "at_input" : "at_baseline"; }

/// Decomposition of the model difference into first-order (F), second-order
/// independent (S_ind), pairwise interactive (S_int), and higher terms keyed
/// by multi-index. Every stored value is a term value c_kappa * delta^kappa.
struct TaylorDecomposition {
  AnchorMode anchor_mode = AnchorMode::at_baseline;
  int n = 0;
  int order = 0;
  FeatureVector x;
  FeatureVector baseline;
  FeatureVector delta;  // displacement from the anchor
  double f_x = 0.0;
  double f_baseline = 0.0;

  FeatureVector F;                      // F_i = f_{x_i}(anchor) * delta_i
  FeatureVector S_ind;                  // (1/2) f_{x_i x_i}(anchor) * delta_i^2
  Eigen::MatrixXd S_int;                // full pair values f_{x_i x_j} d_i d_j on both triangles, zero diagonal
  std::map<MultiIndex, double> higher;  // |kappa| >= 3
  double epsilon = 0.0;                 // remainder of the truncated expansion, anchor orientation

  /// +1 when total() tracks f(x) - f(baseline), -1 when it tracks the reverse.
  double sign() const { return anchor_mode == AnchorMode::at_baseline ? 1.0 : -1.0; }

  double delta_f() const { return f_x - f_baseline; }

  /// sum(F) + sum(S_ind) + (1/2) sum_{i != j} S_int + sum(higher).
  double total() const;

  /// Visits every term once as (kappa, term value); pairs are emitted once.
  void for_each_term(const std::function<void(const MultiIndex&, double)>& fn) const;

  /// Terms whose support is exactly {i}: F_i + S_ind_i + pure powers of i.
  double independent_total(int i) const;
};

/// How interactive terms are split among the features in their support.
struct AssignmentRule {
  enum class Kind { equal_split, degree_proportional };
  Kind kind = Kind::equal_split;

  static AssignmentRule equal_split() { return {Kind::equal_split}; }
  static AssignmentRule degree_proportional() { return {Kind::degree_proportional}; }

  /// Fraction of the term kappa given to feature i. equal_split shares evenly
  /// across the support; degree_proportional gives k_i / |kappa|. Both send
  /// independent terms wholly to their single feature.
  double share(const MultiIndex& kappa, int i) const;

  const char* name() const { return kind == Kind::equal_split ? "equal_split" : "degree_proportional"; }
};

/// Expands f around the anchor implied by anchor_mode up to `order` (<= 4)
/// and buckets the terms. Polynomials use the exact symbolic expansion; other
/// models go through the dual-tower coefficients. epsilon is the part of the
/// anchored difference the truncated expansion misses.
TaylorDecomposition decompose(const ModelFunction& f, const FeatureVector& x, const FeatureVector& baseline,
                              int order, AnchorMode anchor_mode);

/// a_i = F_i + S_ind_i + own higher independent terms + rule-assigned shares
/// of every interactive term. Conserves: sum(a_i) == dec.total().
AttributionResult assign(const TaylorDecomposition& dec, const AssignmentRule& rule);

namespace detail {

/// Buckets term values c_kappa * delta^kappa into F / S_ind / S_int / higher
/// and sets epsilon from the anchored difference. Shared by the dual-tower
/// and exact-polynomial decomposition routes.
void fill_decomposition(TaylorDecomposition& dec, const std::map<MultiIndex, double>& coeffs);

}  // namespace detail

}  // namespace tattr
