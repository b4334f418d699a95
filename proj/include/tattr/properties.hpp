#pragma once

#include <array>
#include <optional>

#include "tattr/attribution_result.hpp"
#include "tattr/taylor.hpp"

namespace tattr {

/// Residual thresholds for the three attribution properties. satisfied_k is
/// residual_k <= abs_tol + rel_tol * |f(x) - f(baseline)|.
struct PropertyTolerances {
  double abs_tol = 1e-9;
  double rel_tol = 0.0;

  /// Exact-identity setting for polynomial models.
  static PropertyTolerances exact() { return {1e-9, 0.0}; }
  /// Approximation setting for smooth networks.
  static PropertyTolerances smooth() { return {0.0, 1e-4}; }

  double threshold(double scale) const { return abs_tol + rel_tol * std::abs(scale); }
};

/// How a method's Taylor reformulation spreads each expansion term across
/// features; drives the property-2/3 residuals.
struct MethodStructure {
  enum class Kind {
    first_order,          // gradient * input: own first-order term only
    independent,          // perturbation-1: every term with support {i}
    patch,                // perturbation-patch: every term supported inside i's patch
    global_fraction,      // deeplift / lrp: own F_i plus a fixed fraction of all high-order terms
    degree_proportional,  // integrated gradients: k_i / k of each term
    equal_split           // framework rule: 1/|support| of each term
  };
  Kind kind = Kind::degree_proportional;
  PatchSpec patches;        // kind == patch
  FeatureVector fractions;  // kind == global_fraction

  static MethodStructure first_order() { return {Kind::first_order, {}, {}}; }
  static MethodStructure independent() { return {Kind::independent, {}, {}}; }
  static MethodStructure patch(PatchSpec p) { return {Kind::patch, std::move(p), {}}; }
  static MethodStructure global_fraction(FeatureVector f) { return {Kind::global_fraction, {}, std::move(f)}; }
  static MethodStructure degree_proportional() { return {Kind::degree_proportional, {}, {}}; }
  static MethodStructure equal_split() { return {Kind::equal_split, {}, {}}; }

  /// Structure implied by a method identifier, for methods that need no extra
  /// configuration; ParameterError for perturbation_patch / deeplift / lrp.
  static MethodStructure for_method(const std::string& method_id);

  /// Fraction of the term kappa contributed to feature i's score.
  double share(const MultiIndex& kappa, int i) const;
};

/// Residuals for the three desired properties of a Taylor attribution:
///   1. low approximation error: |f(x) - f(baseline) - sum a_i|;
///   2. accurate assignment of independent terms: max_i |own independent
///      terms as captured by the method - (F_i + T^ind_i)|;
///   3. interactive terms live only on their support: mass assigned outside a
///      term's support plus the term mass not assigned within it.
struct PropertyReport {
  double approx_error = 0.0;
  double independent_residual = 0.0;
  double interactive_residual = 0.0;
  std::array<bool, 3> satisfied = {false, false, false};
  PropertyTolerances tolerances;
  double delta_f = 0.0;
  /// max_i |a_i - assign(dec, rule)_i|, a reference-rule comparison (informational).
  double assignment_deviation = 0.0;
  std::string method;

  nlohmann::json to_json() const;
};

/// Evaluates the three properties of `attr` against the decomposition. The
/// structure defaults from attr.method; pass it explicitly for methods whose
/// structure needs configuration (patch layout, layerwise fractions).
PropertyReport check_properties(const AttributionResult& attr, const TaylorDecomposition& dec,
                                const AssignmentRule& rule, const PropertyTolerances& tol = {},
                                const std::optional<MethodStructure>& structure = std::nullopt);

}  // namespace tattr
