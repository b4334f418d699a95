#pragma once

#include <optional>

#include "tattr/attribution.hpp"
#include "tattr/poly_attr.hpp"
#include "tattr/properties.hpp"

namespace tattr {

/// Inputs for one reformulation check; only the fields a method uses are read.
struct ReformulationConfig {
  FeatureVector baseline;            // integrated_gradients / exact_ig / deeplift
  double v = 0.0;                    // perturbation constant
  std::optional<PatchSpec> patches;  // perturbation_patch
  int steps = 100;                   // riemann steps
  std::optional<Network> net;        // deeplift_rescale: the (single-layer) network realizing f
};

/// Computes a method's attribution and its claimed Taylor reformulation by
/// independent routes and returns the max per-feature absolute difference.
///
/// Anchoring follows the identity each reformulation holds under:
///   - gradient_x_input, perturbation_1, perturbation_patch, deeplift_rescale
///     expand at the input with displacement baseline - x and an overall sign
///     flip (gradient_x_input always against the zero baseline);
///   - integrated_gradients / exact_ig expand at the baseline with
///     displacement x - baseline and the degree-proportional allocation.
double verify_reformulation(const std::string& method_id, const Polynomial& f, const FeatureVector& x,
                            const ReformulationConfig& cfg);

struct ReformulationCheck {
  std::string id;
  std::string method;
  int instances = 0;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct SuiteReport {
  std::uint64_t seed = 0;
  int count = 0;
  std::vector<ReformulationCheck> rows;
  bool all_pass = false;

  nlohmann::json to_json() const;
  /// Fixed-width residual table, one line per row.
  std::string format_table() const;
};

/// Randomized verification suite over `count` seeded polynomials (degree <= 4,
/// n <= 5, |coeff| <= 5, |x| <= 3) and single-layer square-activation networks:
/// the five reformulation identities at 1e-9, the Riemann-vs-exact integrated
/// gradients convergence ratio between m=100 and m=400, and the completeness
/// residual at m=1000.
SuiteReport run_reformulation_suite(std::uint64_t seed, int count);

}  // namespace tattr
