#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tattr/error.hpp"
#include "tattr/types.hpp"

namespace tattr {

/// Per-feature attribution scores plus method metadata. The completeness
/// residual sum(a_i) - (f(x) - f(baseline)) is only present for methods that
/// claim completeness.
struct AttributionResult {
  FeatureVector scores;
  std::string method;
  std::string baseline_info;
  std::optional<double> completeness_residual;
  int stabilizer_events = 0;                     // deeplift near-zero denominators
  std::vector<FeatureVector> sampled_baselines;  // recorded by ig2/ig3

  nlohmann::json to_json() const;
};

/// Disjoint, exhaustive partition of the feature indices into patches.
struct PatchSpec {
  std::vector<std::vector<int>> patches;

  /// Throws ValidationError unless the patches cover 0..n-1 exactly once.
  void validate(int n) const;

  static PatchSpec singletons(int n);
  /// Tiles an H x W grid (row-major features) with ph x pw blocks; edge
  /// blocks absorb the remainder.
  static PatchSpec grid(int height, int width, int patch_h, int patch_w);

  /// patch index containing feature i.
  int patch_of(int i) const;
  int count() const { return static_cast<int>(patches.size()); }
};

/// How a baseline is produced for a method invocation.
struct BaselineSpec {
  enum class Kind { zero, constant, explicit_vector, gaussian_delta, gaussian_multi };
  Kind kind = Kind::zero;
  double constant = 0.0;
  FeatureVector vector;
  double sigma = 1.0;
  std::uint64_t seed = 0;
  int num_baselines = 1;  // J for gaussian_multi

  static BaselineSpec zero() { return {}; }
  static BaselineSpec constant_value(double v);
  static BaselineSpec explicit_vector_of(FeatureVector v);
  static BaselineSpec gaussian_delta(double sigma, std::uint64_t seed);
  static BaselineSpec gaussian_multi(double sigma, std::uint64_t seed, int count);

  /// Concrete baseline vector for the deterministic kinds; parameter error
  /// for the sampled kinds (those are consumed by ig2/ig3 directly).
  FeatureVector materialize(int n) const;
  std::string describe() const;
};

}  // namespace tattr
