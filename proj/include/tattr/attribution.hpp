#pragma once

#include "tattr/attribution_result.hpp"
#include "tattr/derivatives.hpp"
#include "tattr/model_function.hpp"
#include "tattr/random.hpp"

namespace tattr {

/// a_i = f_{x_i}(x) * x_i.
AttributionResult gradient_x_input(const ModelFunction& f, const FeatureVector& x);

/// a_i = f(x) - f(x with x_i replaced by v); n+1 forward passes.
AttributionResult perturbation_1(const ModelFunction& f, const FeatureVector& x, double v = 0.0);

/// Every feature in patch p receives f(x) - f(x with patch p set to v);
/// one forward pass per patch.
AttributionResult perturbation_patch(const ModelFunction& f, const FeatureVector& x, const PatchSpec& patches,
                                     double v = 0.0);
AttributionResult perturbation_patch(const ModelFunction& f, const FeatureVector& x, const PatchSpec& patches,
                                     const FeatureVector& v);

/// Rescale-rule relevance propagation of f(x) - f(baseline) at output_index.
/// Near-zero layer denominators (|sum z - sum z~| < stabilizer_eps) fall back
/// to an equal split across the layer inputs; each such event is counted in
/// the result. Per-layer summation-to-delta holds either way. When given,
/// `layer_relevances` receives the relevance vector at every layer boundary,
/// output first.
AttributionResult deeplift_rescale(const Network& net, const FeatureVector& x, const FeatureVector& baseline,
                                   int output_index = 0, double stabilizer_eps = 1e-9,
                                   std::vector<FeatureVector>* layer_relevances = nullptr);

/// Epsilon-stabilized layerwise relevance propagation seeded with f(x) at
/// output_index: a_ij = z_ji / (pre_j + eps * sign(pre_j)) * a_j.
AttributionResult epsilon_lrp(const Network& net, const FeatureVector& x, double epsilon, int output_index = 0);

/// Riemann integrated gradients along the straight path from baseline to x:
/// a_i = (x_i - baseline_i) * (1/m) * sum_{k=1..m} df/dx_i at baseline + (k/m) * delta.
/// The right-endpoint sum is the default; midpoint = true uses (k - 1/2)/m.
AttributionResult integrated_gradients(const ModelFunction& f, const FeatureVector& x,
                                       const FeatureVector& baseline, int steps, bool midpoint = false);

/// Average path gradient a_i = (1/m) sum_k df/dx_i along the same path, i.e.
/// integrated gradients rescaled by 1/delta_i but computed directly, so a
/// zero displacement coordinate still gets a finite, well-defined score.
AttributionResult ig1(const ModelFunction& f, const FeatureVector& x, const FeatureVector& baseline, int steps,
                      bool midpoint = false);

/// Inclusive clamp range for sampled baselines (e.g. {0, 255} for pixel
/// models); sampling is unclipped unless one is supplied.
using ClipRange = std::optional<std::pair<double, double>>;

/// ig1 against a sampled baseline x - delta with delta ~ N(0, sigma^2 I)
/// drawn from the seeded stream; the sampled baseline is recorded.
AttributionResult ig2(const ModelFunction& f, const FeatureVector& x, double sigma, std::uint64_t seed,
                      int steps, bool midpoint = false, const ClipRange& clip = std::nullopt);

/// Average of J ig2-style evaluations whose displacements come from one
/// seeded stream, accumulated in draw order. J = 1 reproduces ig2 exactly.
AttributionResult ig3(const ModelFunction& f, const FeatureVector& x, double sigma, std::uint64_t seed, int J,
                      int steps, bool midpoint = false, const ClipRange& clip = std::nullopt);

/// Canonical method identifiers accepted by the CLI and the verifiers.
const std::vector<std::string>& attribution_method_names();

}  // namespace tattr
