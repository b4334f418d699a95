#include "tattr/attribution.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace tattr {

using nlohmann::json;

json AttributionResult::to_json() const {
  json doc;
  doc["method"] = method;
  doc["baseline_info"] = baseline_info;
  json s = json::array();
  for (int i = 0; i < scores.size(); ++i) s.push_back(scores[i]);
  doc["scores"] = std::move(s);
  if (completeness_residual) doc["completeness_residual"] = *completeness_residual;
  if (stabilizer_events > 0) doc["stabilizer_events"] = stabilizer_events;
  if (!sampled_baselines.empty()) {
    json bs = json::array();
    for (const FeatureVector& b : sampled_baselines) {
      json jb = json::array();
      for (int i = 0; i < b.size(); ++i) jb.push_back(b[i]);
      bs.push_back(std::move(jb));
    }
    doc["sampled_baselines"] = std::move(bs);
  }
  return doc;
}

void PatchSpec::validate(int n) const {
  std::vector<int> seen(n, 0);
  for (std::size_t p = 0; p < patches.size(); ++p) {
    for (int i : patches[p]) {
      if (i < 0 || i >= n)
        throw ValidationError("patch " + std::to_string(p) + " references feature " + std::to_string(i) +
                              " outside [0, " + std::to_string(n) + ")");
      if (seen[i]++)
        throw ValidationError("patches overlap at feature " + std::to_string(i));
    }
  }
  for (int i = 0; i < n; ++i)
    if (!seen[i]) throw ValidationError("patches do not cover feature " + std::to_string(i));
}

PatchSpec PatchSpec::singletons(int n) {
  PatchSpec spec;
  spec.patches.reserve(n);
  for (int i = 0; i < n; ++i) spec.patches.push_back({i});
  return spec;
}

PatchSpec PatchSpec::grid(int height, int width, int patch_h, int patch_w) {
  if (height < 1 || width < 1 || patch_h < 1 || patch_w < 1)
    throw ParameterError("grid patch dimensions must be positive");
  PatchSpec spec;
  for (int r0 = 0; r0 < height; r0 += patch_h) {
    for (int c0 = 0; c0 < width; c0 += patch_w) {
      std::vector<int> cells;
      for (int r = r0; r < std::min(r0 + patch_h, height); ++r)
        for (int c = c0; c < std::min(c0 + patch_w, width); ++c) cells.push_back(r * width + c);
      spec.patches.push_back(std::move(cells));
    }
  }
  return spec;
}

int PatchSpec::patch_of(int i) const {
  for (std::size_t p = 0; p < patches.size(); ++p)
    for (int j : patches[p])
      if (j == i) return static_cast<int>(p);
  throw ValidationError("feature " + std::to_string(i) + " is not in any patch");
}

BaselineSpec BaselineSpec::constant_value(double v) {
  BaselineSpec spec;
  spec.kind = Kind::constant;
  spec.constant = v;
  return spec;
}

BaselineSpec BaselineSpec::explicit_vector_of(FeatureVector v) {
  BaselineSpec spec;
  spec.kind = Kind::explicit_vector;
  spec.vector = std::move(v);
  return spec;
}

BaselineSpec BaselineSpec::gaussian_delta(double sigma, std::uint64_t seed) {
  if (sigma <= 0.0) throw ParameterError("gaussian baseline sigma must be > 0");
  BaselineSpec spec;
  spec.kind = Kind::gaussian_delta;
  spec.sigma = sigma;
  spec.seed = seed;
  return spec;
}

BaselineSpec BaselineSpec::gaussian_multi(double sigma, std::uint64_t seed, int count) {
  if (sigma <= 0.0) throw ParameterError("gaussian baseline sigma must be > 0");
  if (count < 1) throw ParameterError("baseline count must be >= 1");
  BaselineSpec spec;
  spec.kind = Kind::gaussian_multi;
  spec.sigma = sigma;
  spec.seed = seed;
  spec.num_baselines = count;
  return spec;
}

FeatureVector BaselineSpec::materialize(int n) const {
  switch (kind) {
    case Kind::zero:
      return FeatureVector::Zero(n);
    case Kind::constant:
      return FeatureVector::Constant(n, constant);
    case Kind::explicit_vector:
      if (vector.size() != n)
        throw ShapeError("explicit baseline has length " + std::to_string(vector.size()) + ", expected " +
                         std::to_string(n));
      return vector;
    default:
      throw ParameterError("sampled baseline kinds are consumed by ig2/ig3, not materialized");
  }
}

std::string BaselineSpec::describe() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::zero:
      return "zero baseline";
    case Kind::constant:
      os << "constant baseline " << constant;
      return os.str();
    case Kind::explicit_vector:
      return "explicit baseline vector";
    case Kind::gaussian_delta:
      os << "gaussian displacement, sigma=" << sigma << ", seed=" << seed;
      return os.str();
    case Kind::gaussian_multi:
      os << "gaussian displacements, sigma=" << sigma << ", seed=" << seed << ", J=" << num_baselines;
      return os.str();
  }
  return "?";
}

// --- methods -----------------------------------------------------------------

AttributionResult gradient_x_input(const ModelFunction& f, const FeatureVector& x) {
  AttributionResult result;
  result.scores = gradient(f, x).cwiseProduct(x);
  result.method = "gradient_x_input";
  result.baseline_info = "implicit zero baseline";
  return result;
}

AttributionResult perturbation_1(const ModelFunction& f, const FeatureVector& x, double v) {
  const double fx = f(x);
  FeatureVector scores(x.size());
  FeatureVector perturbed = x;
  for (int i = 0; i < x.size(); ++i) {
    perturbed[i] = v;
    scores[i] = fx - f(perturbed);
    perturbed[i] = x[i];
  }
  AttributionResult result;
  result.scores = std::move(scores);
  result.method = "perturbation_1";
  std::ostringstream os;
  os << "single-feature substitution v=" << v;
  result.baseline_info = os.str();
  return result;
}

AttributionResult perturbation_patch(const ModelFunction& f, const FeatureVector& x, const PatchSpec& patches,
                                     const FeatureVector& v) {
  const int n = static_cast<int>(x.size());
  if (v.size() != n) throw ShapeError("perturbation vector length does not match input");
  patches.validate(n);
  const double fx = f(x);
  FeatureVector scores = FeatureVector::Zero(n);
  for (const std::vector<int>& patch : patches.patches) {
    FeatureVector perturbed = x;
    for (int i : patch) perturbed[i] = v[i];
    const double diff = fx - f(perturbed);
    for (int i : patch) scores[i] = diff;
  }
  AttributionResult result;
  result.scores = std::move(scores);
  result.method = "perturbation_patch";
  result.baseline_info = "patch substitution over " + std::to_string(patches.count()) + " patches";
  return result;
}

AttributionResult perturbation_patch(const ModelFunction& f, const FeatureVector& x, const PatchSpec& patches,
                                     double v) {
  return perturbation_patch(f, x, patches, FeatureVector::Constant(x.size(), v));
}

AttributionResult deeplift_rescale(const Network& net, const FeatureVector& x, const FeatureVector& baseline,
                                   int output_index, double stabilizer_eps,
                                   std::vector<FeatureVector>* layer_relevances) {
  if (x.size() != baseline.size()) throw ShapeError("input and baseline lengths differ");
  if (output_index < 0 || output_index >= net.output_dim())
    throw ParameterError("output index " + std::to_string(output_index) + " out of range");

  Network::Trace tx, tb;
  const double fx = net.forward(x, &tx)[output_index];
  const double fb = net.forward(baseline, &tb)[output_index];

  const auto& layers = net.layers();
  Eigen::VectorXd relevance = Eigen::VectorXd::Zero(net.output_dim());
  relevance[output_index] = fx - fb;
  int stabilized = 0;
  if (layer_relevances != nullptr) {
    layer_relevances->clear();
    layer_relevances->push_back(relevance);
  }

  for (int l = static_cast<int>(layers.size()) - 1; l >= 0; --l) {
    const DenseLayer& layer = layers[l];
    const FeatureVector& in_x = tx.layer_inputs[l];
    const FeatureVector& in_b = tb.layer_inputs[l];
    Eigen::VectorXd next = Eigen::VectorXd::Zero(layer.in_dim());
    for (int j = 0; j < layer.out_dim(); ++j) {
      // sum_i z_ji - sum_i z~_ji equals the pre-activation difference net of bias.
      const double denom =
          (tx.pre_activations[l][j] - layer.bias[j]) - (tb.pre_activations[l][j] - layer.bias[j]);
      if (std::abs(denom) < stabilizer_eps) {
        // Division would amplify noise (or hit 0/0); fall back to an equal
        // split, which keeps per-layer conservation intact.
        ++stabilized;
        const double share = relevance[j] / layer.in_dim();
        for (int i = 0; i < layer.in_dim(); ++i) next[i] += share;
        continue;
      }
      if (relevance[j] == 0.0) continue;
      for (int i = 0; i < layer.in_dim(); ++i) {
        const double dz = layer.weights(j, i) * (in_x[i] - in_b[i]);
        next[i] += dz / denom * relevance[j];
      }
    }
    relevance = std::move(next);
    if (layer_relevances != nullptr) layer_relevances->push_back(relevance);
  }

  AttributionResult result;
  result.scores = std::move(relevance);
  result.method = "deeplift_rescale";
  result.baseline_info = "explicit baseline, rescale rule";
  result.completeness_residual = result.scores.sum() - (fx - fb);
  result.stabilizer_events = stabilized;
  return result;
}

AttributionResult epsilon_lrp(const Network& net, const FeatureVector& x, double epsilon, int output_index) {
  if (epsilon <= 0.0) throw ParameterError("lrp epsilon must be > 0");
  if (output_index < 0 || output_index >= net.output_dim())
    throw ParameterError("output index " + std::to_string(output_index) + " out of range");

  Network::Trace trace;
  const double fx = net.forward(x, &trace)[output_index];
  const auto& layers = net.layers();
  Eigen::VectorXd relevance = Eigen::VectorXd::Zero(net.output_dim());
  relevance[output_index] = fx;

  for (int l = static_cast<int>(layers.size()) - 1; l >= 0; --l) {
    const DenseLayer& layer = layers[l];
    const FeatureVector& in_x = trace.layer_inputs[l];
    Eigen::VectorXd next = Eigen::VectorXd::Zero(layer.in_dim());
    for (int j = 0; j < layer.out_dim(); ++j) {
      if (relevance[j] == 0.0) continue;
      const double pre = trace.pre_activations[l][j];
      const double denom = pre + epsilon * (pre >= 0.0 ? 1.0 : -1.0);
      for (int i = 0; i < layer.in_dim(); ++i) {
        const double z = layer.weights(j, i) * in_x[i];
        next[i] += z / denom * relevance[j];
      }
    }
    relevance = std::move(next);
  }

  AttributionResult result;
  result.scores = std::move(relevance);
  result.method = "epsilon_lrp";
  std::ostringstream os;
  os << "epsilon rule, epsilon=" << epsilon;
  result.baseline_info = os.str();
  return result;
}

namespace {

// Mean path gradient over the straight line baseline -> x.
FeatureVector mean_path_gradient(const ModelFunction& f, const FeatureVector& x, const FeatureVector& baseline,
                                 int steps, bool midpoint) {
  if (steps < 1) throw ParameterError("integration steps must be >= 1");
  const FeatureVector delta = x - baseline;
  FeatureVector acc = FeatureVector::Zero(x.size());
  for (int k = 1; k <= steps; ++k) {
    const double alpha = midpoint ? (k - 0.5) / steps : static_cast<double>(k) / steps;
    acc += gradient(f, baseline + alpha * delta);
  }
  return acc / static_cast<double>(steps);
}

}  // namespace

AttributionResult integrated_gradients(const ModelFunction& f, const FeatureVector& x,
                                       const FeatureVector& baseline, int steps, bool midpoint) {
  if (x.size() != baseline.size()) throw ShapeError("input and baseline lengths differ");
  AttributionResult result;
  result.scores = (x - baseline).cwiseProduct(mean_path_gradient(f, x, baseline, steps, midpoint));
  result.method = "integrated_gradients";
  std::ostringstream os;
  os << (midpoint ? "midpoint" : "right-endpoint") << " riemann, m=" << steps;
  result.baseline_info = os.str();
  result.completeness_residual = result.scores.sum() - (f(x) - f(baseline));
  return result;
}

AttributionResult ig1(const ModelFunction& f, const FeatureVector& x, const FeatureVector& baseline, int steps,
                      bool midpoint) {
  if (x.size() != baseline.size()) throw ShapeError("input and baseline lengths differ");
  AttributionResult result;
  result.scores = mean_path_gradient(f, x, baseline, steps, midpoint);
  result.method = "ig1";
  std::ostringstream os;
  os << "average path gradient, " << (midpoint ? "midpoint" : "right-endpoint") << " riemann, m=" << steps;
  result.baseline_info = os.str();
  return result;
}

namespace {

FeatureVector sample_baseline(const FeatureVector& x, double sigma, RngState& rng, const ClipRange& clip) {
  FeatureVector baseline = x - sample_gaussian_vector(rng, {0.0, sigma}, static_cast<int>(x.size()));
  if (clip) {
    if (clip->first > clip->second) throw ParameterError("baseline clip range is inverted");
    baseline = baseline.cwiseMax(clip->first).cwiseMin(clip->second);
  }
  return baseline;
}

std::string clip_note(const ClipRange& clip) {
  if (!clip) return "";
  std::ostringstream os;
  os << ", clipped to [" << clip->first << ", " << clip->second << "]";
  return os.str();
}

}  // namespace

AttributionResult ig2(const ModelFunction& f, const FeatureVector& x, double sigma, std::uint64_t seed,
                      int steps, bool midpoint, const ClipRange& clip) {
  if (sigma <= 0.0) throw ParameterError("ig2 sigma must be > 0");
  RngState rng{seed, 0};
  const FeatureVector baseline = sample_baseline(x, sigma, rng, clip);
  AttributionResult result;
  result.scores = mean_path_gradient(f, x, baseline, steps, midpoint);
  result.method = "ig2";
  result.baseline_info = BaselineSpec::gaussian_delta(sigma, seed).describe() + clip_note(clip);
  result.sampled_baselines.push_back(baseline);
  return result;
}

AttributionResult ig3(const ModelFunction& f, const FeatureVector& x, double sigma, std::uint64_t seed, int J,
                      int steps, bool midpoint, const ClipRange& clip) {
  if (sigma <= 0.0) throw ParameterError("ig3 sigma must be > 0");
  if (J < 1) throw ParameterError("ig3 needs at least one baseline");
  RngState rng{seed, 0};
  AttributionResult result;
  result.scores = FeatureVector::Zero(x.size());
  result.sampled_baselines.reserve(J);
  // Fixed draw-and-accumulate order keeps the result bit-reproducible.
  for (int j = 0; j < J; ++j) {
    const FeatureVector baseline = sample_baseline(x, sigma, rng, clip);
    result.scores += mean_path_gradient(f, x, baseline, steps, midpoint);
    result.sampled_baselines.push_back(baseline);
  }
  result.scores /= static_cast<double>(J);
  result.method = "ig3";
  result.baseline_info = BaselineSpec::gaussian_multi(sigma, seed, J).describe() + clip_note(clip);
  return result;
}

const std::vector<std::string>& attribution_method_names() {
  static const std::vector<std::string> names = {
      "gradient_x_input", "perturbation_1", "perturbation_patch", "deeplift_rescale", "epsilon_lrp",
      "integrated_gradients", "ig1", "ig2", "ig3", "exact_ig"};
  return names;
}

}  // namespace tattr
