#pragma once

#include <string>
#include <vector>

#include "tattr/activation.hpp"
#include "tattr/error.hpp"
#include "tattr/types.hpp"

namespace tattr {

struct DenseLayer {
  Eigen::MatrixXd weights;  // out_dim x in_dim
  Eigen::VectorXd bias;     // out_dim
  Activation activation = Activation::identity;

  int in_dim() const { return static_cast<int>(weights.cols()); }
  int out_dim() const { return static_cast<int>(weights.rows()); }
};

/// Feed-forward dense network; immutable after construction, forward is pure.
class Network {
 public:
  Network() = default;
  explicit Network(std::vector<DenseLayer> layers);

  int input_dim() const { return layers_.empty() ? 0 : layers_.front().in_dim(); }
  int output_dim() const { return layers_.empty() ? 0 : layers_.back().out_dim(); }
  const std::vector<DenseLayer>& layers() const { return layers_; }
  std::vector<DenseLayer>& mutable_layers() { return layers_; }

  /// Dimension chaining and finiteness; throws ValidationError naming the layer.
  void validate() const;

  /// Per-layer record of a forward pass, for relevance-propagation rules.
  struct Trace {
    std::vector<FeatureVector> layer_inputs;     // x^(l), one per layer
    std::vector<FeatureVector> pre_activations;  // W x^(l) + b
    FeatureVector output;
  };

  FeatureVector forward(const FeatureVector& x, Trace* trace = nullptr, EvalFlags* flags = nullptr) const;

  /// Scalar-generic forward pass; instantiate with a dual tower for exact
  /// derivatives of any order.
  template <class Scalar>
  VectorX<Scalar> forward_eval(const VectorX<Scalar>& x, EvalFlags* flags = nullptr) const {
    if (x.size() != input_dim())
      throw ShapeError("network expects input of length " + std::to_string(input_dim()) + ", got " +
                       std::to_string(x.size()));
    VectorX<Scalar> a = x;
    for (const DenseLayer& layer : layers_) {
      VectorX<Scalar> z = layer.weights.template cast<Scalar>() * a + layer.bias.template cast<Scalar>();
      a.resize(z.size());
      for (int j = 0; j < z.size(); ++j) a[j] = apply_activation<Scalar>(layer.activation, z[j], flags);
    }
    return a;
  }

  bool operator==(const Network& other) const;

 private:
  std::vector<DenseLayer> layers_;
};

/// Exact gradient of output `output_index` w.r.t. the input, by a reverse
/// sweep over the recorded forward pass.
FeatureVector input_gradient(const Network& net, const FeatureVector& x, int output_index,
                             EvalFlags* flags = nullptr);

}  // namespace tattr
