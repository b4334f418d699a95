#include "tattr/network.hpp"

namespace tattr {

Network::Network(std::vector<DenseLayer> layers) : layers_(std::move(layers)) { validate(); }

void Network::validate() const {
  if (layers_.empty()) throw ValidationError("network has no layers");
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const DenseLayer& layer = layers_[l];
    if (layer.bias.size() != layer.weights.rows())
      throw ValidationError("layer " + std::to_string(l) + ": bias length " + std::to_string(layer.bias.size()) +
                            " does not match weight rows " + std::to_string(layer.weights.rows()));
    if (l > 0 && layers_[l - 1].out_dim() != layer.in_dim())
      throw ValidationError("layer " + std::to_string(l) + ": input dim " + std::to_string(layer.in_dim()) +
                            " does not match previous output dim " + std::to_string(layers_[l - 1].out_dim()));
    if (!layer.weights.allFinite() || !layer.bias.allFinite())
      throw ValidationError("layer " + std::to_string(l) + ": non-finite parameter");
  }
}

FeatureVector Network::forward(const FeatureVector& x, Trace* trace, EvalFlags* flags) const {
  if (x.size() != input_dim())
    throw ShapeError("network expects input of length " + std::to_string(input_dim()) + ", got " +
                     std::to_string(x.size()));
  FeatureVector a = x;
  if (trace != nullptr) {
    trace->layer_inputs.clear();
    trace->pre_activations.clear();
  }
  for (const DenseLayer& layer : layers_) {
    const FeatureVector z = layer.weights * a + layer.bias;
    if (trace != nullptr) {
      trace->layer_inputs.push_back(a);
      trace->pre_activations.push_back(z);
    }
    a.resize(z.size());
    for (int j = 0; j < z.size(); ++j) a[j] = activation_value(layer.activation, z[j], flags);
  }
  if (trace != nullptr) trace->output = a;
  return a;
}

bool Network::operator==(const Network& other) const {
  if (layers_.size() != other.layers_.size()) return false;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const DenseLayer& a = layers_[l];
    const DenseLayer& b = other.layers_[l];
    if (a.activation != b.activation) return false;
    if (a.weights.rows() != b.weights.rows() || a.weights.cols() != b.weights.cols()) return false;
    if (a.weights != b.weights || a.bias != b.bias) return false;
  }
  return true;
}

FeatureVector input_gradient(const Network& net, const FeatureVector& x, int output_index, EvalFlags* flags) {
  if (output_index < 0 || output_index >= net.output_dim())
    throw ParameterError("output index " + std::to_string(output_index) + " out of range");
  Network::Trace trace;
  net.forward(x, &trace, flags);
  const auto& layers = net.layers();
  Eigen::VectorXd g = Eigen::VectorXd::Zero(net.output_dim());
  g[output_index] = 1.0;
  for (int l = static_cast<int>(layers.size()) - 1; l >= 0; --l) {
    const FeatureVector& z = trace.pre_activations[l];
    Eigen::VectorXd local(z.size());
    for (int j = 0; j < z.size(); ++j) local[j] = activation_derivative(layers[l].activation, z[j], flags);
    g = layers[l].weights.transpose() * (g.cwiseProduct(local)).eval();
  }
  return g;
}

}  // namespace tattr
