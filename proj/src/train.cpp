#include "tattr/train.hpp"

#include <cmath>

namespace tattr {

Network make_dense_network(const std::vector<int>& sizes, RngState& rng, double init_sigma, Activation hidden,
                           Activation output) {
  if (sizes.size() < 2) throw ParameterError("architecture needs at least [input, output] sizes");
  std::vector<DenseLayer> layers;
  for (std::size_t l = 1; l < sizes.size(); ++l) {
    DenseLayer layer;
    layer.weights.resize(sizes[l], sizes[l - 1]);
    for (int r = 0; r < layer.weights.rows(); ++r)
      for (int c = 0; c < layer.weights.cols(); ++c) layer.weights(r, c) = init_sigma * next_gaussian(rng);
    layer.bias = Eigen::VectorXd::Zero(sizes[l]);
    layer.activation = (l + 1 == sizes.size()) ? output : hidden;
    layers.push_back(std::move(layer));
  }
  return Network(std::move(layers));
}

namespace {

double sigmoid(double u) { return activation_value(Activation::sigmoid, u); }

// Logistic loss of the logit against label y in {0,1}, computed stably.
double logistic_loss(double logit, int y) {
  const double margin = (y == 1) ? logit : -logit;
  return margin > 0.0 ? std::log1p(std::exp(-margin)) : -margin + std::log1p(std::exp(margin));
}

}  // namespace

Network train_toy_classifier(const std::vector<LabeledSample>& dataset, const std::vector<int>& arch,
                             RngState rng, int epochs, double lr) {
  if (dataset.empty()) throw ParameterError("training dataset is empty");
  for (const auto& [x, y] : dataset)
    if (y != 0 && y != 1) throw ParameterError("labels must be 0 or 1, got " + std::to_string(y));
  if (arch.size() < 2 || arch.back() != 1)
    throw ParameterError("toy classifier architecture must end in a single logit");

  Network net = make_dense_network(arch, rng);
  auto& layers = net.mutable_layers();
  const int depth = static_cast<int>(layers.size());

  for (int epoch = 0; epoch < epochs; ++epoch) {
    double epoch_loss = 0.0;
    for (const auto& [x, y] : dataset) {
      Network::Trace trace;
      const FeatureVector out = net.forward(x, &trace);
      const double logit = out[0];
      epoch_loss += logistic_loss(logit, y);

      // Backprop of dL/dlogit = sigmoid(logit) - y through the layers.
      Eigen::VectorXd grad_out(1);
      grad_out[0] = sigmoid(logit) - static_cast<double>(y);
      for (int l = depth - 1; l >= 0; --l) {
        const FeatureVector& z = trace.pre_activations[l];
        Eigen::VectorXd delta(z.size());
        for (int j = 0; j < z.size(); ++j) delta[j] = grad_out[j] * activation_derivative(layers[l].activation, z[j]);
        grad_out = layers[l].weights.transpose() * delta;
        layers[l].weights.noalias() -= lr * delta * trace.layer_inputs[l].transpose();
        layers[l].bias -= lr * delta;
      }
    }
    if (!std::isfinite(epoch_loss)) throw TrainingError("training loss diverged", epoch);
  }
  return net;
}

double classification_accuracy(const Network& net, const std::vector<LabeledSample>& dataset) {
  if (dataset.empty()) return 0.0;
  int hits = 0;
  for (const auto& [x, y] : dataset) {
    const double logit = net.forward(x)[0];
    hits += ((logit > 0.0) == (y == 1));
  }
  return static_cast<double>(hits) / static_cast<double>(dataset.size());
}

}  // namespace tattr
