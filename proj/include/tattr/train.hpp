#pragma once

#include <utility>
#include <vector>

#include "tattr/network.hpp"
#include "tattr/random.hpp"

namespace tattr {

using LabeledSample = std::pair<FeatureVector, int>;  // label in {0, 1}

/// Dense network with the given layer sizes [in, h1, ..., out]. Hidden layers
/// use tanh; the final layer is an identity logit. Weights are initialized
/// N(0, init_sigma^2) from the seeded stream, biases start at zero.
Network make_dense_network(const std::vector<int>& sizes, RngState& rng, double init_sigma = 0.1,
                           Activation hidden = Activation::tanh, Activation output = Activation::identity);

/// Plain SGD on the logistic loss over the single output logit; one update
/// per sample, samples visited in dataset order. Deterministic given the
/// seed. epochs == 0 returns the freshly initialized network unchanged.
/// Throws TrainingError (with the epoch) if the loss goes non-finite.
Network train_toy_classifier(const std::vector<LabeledSample>& dataset, const std::vector<int>& arch,
                             RngState rng, int epochs, double lr);

/// Fraction of samples with (logit > 0) == label.
double classification_accuracy(const Network& net, const std::vector<LabeledSample>& dataset);

}  // namespace tattr
