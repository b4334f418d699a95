#pragma once

#include <string>

#include "tattr/network.hpp"

namespace tattr {

/// Self-describing JSON model format (.model.json):
///   {"input_dim": n, "layers": [{"weights": [[row],...], "bias": [...],
///    "activation": "tanh"}, ...]}
/// Weight rows are output neurons. Doubles round-trip exactly, so
/// load(save(net)) reproduces the network bit for bit.
void save_model(const Network& net, const std::string& path);
Network load_model(const std::string& path);

std::string model_to_json_string(const Network& net);
Network model_from_json_string(const std::string& text);

}  // namespace tattr
