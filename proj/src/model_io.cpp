#include "tattr/model_io.hpp"

#include <fstream>

#include <json.hpp>

namespace tattr {

using nlohmann::json;

std::string model_to_json_string(const Network& net) {
  json doc;
  doc["input_dim"] = net.input_dim();
  json layers = json::array();
  for (const DenseLayer& layer : net.layers()) {
    json jl;
    json rows = json::array();
    for (int r = 0; r < layer.weights.rows(); ++r) {
      json row = json::array();
      for (int c = 0; c < layer.weights.cols(); ++c) row.push_back(layer.weights(r, c));
      rows.push_back(std::move(row));
    }
    jl["weights"] = std::move(rows);
    json bias = json::array();
    for (int r = 0; r < layer.bias.size(); ++r) bias.push_back(layer.bias[r]);
    jl["bias"] = std::move(bias);
    jl["activation"] = to_string(layer.activation);
    layers.push_back(std::move(jl));
  }
  doc["layers"] = std::move(layers);
  return doc.dump(2);
}

namespace {

std::string allowed_kinds() {
  std::string s;
  for (const auto& name : activation_names()) {
    if (!s.empty()) s += ", ";
    s += name;
  }
  return s;
}

}  // namespace

Network model_from_json_string(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("model file: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("layers") || !doc["layers"].is_array())
    throw ParseError("model file: expected an object with a \"layers\" array");

  std::vector<DenseLayer> layers;
  int layer_index = 0;
  for (const json& jl : doc["layers"]) {
    const std::string where = "layer " + std::to_string(layer_index);
    if (!jl.contains("weights") || !jl["weights"].is_array() || jl["weights"].empty())
      throw ParseError("model file: " + where + " is missing a non-empty \"weights\" array");
    if (!jl.contains("bias") || !jl["bias"].is_array())
      throw ParseError("model file: " + where + " is missing a \"bias\" array");
    if (!jl.contains("activation") || !jl["activation"].is_string())
      throw ParseError("model file: " + where + " is missing an \"activation\" string");

    const auto& rows = jl["weights"];
    const std::size_t out_dim = rows.size();
    const std::size_t in_dim = rows[0].is_array() ? rows[0].size() : 0;
    if (in_dim == 0) throw ParseError("model file: " + where + " weight rows must be non-empty arrays");
    DenseLayer layer;
    layer.weights.resize(static_cast<int>(out_dim), static_cast<int>(in_dim));
    for (std::size_t r = 0; r < out_dim; ++r) {
      if (!rows[r].is_array() || rows[r].size() != in_dim)
        throw ValidationError("model file: " + where + " weight row " + std::to_string(r) +
                              " has inconsistent length");
      for (std::size_t c = 0; c < in_dim; ++c) {
        if (!rows[r][c].is_number())
          throw ParseError("model file: " + where + " weight (" + std::to_string(r) + "," + std::to_string(c) +
                           ") is not a number");
        layer.weights(static_cast<int>(r), static_cast<int>(c)) = rows[r][c].get<double>();
      }
    }
    const auto& bias = jl["bias"];
    if (bias.size() != out_dim)
      throw ValidationError("model file: " + where + " bias length " + std::to_string(bias.size()) +
                            " does not match " + std::to_string(out_dim) + " weight rows");
    layer.bias.resize(static_cast<int>(out_dim));
    for (std::size_t r = 0; r < out_dim; ++r) {
      if (!bias[r].is_number())
        throw ParseError("model file: " + where + " bias[" + std::to_string(r) + "] is not a number");
      layer.bias[static_cast<int>(r)] = bias[r].get<double>();
    }
    const std::string act = jl["activation"].get<std::string>();
    const auto kind = activation_from_string(act);
    if (!kind)
      throw ParseError("model file: " + where + " has unknown activation \"" + act + "\" (allowed: " +
                       allowed_kinds() + ")");
    layer.activation = *kind;
    layers.push_back(std::move(layer));
    ++layer_index;
  }
  Network net(std::move(layers));  // validates dimension chaining
  if (doc.contains("input_dim") && doc["input_dim"].is_number_integer() &&
      doc["input_dim"].get<int>() != net.input_dim())
    throw ValidationError("model file: declared input_dim " + std::to_string(doc["input_dim"].get<int>()) +
                          " does not match layer 0 input dim " + std::to_string(net.input_dim()));
  return net;
}

void save_model(const Network& net, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << model_to_json_string(net) << "\n";
  if (!out) throw IoError("failed writing " + path);
}

Network load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open model file " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return model_from_json_string(text);
}

}  // namespace tattr
