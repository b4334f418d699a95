#pragma once

#include <variant>

#include "tattr/network.hpp"
#include "tattr/polynomial.hpp"

namespace tattr {

/// One network output coordinate, viewed as a scalar function of the input.
/// The explained output is a pre-softmax logit selected by index.
struct NetworkOutput {
  Network net;
  int output_index = 0;
};

/// Scalar-valued differentiable model: either a network logit or an exact
/// polynomial. Evaluation is pure and deterministic; the scalar-generic
/// eval() is what the dual-tower derivative machinery drives.
class ModelFunction {
 public:
  ModelFunction(Network net, int output_index) : impl_(NetworkOutput{std::move(net), output_index}) {
    const auto& no = std::get<NetworkOutput>(impl_);
    if (output_index < 0 || output_index >= no.net.output_dim())
      throw ParameterError("output index " + std::to_string(output_index) + " out of range for network with " +
                           std::to_string(no.net.output_dim()) + " outputs");
  }
  explicit ModelFunction(Polynomial p) : impl_(std::move(p)) {}

  int dim() const {
    if (const auto* no = std::get_if<NetworkOutput>(&impl_)) return no->net.input_dim();
    return std::get<Polynomial>(impl_).var_count();
  }

  template <class Scalar>
  Scalar eval(const VectorX<Scalar>& x, EvalFlags* flags = nullptr) const {
    if (const auto* no = std::get_if<NetworkOutput>(&impl_))
      return no->net.forward_eval<Scalar>(x, flags)[no->output_index];
    return std::get<Polynomial>(impl_).eval<Scalar>(x);
  }

  double operator()(const FeatureVector& x) const { return eval<double>(x); }

  bool is_polynomial() const { return std::holds_alternative<Polynomial>(impl_); }
  const Polynomial* polynomial() const { return std::get_if<Polynomial>(&impl_); }
  const NetworkOutput* network() const { return std::get_if<NetworkOutput>(&impl_); }

 private:
  std::variant<NetworkOutput, Polynomial> impl_;
};

}  // namespace tattr
