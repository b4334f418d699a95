#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "tattr/dual.hpp"
#include "tattr/error.hpp"

namespace tattr {

/// Pointwise layer activations. `square` (u -> u^2) exists so that networks
/// can be exact finite-degree polynomials, which makes every Taylor identity
/// checkable without truncation error.
enum class Activation { identity, relu, tanh, sigmoid, softplus, square };

inline const char* to_string(Activation a) {
  switch (a) {
    case Activation::identity: return "identity";
    case Activation::relu: return "relu";
    case Activation::tanh: return "tanh";
    case Activation::sigmoid: return "sigmoid";
    case Activation::softplus: return "softplus";
    case Activation::square: return "square";
  }
  return "?";
}

inline const std::vector<std::string>& activation_names() {
  static const std::vector<std::string> names = {"identity", "relu", "tanh", "sigmoid", "softplus", "square"};
  return names;
}

inline std::optional<Activation> activation_from_string(const std::string& s) {
  if (s == "identity") return Activation::identity;
  if (s == "relu") return Activation::relu;
  if (s == "tanh") return Activation::tanh;
  if (s == "sigmoid") return Activation::sigmoid;
  if (s == "softplus") return Activation::softplus;
  if (s == "square") return Activation::square;
  return std::nullopt;
}

/// True for activations that are C^inf everywhere (everything except relu).
inline bool is_smooth(Activation a) { return a != Activation::relu; }

/// Side channel for non-smooth evaluation events.
struct EvalFlags {
  bool relu_kink = false;  // some relu saw a pre-activation of exactly 0
};

/// Applies the activation to any scalar type in the dual tower. relu at an
/// exact kink uses the subgradient-0 convention and raises the flag.
template <class S>
S apply_activation(Activation kind, const S& u, EvalFlags* flags = nullptr) {
  using std::exp;
  using std::log1p;
  using std::tanh;
  switch (kind) {
    case Activation::identity:
      return u;
    case Activation::relu: {
      const double v = value_of(u);
      if (v > 0.0) return u;
      if (v == 0.0 && flags != nullptr) flags->relu_kink = true;
      return S(0.0);
    }
    case Activation::tanh:
      return tanh(u);
    case Activation::sigmoid: {
      // Branch on the value part for overflow safety.
      if (value_of(u) >= 0.0) {
        const S e = exp(-u);
        return 1.0 / (1.0 + e);
      }
      const S e = exp(u);
      return e / (1.0 + e);
    }
    case Activation::softplus: {
      if (value_of(u) > 0.0) return u + log1p(exp(-u));
      return log1p(exp(u));
    }
    case Activation::square:
      return u * u;
  }
  return S(0.0);
}

inline double activation_value(Activation kind, double u, EvalFlags* flags = nullptr) {
  return apply_activation<double>(kind, u, flags);
}

/// d/du of the activation at u (doubles only; used by the reverse sweep).
inline double activation_derivative(Activation kind, double u, EvalFlags* flags = nullptr) {
  switch (kind) {
    case Activation::identity:
      return 1.0;
    case Activation::relu:
      if (u == 0.0 && flags != nullptr) flags->relu_kink = true;
      return u > 0.0 ? 1.0 : 0.0;
    case Activation::tanh: {
      const double t = std::tanh(u);
      return 1.0 - t * t;
    }
    case Activation::sigmoid: {
      const double s = activation_value(Activation::sigmoid, u);
      return s * (1.0 - s);
    }
    case Activation::softplus:
      return activation_value(Activation::sigmoid, u);
    case Activation::square:
      return 2.0 * u;
  }
  return 0.0;
}

}  // namespace tattr
