#pragma once

#include <Eigen/Core>
#include <cmath>
#include <vector>

#include "tattr/types.hpp"

namespace tattr {

/// Truncated first-order jet a + eps*b with eps^2 = 0. Nesting the template
/// (Dual<Dual<double>>, ...) yields a hyper-dual tower: the coefficient of
/// eps_1*...*eps_k after seeding k directions is the exact mixed partial of
/// order k, to machine precision.
template <typename T>
struct Dual {
  T a{};  // value part
  T b{};  // infinitesimal coefficient

  Dual() = default;
  Dual(double v) : a(v), b(0.0) {}  // NOLINT: intentionally implicit, mirrors scalar literals
  Dual(T value, T deriv) : a(std::move(value)), b(std::move(deriv)) {}
};

inline double value_of(double x) { return x; }
template <typename T>
double value_of(const Dual<T>& d) {
  return value_of(d.a);
}

// --- arithmetic -------------------------------------------------------------

template <typename T>
Dual<T> operator+(const Dual<T>& x, const Dual<T>& y) {
  return {x.a + y.a, x.b + y.b};
}
template <typename T>
Dual<T> operator-(const Dual<T>& x, const Dual<T>& y) {
  return {x.a - y.a, x.b - y.b};
}
template <typename T>
Dual<T> operator*(const Dual<T>& x, const Dual<T>& y) {
  return {x.a * y.a, x.a * y.b + x.b * y.a};
}
template <typename T>
Dual<T> operator/(const Dual<T>& x, const Dual<T>& y) {
  return {x.a / y.a, (x.b * y.a - x.a * y.b) / (y.a * y.a)};
}
template <typename T>
Dual<T> operator-(const Dual<T>& x) {
  return {-x.a, -x.b};
}
template <typename T>
Dual<T> operator+(const Dual<T>& x) {
  return x;
}

template <typename T>
Dual<T> operator+(const Dual<T>& x, double s) {
  return {x.a + s, x.b};
}
template <typename T>
Dual<T> operator+(double s, const Dual<T>& x) {
  return x + s;
}
template <typename T>
Dual<T> operator-(const Dual<T>& x, double s) {
  return {x.a - s, x.b};
}
template <typename T>
Dual<T> operator-(double s, const Dual<T>& x) {
  return {s - x.a, -x.b};
}
template <typename T>
Dual<T> operator*(const Dual<T>& x, double s) {
  return {x.a * s, x.b * s};
}
template <typename T>
Dual<T> operator*(double s, const Dual<T>& x) {
  return x * s;
}
template <typename T>
Dual<T> operator/(const Dual<T>& x, double s) {
  return {x.a / s, x.b / s};
}
template <typename T>
Dual<T> operator/(double s, const Dual<T>& x) {
  return Dual<T>(s) / x;
}

template <typename T>
Dual<T>& operator+=(Dual<T>& x, const Dual<T>& y) {
  x = x + y;
  return x;
}
template <typename T>
Dual<T>& operator-=(Dual<T>& x, const Dual<T>& y) {
  x = x - y;
  return x;
}
template <typename T>
Dual<T>& operator*=(Dual<T>& x, const Dual<T>& y) {
  x = x * y;
  return x;
}
template <typename T>
Dual<T>& operator/=(Dual<T>& x, const Dual<T>& y) {
  x = x / y;
  return x;
}

// Comparisons act on the value part, which is what branching code means.
template <typename T>
bool operator<(const Dual<T>& x, const Dual<T>& y) {
  return value_of(x) < value_of(y);
}
template <typename T>
bool operator>(const Dual<T>& x, const Dual<T>& y) {
  return value_of(x) > value_of(y);
}
template <typename T>
bool operator<=(const Dual<T>& x, const Dual<T>& y) {
  return value_of(x) <= value_of(y);
}
template <typename T>
bool operator>=(const Dual<T>& x, const Dual<T>& y) {
  return value_of(x) >= value_of(y);
}
template <typename T>
bool operator==(const Dual<T>& x, const Dual<T>& y) {
  return value_of(x) == value_of(y);
}
template <typename T>
bool operator!=(const Dual<T>& x, const Dual<T>& y) {
  return value_of(x) != value_of(y);
}

// --- elementary functions ----------------------------------------------------

template <typename T>
Dual<T> exp(const Dual<T>& x) {
  using std::exp;
  const T e = exp(x.a);
  return {e, x.b * e};
}

template <typename T>
Dual<T> log(const Dual<T>& x) {
  using std::log;
  return {log(x.a), x.b / x.a};
}

template <typename T>
Dual<T> log1p(const Dual<T>& x) {
  using std::log1p;
  return {log1p(x.a), x.b / (1.0 + x.a)};
}

template <typename T>
Dual<T> tanh(const Dual<T>& x) {
  using std::tanh;
  const T t = tanh(x.a);
  return {t, x.b * (1.0 - t * t)};
}

template <typename T>
Dual<T> sqrt(const Dual<T>& x) {
  using std::sqrt;
  const T r = sqrt(x.a);
  return {r, x.b / (2.0 * r)};
}

template <typename T>
Dual<T> abs(const Dual<T>& x) {
  return value_of(x) < 0.0 ? -x : x;
}

/// Integer power by repeated squaring; works for any scalar with * defined.
template <typename S>
S pow_int(S base, int e) {
  S r(1.0);
  while (e > 0) {
    if (e & 1) r = r * base;
    e >>= 1;
    if (e) base = base * base;
  }
  return r;
}

// --- tower construction -------------------------------------------------------

template <int Order>
struct DualTowerT {
  using type = Dual<typename DualTowerT<Order - 1>::type>;
};
template <>
struct DualTowerT<0> {
  using type = double;
};
template <int Order>
using DualTower = typename DualTowerT<Order>::type;

/// Seeds variable `var` with value `v` for a derivative in the directions
/// `dirs` (dirs[l] is the variable differentiated at tower level l+1).
template <int Order>
DualTower<Order> seed_variable(double v, const std::vector<int>& dirs, int var) {
  if constexpr (Order == 0) {
    (void)dirs;
    (void)var;
    return v;
  } else {
    DualTower<Order> r;
    r.a = seed_variable<Order - 1>(v, dirs, var);
    r.b = DualTower<Order - 1>(dirs[Order - 1] == var ? 1.0 : 0.0);
    return r;
  }
}

inline double top_coefficient(double x) { return x; }
template <typename T>
double top_coefficient(const Dual<T>& d) {
  return top_coefficient(d.b);
}

template <int Order>
VectorX<DualTower<Order>> seed_input(const FeatureVector& x, const std::vector<int>& dirs) {
  VectorX<DualTower<Order>> v(x.size());
  for (int j = 0; j < x.size(); ++j) v[j] = seed_variable<Order>(x[j], dirs, j);
  return v;
}

}  // namespace tattr

// Eigen scalar-type registration so Matrix<Dual<...>> works like any dense type.
namespace Eigen {

template <typename T>
struct NumTraits<tattr::Dual<T>> : NumTraits<double> {
  using Real = tattr::Dual<T>;
  using NonInteger = tattr::Dual<T>;
  using Nested = tattr::Dual<T>;
  using Literal = double;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 2 * NumTraits<T>::ReadCost,
    AddCost = 2 * NumTraits<T>::AddCost,
    MulCost = 3 * NumTraits<T>::MulCost,
  };
  static Real epsilon() { return Real(NumTraits<double>::epsilon()); }
  static Real dummy_precision() { return Real(NumTraits<double>::dummy_precision()); }
  static int digits10() { return NumTraits<double>::digits10(); }
};

template <typename T, typename BinaryOp>
struct ScalarBinaryOpTraits<tattr::Dual<T>, double, BinaryOp> {
  using ReturnType = tattr::Dual<T>;
};
template <typename T, typename BinaryOp>
struct ScalarBinaryOpTraits<double, tattr::Dual<T>, BinaryOp> {
  using ReturnType = tattr::Dual<T>;
};

}  // namespace Eigen
