#include "tattr/derivatives.hpp"

namespace tattr {

namespace {

template <int Order>
double tower_partial(const ModelFunction& f, const FeatureVector& x, const std::vector<int>& dirs,
                     EvalFlags* flags) {
  const auto seeded = seed_input<Order>(x, dirs);
  return top_coefficient(f.eval<DualTower<Order>>(seeded, flags));
}

}  // namespace

double partial_derivative(const ModelFunction& f, const FeatureVector& x, const MultiIndex& kappa,
                          EvalFlags* flags) {
  if (kappa.size() != x.size()) throw ShapeError("multi-index length does not match input length");
  if (x.size() != f.dim()) throw ShapeError("input length does not match model dimension");
  const int order = kappa.order();
  const std::vector<int> dirs = direction_list(kappa);
  switch (order) {
    case 1:
      return tower_partial<1>(f, x, dirs, flags);
    case 2:
      return tower_partial<2>(f, x, dirs, flags);
    case 3:
      return tower_partial<3>(f, x, dirs, flags);
    case 4:
      return tower_partial<4>(f, x, dirs, flags);
    default:
      throw ParameterError("derivative order must be in [1, 4], got " + std::to_string(order));
  }
}

FeatureVector gradient(const ModelFunction& f, const FeatureVector& x, EvalFlags* flags) {
  if (x.size() != f.dim()) throw ShapeError("input length does not match model dimension");
  if (const NetworkOutput* no = f.network()) return input_gradient(no->net, x, no->output_index, flags);
  const int n = static_cast<int>(x.size());
  FeatureVector g(n);
  std::vector<int> dirs(1);
  for (int i = 0; i < n; ++i) {
    dirs[0] = i;
    g[i] = tower_partial<1>(f, x, dirs, flags);
  }
  return g;
}

Eigen::MatrixXd hessian(const ModelFunction& f, const FeatureVector& x, EvalFlags* flags) {
  if (x.size() != f.dim()) throw ShapeError("input length does not match model dimension");
  const int n = static_cast<int>(x.size());
  Eigen::MatrixXd h(n, n);
  std::vector<int> dirs(2);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      dirs[0] = i;
      dirs[1] = j;
      const double v = tower_partial<2>(f, x, dirs, flags);
      h(i, j) = v;
      h(j, i) = v;
    }
  }
  return h;
}

std::map<MultiIndex, double> taylor_coefficients(const ModelFunction& f, const FeatureVector& anchor,
                                                 int max_order, const std::vector<int>* support,
                                                 std::uint64_t budget, EvalFlags* flags) {
  if (anchor.size() != f.dim()) throw ShapeError("anchor length does not match model dimension");
  if (max_order < 1 || max_order > kMaxDerivativeOrder)
    throw ParameterError("taylor coefficient order must be in [1, 4], got " + std::to_string(max_order));
  const int n = static_cast<int>(anchor.size());
  std::map<MultiIndex, double> coeffs;
  for (const MultiIndex& kappa : all_multi_indices(n, max_order, support, budget))
    coeffs.emplace(kappa, partial_derivative(f, anchor, kappa, flags) / kappa.factorial());
  return coeffs;
}

DerivativeBundle derivative_bundle(const ModelFunction& f, const FeatureVector& x, int order) {
  if (order < 1 || order > kMaxDerivativeOrder)
    throw ParameterError("derivative order must be in [1, 4], got " + std::to_string(order));
  EvalFlags flags;
  DerivativeBundle bundle;
  bundle.value = f.eval<double>(x, &flags);
  bundle.gradient = gradient(f, x, &flags);
  if (order >= 2) bundle.hessian = hessian(f, x, &flags);
  if (order >= 3) {
    const int n = static_cast<int>(x.size());
    for (const MultiIndex& kappa : all_multi_indices(n, order))
      if (kappa.order() >= 3) bundle.higher.emplace(kappa, partial_derivative(f, x, kappa, &flags));
  }
  bundle.relu_kink = flags.relu_kink;
  return bundle;
}

}  // namespace tattr
