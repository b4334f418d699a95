#include "tattr/taylor.hpp"

namespace tattr {

double TaylorDecomposition::total() const {
  double t = F.sum() + S_ind.sum() + 0.5 * S_int.sum();
  for (const auto& [kappa, v] : higher) t += v;
  return t;
}

void TaylorDecomposition::for_each_term(const std::function<void(const MultiIndex&, double)>& fn) const {
  for (int i = 0; i < n; ++i)
    if (F[i] != 0.0) fn(MultiIndex::unit(n, i), F[i]);
  for (int i = 0; i < n; ++i)
    if (S_ind[i] != 0.0) fn(MultiIndex::unit(n, i, 2), S_ind[i]);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (S_int(i, j) == 0.0) continue;
      MultiIndex kappa = MultiIndex::zeros(n);
      kappa[i] = 1;
      kappa[j] = 1;
      fn(kappa, S_int(i, j));
    }
  }
  for (const auto& [kappa, v] : higher) fn(kappa, v);
}

double TaylorDecomposition::independent_total(int i) const {
  double t = F[i] + S_ind[i];
  for (const auto& [kappa, v] : higher)
    if (kappa.support_size() == 1 && kappa[i] > 0) t += v;
  return t;
}

double AssignmentRule::share(const MultiIndex& kappa, int i) const {
  if (kappa[i] == 0) return 0.0;
  if (kind == Kind::degree_proportional) return static_cast<double>(kappa[i]) / static_cast<double>(kappa.order());
  return 1.0 / static_cast<double>(kappa.support_size());
}

namespace detail {

void fill_decomposition(TaylorDecomposition& dec, const std::map<MultiIndex, double>& coeffs) {
  const int n = dec.n;
  dec.F = FeatureVector::Zero(n);
  dec.S_ind = FeatureVector::Zero(n);
  dec.S_int = Eigen::MatrixXd::Zero(n, n);
  dec.higher.clear();

  double included = 0.0;
  for (const auto& [kappa, c] : coeffs) {
    const int k = kappa.order();
    if (k == 0) continue;
    double v = c;
    for (int i = 0; i < n; ++i)
      for (int r = 0; r < kappa[i]; ++r) v *= dec.delta[i];
    included += v;
    if (k == 1) {
      for (int i = 0; i < n; ++i)
        if (kappa[i] == 1) dec.F[i] += v;
    } else if (k == 2 && kappa.support_size() == 1) {
      for (int i = 0; i < n; ++i)
        if (kappa[i] == 2) dec.S_ind[i] += v;
    } else if (k == 2) {
      int a = -1, b = -1;
      for (int i = 0; i < n; ++i)
        if (kappa[i] == 1) (a < 0 ? a : b) = i;
      dec.S_int(a, b) += v;
      dec.S_int(b, a) += v;
    } else {
      dec.higher.emplace(kappa, v);
    }
  }
  const double target_value = (dec.anchor_mode == AnchorMode::at_baseline) ? dec.f_x : dec.f_baseline;
  const double anchor_value = (dec.anchor_mode == AnchorMode::at_baseline) ? dec.f_baseline : dec.f_x;
  dec.epsilon = (target_value - anchor_value) - included;
}

}  // namespace detail

TaylorDecomposition decompose(const ModelFunction& f, const FeatureVector& x, const FeatureVector& baseline,
                              int order, AnchorMode anchor_mode) {
  if (x.size() != baseline.size()) throw ShapeError("input and baseline lengths differ");
  if (x.size() != f.dim()) throw ShapeError("input length does not match model dimension");
  if (order < 1 || order > kMaxDerivativeOrder)
    throw ParameterError("decomposition order must be in [1, 4], got " + std::to_string(order));

  const int n = static_cast<int>(x.size());
  TaylorDecomposition dec;
  dec.anchor_mode = anchor_mode;
  dec.n = n;
  dec.order = order;
  dec.x = x;
  dec.baseline = baseline;
  dec.f_x = f(x);
  dec.f_baseline = f(baseline);
  const FeatureVector& anchor = (anchor_mode == AnchorMode::at_baseline) ? baseline : x;
  const FeatureVector& target = (anchor_mode == AnchorMode::at_baseline) ? x : baseline;
  dec.delta = target - anchor;

  std::map<MultiIndex, double> coeffs;
  if (const Polynomial* p = f.polynomial()) {
    const Polynomial shifted = p->expand_about(anchor);
    for (const auto& [kappa, c] : shifted.terms()) {
      const int k = kappa.order();
      if (k >= 1 && k <= order) coeffs.emplace(kappa, c);
    }
  } else {
    coeffs = taylor_coefficients(f, anchor, order);
  }
  detail::fill_decomposition(dec, coeffs);
  return dec;
}

AttributionResult assign(const TaylorDecomposition& dec, const AssignmentRule& rule) {
  AttributionResult result;
  result.method = std::string("taylor_assign:") + rule.name();
  result.baseline_info = std::string("anchor=") + to_string(dec.anchor_mode);
  FeatureVector a = dec.F + dec.S_ind;
  dec.for_each_term([&](const MultiIndex& kappa, double v) {
    if (kappa.order() <= 2 && kappa.support_size() == 1) return;  // already in F + S_ind
    for (int i = 0; i < dec.n; ++i) {
      if (kappa[i] == 0) continue;
      a[i] += rule.share(kappa, i) * v;
    }
  });
  result.scores = a;
  // Conservation is against the decomposition total by construction.
  result.completeness_residual = a.sum() - dec.total();
  return result;
}

}  // namespace tattr
