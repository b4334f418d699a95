#include "tattr/poly_attr.hpp"

namespace tattr {

AttributionResult exact_ig(const Polynomial& p, const FeatureVector& x, const FeatureVector& baseline) {
  if (x.size() != baseline.size()) throw ShapeError("input and baseline lengths differ");
  if (x.size() != p.var_count()) throw ShapeError("input length does not match polynomial variables");
  const int n = p.var_count();
  const FeatureVector delta = x - baseline;
  const Polynomial shifted = p.expand_about(baseline);

  FeatureVector a = FeatureVector::Zero(n);
  for (const auto& [kappa, c] : shifted.terms()) {
    const int k = kappa.order();
    if (k == 0) continue;
    double v = c;
    for (int i = 0; i < n; ++i)
      for (int r = 0; r < kappa[i]; ++r) v *= delta[i];
    for (int i = 0; i < n; ++i)
      if (kappa[i] > 0) a[i] += (static_cast<double>(kappa[i]) / k) * v;
  }

  AttributionResult result;
  result.scores = a;
  result.method = "exact_ig";
  result.baseline_info = "explicit baseline, analytic path integral";
  result.completeness_residual = a.sum() - (p(x) - p(baseline));
  return result;
}

TaylorDecomposition exact_taylor_terms(const Polynomial& p, const FeatureVector& x,
                                       const FeatureVector& baseline, AnchorMode anchor_mode) {
  if (x.size() != baseline.size()) throw ShapeError("input and baseline lengths differ");
  if (x.size() != p.var_count()) throw ShapeError("input length does not match polynomial variables");
  const int n = p.var_count();

  TaylorDecomposition dec;
  dec.anchor_mode = anchor_mode;
  dec.n = n;
  dec.order = p.total_degree();
  dec.x = x;
  dec.baseline = baseline;
  dec.f_x = p(x);
  dec.f_baseline = p(baseline);
  const FeatureVector& anchor = (anchor_mode == AnchorMode::at_baseline) ? baseline : x;
  const FeatureVector& target = (anchor_mode == AnchorMode::at_baseline) ? x : baseline;
  dec.delta = target - anchor;

  const Polynomial shifted = p.expand_about(anchor);
  std::map<MultiIndex, double> coeffs;
  for (const auto& [kappa, c] : shifted.terms())
    if (kappa.order() >= 1) coeffs.emplace(kappa, c);
  detail::fill_decomposition(dec, coeffs);  // epsilon ~ 0: the finite expansion is exact
  return dec;
}

}  // namespace tattr
