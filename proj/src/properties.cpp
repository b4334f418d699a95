#include "tattr/properties.hpp"

#include <cmath>

namespace tattr {

MethodStructure MethodStructure::for_method(const std::string& method_id) {
  if (method_id == "gradient_x_input") return first_order();
  if (method_id == "perturbation_1") return independent();
  if (method_id == "integrated_gradients" || method_id == "exact_ig" || method_id == "ig1" ||
      method_id == "ig2" || method_id == "ig3" || method_id == "taylor_assign:degree_proportional")
    return degree_proportional();
  if (method_id == "taylor_assign:equal_split") return equal_split();
  throw ParameterError("method \"" + method_id +
                       "\" needs an explicit structure (patch layout or layerwise fractions)");
}

double MethodStructure::share(const MultiIndex& kappa, int i) const {
  switch (kind) {
    case Kind::first_order:
      return (kappa.order() == 1 && kappa[i] == 1) ? 1.0 : 0.0;
    case Kind::independent:
      return (kappa.support_size() == 1 && kappa[i] > 0) ? 1.0 : 0.0;
    case Kind::patch: {
      const int p = patches.patch_of(i);
      for (int j = 0; j < kappa.size(); ++j)
        if (kappa[j] > 0 && patches.patch_of(j) != p) return 0.0;
      return 1.0;
    }
    case Kind::global_fraction:
      if (kappa.order() == 1) return kappa[i] == 1 ? 1.0 : 0.0;
      return fractions[i];
    case Kind::degree_proportional:
      return kappa[i] == 0 ? 0.0 : static_cast<double>(kappa[i]) / kappa.order();
    case Kind::equal_split:
      return kappa[i] == 0 ? 0.0 : 1.0 / kappa.support_size();
  }
  return 0.0;
}

nlohmann::json PropertyReport::to_json() const {
  nlohmann::json doc;
  doc["method"] = method;
  doc["approx_error"] = approx_error;
  doc["independent_residual"] = independent_residual;
  doc["interactive_residual"] = interactive_residual;
  doc["satisfied"] = {satisfied[0], satisfied[1], satisfied[2]};
  doc["tolerances"] = {{"abs", tolerances.abs_tol}, {"rel", tolerances.rel_tol}};
  doc["delta_f"] = delta_f;
  doc["assignment_deviation"] = assignment_deviation;
  return doc;
}

PropertyReport check_properties(const AttributionResult& attr, const TaylorDecomposition& dec,
                                const AssignmentRule& rule, const PropertyTolerances& tol,
                                const std::optional<MethodStructure>& structure) {
  if (attr.scores.size() != dec.n)
    throw ShapeError("attribution has " + std::to_string(attr.scores.size()) + " scores, decomposition has " +
                     std::to_string(dec.n) + " features");
  const MethodStructure st = structure ? *structure : MethodStructure::for_method(attr.method);
  if (st.kind == MethodStructure::Kind::patch) st.patches.validate(dec.n);
  if (st.kind == MethodStructure::Kind::global_fraction && st.fractions.size() != dec.n)
    throw ShapeError("fraction vector length does not match feature count");

  PropertyReport report;
  report.method = attr.method;
  report.tolerances = tol;
  report.delta_f = dec.delta_f();

  // Property 1: how much of the output difference the attribution misses.
  report.approx_error = std::abs(report.delta_f - attr.scores.sum());

  // Properties 2 and 3 from the term inventory and the method's share pattern.
  FeatureVector own_independent = FeatureVector::Zero(dec.n);   // truth
  FeatureVector method_independent = FeatureVector::Zero(dec.n);  // what the structure captures
  double interactive_residual = 0.0;
  dec.for_each_term([&](const MultiIndex& kappa, double v) {
    if (kappa.support_size() == 1) {
      for (int i = 0; i < dec.n; ++i) {
        if (kappa[i] == 0) continue;
        own_independent[i] += v;
        method_independent[i] += st.share(kappa, i) * v;
      }
      return;
    }
    double within = 0.0;
    for (int i = 0; i < dec.n; ++i) {
      const double s = st.share(kappa, i);
      if (kappa[i] > 0)
        within += s;
      else
        interactive_residual += std::abs(s * v);  // mass leaked outside the support
    }
    interactive_residual += std::abs(within - 1.0) * std::abs(v);  // deficit or excess inside
  });
  report.independent_residual = (own_independent - method_independent).cwiseAbs().maxCoeff();
  report.interactive_residual = interactive_residual;

  const AttributionResult reference = assign(dec, rule);
  report.assignment_deviation = (attr.scores - reference.scores).cwiseAbs().maxCoeff();

  report.satisfied[0] = report.approx_error <= tol.threshold(report.delta_f);
  report.satisfied[1] = report.independent_residual <= tol.threshold(report.delta_f);
  report.satisfied[2] = report.interactive_residual <= tol.threshold(report.delta_f);
  return report;
}

}  // namespace tattr
