#pragma once

#include "tattr/polynomial.hpp"
#include "tattr/taylor.hpp"

namespace tattr {

/// Closed-form integrated gradients on a polynomial: expanding p around the
/// baseline, each monomial of total degree k with exponent k_i hands feature
/// i the fraction k_i / k of its value at the displacement x - baseline.
/// This is the straight-line path integral evaluated exactly, with no
/// Riemann error; completeness sum(a_i) = p(x) - p(baseline) holds exactly.
AttributionResult exact_ig(const Polynomial& p, const FeatureVector& x, const FeatureVector& baseline);

/// Exact decomposition of p(x) - p(baseline) with every term of the finite
/// expansion included, so epsilon == 0 by construction.
TaylorDecomposition exact_taylor_terms(const Polynomial& p, const FeatureVector& x,
                                       const FeatureVector& baseline, AnchorMode anchor_mode);

}  // namespace tattr
