#pragma once

#include <utility>
#include <vector>

namespace spherefrac {

/// log B(a, b), accurate for large arguments (no lgamma cancellation).
double log_beta(double a, double b);

/// Complete beta function B(a, b).
double beta(double a, double b);

/// Non-regularized incomplete beta B_T(a, b) = ∫₀^T u^{a−1}(1−u)^{b−1} du.
///
/// Continued fraction (modified Lentz) on whichever tail converges fast; relative error ~1e-13.
double incomplete_beta(double T, double a, double b);

/// Regularized incomplete beta I_T(a, b).
double regularized_incomplete_beta(double T, double a, double b);

/// Gauss–Legendre nodes and weights on [−1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussRule gauss_legendre(int order);

}  // namespace spherefrac
