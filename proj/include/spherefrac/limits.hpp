#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "spherefrac/perimeter.hpp"

namespace spherefrac {

/// One sweep sample: the parameter (s or t), the normalized value and its 1-sigma error.
struct SweepRow {
  double param;
  double value;
  double error;
  std::string method;
};

struct LimitReport {
  double extrapolated = std::numeric_limits<double>::quiet_NaN();
  double extrapolated_error = 0.0;
  /// Empirical order q in value ≈ L + C h^q from the three smallest h (NaN when not bracketed).
  double fit_order = std::numeric_limits<double>::quiet_NaN();
  double target = std::numeric_limits<double>::quiet_NaN();
  double target_error = 0.0;
  /// |extrapolated − target|/|target|, or |extrapolated − target| when target = 0.
  double deviation = std::numeric_limits<double>::quiet_NaN();
};

struct SweepResult {
  std::vector<SweepRow> rows;
  LimitReport report;
};

/// Least-squares line v ≈ L + C h, returning L with its propagated error.
LimitReport extrapolate_linear(const std::vector<double>& h, const std::vector<double>& v,
                               const std::vector<double>& err);

/// q solving (v₁−v₂)/(v₂−v₃) = (h₁^q−h₂^q)/(h₂^q−h₃^q); NaN if no root in [0.05, 5].
double fit_order(const std::vector<double>& h, const std::vector<double>& v);

/// Fill target and deviation.
void set_target(LimitReport& r, double target, double target_error = 0.0);

struct SweepOptions {
  std::size_t samples = 1000000;
  double tol = std::numeric_limits<double>::quiet_NaN();
  RandomStream rng{};
  /// Overrides the boundary measure of E (when the set has no closed form).
  std::optional<double> boundary_measure;
};

/// Rows (1−s)·P_s(E), extrapolated linearly in 1−s towards (ω_{n+1}/ω₂)·H^{n−1}(∂E).
SweepResult sweep_s_to_1(int n, const SetHandle& E, std::vector<double> s_grid, Method method,
                         const SweepOptions& opt = {});

/// Rows tⁿ·P̃_{−t}(E), extrapolated linearly in 1/t towards c_{n,1}·H^n((−E) ∩ E^c).
SweepResult sweep_s_to_minus_inf(int n, const SetHandle& E, std::vector<double> t_grid, std::size_t N,
                                 const RandomStream& rng);

/// Rows tⁿ·seminorm at s = −t, towards c_{n,p}·∫|f(x) − f(−x)|^p.
SweepResult sweep_seminorm_to_minus_inf(int n, const std::function<double(const Vec&)>& f, double p,
                                        std::vector<double> t_grid, std::size_t N, const RandomStream& rng);

/// Rows tⁿ·B(n, tp − n + 1), towards (n−1)!/pⁿ.
SweepResult beta_asymptotic_check(int n, double p, std::vector<double> t_grid);

struct VanishingResult {
  std::vector<SweepRow> rows;
  double scale = 0.0;      // Lipschitz constant × ω_{n+1}² × π
  bool monotone = false;   // non-increasing within 3 combined errors
  bool final_small = false;  // last row < 5% of scale
};

/// Rows |s|·seminorm (p = 1, normalized kernel) along s ↗ 0.
VanishingResult s_to_zero_vanishing_check(int n, const std::function<double(const Vec&)>& f, double lipschitz,
                                          std::vector<double> s_grid, std::size_t N, const RandomStream& rng);

struct ProfileResult {
  std::vector<SweepRow> rows;  // param = α, value = γ_{n,s,α}
  bool vanishes = false;       // last value < 10% of the maximum
};

/// γ_{n,s,α} = P_s(C_α)/α over a grid of measures.
ProfileResult isoperimetric_profile(int n, double s, std::vector<double> alpha_grid,
                                    double tol = std::numeric_limits<double>::quiet_NaN());

struct IsoperimetricComparison {
  double measure;
  PerimeterResult set_value;
  double cap_value;
  double cap_error;
  /// (P_s(E) − P_s(C)) / combined error; positive means E has the larger perimeter.
  double z;
  /// True when the observed sign matches the theorem: E ≥ C for s ≥ −n, E ≤ C for s < −n.
  bool expected_sign;
};

/// Compare E with the cap of equal measure.
IsoperimetricComparison isoperimetric_compare(int n, const SetHandle& E, double s, const PerimeterOptions& opt);

/// Default grids.
std::vector<double> default_s1_grid();
std::vector<double> default_t_grid();
std::vector<double> default_beta_grid();
std::vector<double> default_s0_grid();

}  // namespace spherefrac
