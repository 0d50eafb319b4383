#include "spherefrac/limits.hpp"

#include <algorithm>
#include <cmath>

#include "spherefrac/special_functions.hpp"

namespace spherefrac {

std::vector<double> default_s1_grid() { return {0.9, 0.95, 0.99}; }
std::vector<double> default_t_grid() { return {20.0, 40.0, 80.0}; }
std::vector<double> default_beta_grid() { return {100.0, 1000.0, 10000.0}; }
std::vector<double> default_s0_grid() { return {-0.3, -0.1, -0.03, -0.01}; }

LimitReport extrapolate_linear(const std::vector<double>& h, const std::vector<double>& v,
                               const std::vector<double>& err) {
  if (h.size() != v.size() || h.size() != err.size() || h.empty())
    throw DomainError("extrapolation needs matching, non-empty arrays");
  LimitReport r;
  const std::size_t m = h.size();
  if (m == 1) {
    r.extrapolated = v[0];
    r.extrapolated_error = err[0];
    return r;
  }
  Eigen::MatrixXd A(m, 2);
  Eigen::VectorXd b(m);
  for (std::size_t i = 0; i < m; ++i) {
    A(i, 0) = 1.0;
    A(i, 1) = h[i];
    b(i) = v[i];
  }
  // Coefficients of the intercept as a linear functional of v: first row of (AᵀA)⁻¹Aᵀ.
  const Eigen::MatrixXd pinv = (A.transpose() * A).ldlt().solve(A.transpose());
  r.extrapolated = pinv.row(0).dot(b);
  double var = 0.0;
  for (std::size_t i = 0; i < m; ++i) var += pinv(0, i) * pinv(0, i) * err[i] * err[i];
  r.extrapolated_error = std::sqrt(var);
  if (m >= 3) r.fit_order = fit_order(h, v);
  return r;
}

double fit_order(const std::vector<double>& h, const std::vector<double>& v) {
  if (h.size() < 3) return std::numeric_limits<double>::quiet_NaN();
  std::vector<std::size_t> idx(h.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return h[a] > h[b]; });
  const std::size_t k = idx.size() - 3;
  const double h1 = h[idx[k]], h2 = h[idx[k + 1]], h3 = h[idx[k + 2]];
  const double v1 = v[idx[k]], v2 = v[idx[k + 1]], v3 = v[idx[k + 2]];
  if (v2 == v3) return std::numeric_limits<double>::quiet_NaN();
  const double ratio = (v1 - v2) / (v2 - v3);
  auto g = [&](double q) {
    return (std::pow(h1, q) - std::pow(h2, q)) / (std::pow(h2, q) - std::pow(h3, q)) - ratio;
  };
  double lo = 0.05, hi = 5.0;
  double glo = g(lo), ghi = g(hi);
  if (!(glo * ghi < 0.0)) return std::numeric_limits<double>::quiet_NaN();
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi), gm = g(mid);
    if ((gm < 0.0) == (glo < 0.0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

void set_target(LimitReport& r, double target, double target_error) {
  r.target = target;
  r.target_error = target_error;
  if (!std::isfinite(target) || !std::isfinite(r.extrapolated)) return;
  const double d = std::abs(r.extrapolated - target);
  r.deviation = target != 0.0 ? d / std::abs(target) : d;
}

namespace {

// Largest t the tabulated radial proposal resolves; beyond it the antipodal layer is thinner than the table.
constexpr double kMaxT = 1e6;

void require_finite(const std::vector<SweepRow>& rows) {
  for (const auto& r : rows)
    if (!std::isfinite(r.value) || !std::isfinite(r.error))
      throw NumericalError("non-finite sweep row at parameter " + std::to_string(r.param));
}

void check_increasing(const std::vector<double>& g, const char* what) {
  if (g.empty()) throw DomainError(std::string(what) + " grid is empty");
  for (std::size_t i = 1; i < g.size(); ++i)
    if (!(g[i] > g[i - 1])) throw DomainError(std::string(what) + " grid must be strictly increasing");
}

}  // namespace

SweepResult sweep_s_to_1(int n, const SetHandle& E, std::vector<double> s_grid, Method method, const SweepOptions& opt) {
  if (s_grid.empty()) s_grid = default_s1_grid();
  check_increasing(s_grid, "s");
  for (double s : s_grid)
    if (!(s > 0.0 && s < 1.0)) throw DomainError("s grid must lie in (0, 1)");
  if (E.dim() != n) throw DomainError("sweep: set dimension mismatch");

  SweepResult out;
  std::vector<double> h, v, e;
  for (std::size_t k = 0; k < s_grid.size(); ++k) {
    const double s = s_grid[k];
    PerimeterOptions po;
    po.method = method;
    po.samples = opt.samples;
    po.tol = opt.tol;
    po.rng = opt.rng.split(k);
    const PerimeterResult pr = perimeter(n, E, s, po);
    const double f = 1.0 - s;
    out.rows.push_back({s, f * pr.value, f * pr.error, to_string(pr.method)});
    h.push_back(f);
    v.push_back(f * pr.value);
    e.push_back(f * pr.error);
  }
  out.report = extrapolate_linear(h, v, e);
  const auto bm = opt.boundary_measure ? opt.boundary_measure : E.boundary_measure();
  if (bm) set_target(out.report, omega(n + 1) / omega(2) * *bm);
  require_finite(out.rows);
  return out;
}

SweepResult sweep_s_to_minus_inf(int n, const SetHandle& E, std::vector<double> t_grid, std::size_t N,
                                 const RandomStream& rng) {
  if (t_grid.empty()) t_grid = default_t_grid();
  check_increasing(t_grid, "t");
  for (double t : t_grid)
    if (!(t > n && t <= kMaxT)) throw DomainError("t grid must lie in (n, 1e6]");
  SweepResult out;
  std::vector<double> h, v, e;
  for (std::size_t k = 0; k < t_grid.size(); ++k) {
    const double t = t_grid[k];
    const Estimate est = perimeter_mc(n, E, -t, N, rng.split(k), KernelOptions{true});
    const double f = std::pow(t, n);
    out.rows.push_back({t, f * est.value(), f * est.std_error(), "mc"});
    h.push_back(1.0 / t);
    v.push_back(f * est.value());
    e.push_back(f * est.std_error());
  }
  out.report = extrapolate_linear(h, v, e);
  const Estimate overlap = symmetric_overlap_measure(n, E, N, rng.split(1000));
  const double c = concentration_constant(n, 1.0);
  set_target(out.report, c * overlap.value(), c * overlap.std_error());
  require_finite(out.rows);
  return out;
}

SweepResult sweep_seminorm_to_minus_inf(int n, const std::function<double(const Vec&)>& f, double p,
                                        std::vector<double> t_grid, std::size_t N, const RandomStream& rng) {
  if (t_grid.empty()) t_grid = default_t_grid();
  check_increasing(t_grid, "t");
  for (double t : t_grid)
    if (!(t * p > n && t <= kMaxT)) throw DomainError("t grid must satisfy t*p > n and t <= 1e6");
  SweepResult out;
  std::vector<double> h, v, e;
  for (std::size_t k = 0; k < t_grid.size(); ++k) {
    const double t = t_grid[k];
    const Estimate est = seminorm_mc(n, f, p, -t, N, rng.split(k));
    const double fac = std::pow(t, n);
    out.rows.push_back({t, fac * est.value(), fac * est.std_error(), "mc"});
    h.push_back(1.0 / t);
    v.push_back(fac * est.value());
    e.push_back(fac * est.std_error());
  }
  out.report = extrapolate_linear(h, v, e);
  const double w = sphere_surface(n);
  const Estimate odd = mc_estimate(
      [&](RandomStream& r) {
        const Vec x = sample_uniform(n, r);
        return w * std::pow(std::abs(f(x) - f(-x)), p);
      },
      N, rng.split(1000));
  const double c = concentration_constant(n, p);
  set_target(out.report, c * odd.value(), c * odd.std_error());
  require_finite(out.rows);
  return out;
}

SweepResult beta_asymptotic_check(int n, double p, std::vector<double> t_grid) {
  if (n < 1 || !(p > 0.0)) throw DomainError("beta check needs n >= 1 and p > 0");
  if (t_grid.empty()) t_grid = default_beta_grid();
  check_increasing(t_grid, "t");
  SweepResult out;
  std::vector<double> h, v, e;
  for (double t : t_grid) {
    if (!(t > n / p)) throw DomainError("beta check needs t > n/p");
    const double b = t * p - n + 1.0;
    // n = 1: B(1, b) = 1/b, so the row is t/b exactly.
    const double row = n == 1 ? t / b : std::pow(t, n) * incomplete_beta(1.0, n, b);
    out.rows.push_back({t, row, 0.0, "closed_form"});
    h.push_back(1.0 / t);
    v.push_back(row);
    e.push_back(0.0);
  }
  out.report = extrapolate_linear(h, v, e);
  set_target(out.report, std::tgamma(static_cast<double>(n)) / std::pow(p, n));
  require_finite(out.rows);
  return out;
}

VanishingResult s_to_zero_vanishing_check(int n, const std::function<double(const Vec&)>& f, double lipschitz,
                                          std::vector<double> s_grid, std::size_t N, const RandomStream& rng) {
  if (s_grid.empty()) s_grid = default_s0_grid();
  check_increasing(s_grid, "s");
  for (double s : s_grid)
    if (!(s > -1.0 && s < 0.0)) throw DomainError("s grid must lie in (-1, 0)");
  VanishingResult out;
  for (std::size_t k = 0; k < s_grid.size(); ++k) {
    const double s = s_grid[k];
    const Estimate est = seminorm_mc(n, f, 1.0, s, N, rng.split(k));
    out.rows.push_back({s, std::abs(s) * est.value(), std::abs(s) * est.std_error(), "mc"});
  }
  out.scale = lipschitz * std::pow(sphere_surface(n), 2) * kPi;
  out.monotone = true;
  for (std::size_t k = 1; k < out.rows.size(); ++k) {
    const auto &a = out.rows[k - 1], &b = out.rows[k];
    if (b.value > a.value + 3.0 * std::hypot(a.error, b.error)) out.monotone = false;
  }
  out.final_small = out.rows.back().value < 0.05 * out.scale;
  require_finite(out.rows);
  return out;
}

ProfileResult isoperimetric_profile(int n, double s, std::vector<double> alpha_grid, double tol) {
  check_s(s);
  if (alpha_grid.empty()) throw DomainError("measure grid is empty");
  const double total = sphere_surface(n);
  ProfileResult out;
  double mx = 0.0;
  for (double a : alpha_grid) {
    if (!(a > 0.0 && a < total)) throw DomainError("measures must lie in (0, omega_{n+1})");
    const double r = volume_radius(n, a);
    const double t = std::isnan(tol) ? default_cap_tol(s) : tol;
    const double P = n == 1 && s == 0.0 ? std::numeric_limits<double>::quiet_NaN() : perimeter_cap(n, s, r, t);
    out.rows.push_back({a, P / a, t * P / a, "cap_oracle"});
    mx = std::max(mx, P / a);
  }
  out.vanishes = out.rows.back().value < 0.1 * mx;
  require_finite(out.rows);
  return out;
}

IsoperimetricComparison isoperimetric_compare(int n, const SetHandle& E, double s, const PerimeterOptions& opt) {
  check_s(s);
  IsoperimetricComparison c{};
  const auto m = E.exact_measure();
  double measure;
  if (m) {
    measure = *m;
  } else {
    const Estimate est = mc_measure(E, opt.samples, opt.rng.split(77));
    measure = est.value();
  }
  c.measure = measure;
  c.set_value = perimeter(n, E, s, opt);
  const double r = volume_radius(n, std::clamp(measure, 0.0, sphere_surface(n)));
  const double tol = std::isnan(opt.tol) ? default_cap_tol(s) : opt.tol;
  if (n == 1) {
    if (s == 0.0) throw DomainError("n = 1 comparison needs s != 0");
    c.cap_value = perimeter_circle_exact(ArcUnion::from_arcs({{0.0, 2.0 * r}}), s);
    c.cap_error = 0.0;
  } else {
    c.cap_value = perimeter_cap(n, s, r, tol);
    c.cap_error = tol * std::abs(c.cap_value);
  }
  if (opt.kernel.normalized) {
    const double f = std::pow(kPi, n + s);
    c.cap_value *= f;
    c.cap_error *= f;
  }
  const double comb = std::hypot(c.set_value.error, c.cap_error);
  const double diff = c.set_value.value - c.cap_value;
  c.z = comb > 0.0 ? diff / comb : (diff == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), diff));
  c.expected_sign = s >= -static_cast<double>(n) ? diff >= 0.0 : diff <= 0.0;
  return c;
}

}  // namespace spherefrac
