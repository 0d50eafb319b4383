#include "spherefrac/perimeter.hpp"

#include <algorithm>
#include <cmath>

namespace spherefrac {

namespace {
constexpr double kTwoPi = 2.0 * kPi;
}

Regime classify_s(int n, double s) {
  check_s(s);
  if (s > 0.0) return Regime::Positive;
  if (s >= -static_cast<double>(n)) return Regime::Mild;
  return Regime::Smooth;
}

void check_s(double s) {
  if (!std::isfinite(s)) throw DomainError("s must be finite");
  if (s >= 1.0) throw DomainError("s must be < 1 (got " + std::to_string(s) + ")");
}

std::string to_string(Method m) {
  switch (m) {
    case Method::Auto: return "auto";
    case Method::Mc: return "mc";
    case Method::CapOracle: return "cap_oracle";
    case Method::CircleExact: return "circle_exact";
    case Method::ClosedForm: return "closed_form";
  }
  return "auto";
}

Method method_from_string(const std::string& s) {
  if (s == "auto") return Method::Auto;
  if (s == "mc") return Method::Mc;
  if (s == "cap_oracle") return Method::CapOracle;
  if (s == "circle_exact") return Method::CircleExact;
  if (s == "closed_form") return Method::ClosedForm;
  throw DomainError("unknown method '" + s + "' (expected auto, mc, cap_oracle, circle_exact, closed_form)");
}

double perimeter_minus_n(int n, double alpha) {
  const double total = sphere_surface(n);
  if (!(alpha >= 0.0 && alpha <= total * (1.0 + 1e-15)))
    throw DomainError("measure must lie in [0, " + std::to_string(total) + "]");
  return alpha * std::max(total - alpha, 0.0);
}

// ---------------------------------------------------------------------------------------------
// Cap oracle

double default_cap_tol(double s) { return s > 0.9 ? 1e-6 : 1e-8; }

double cap_exit_cosine(double r, double delta, double theta, double delta_over_theta) {
  const double t = r - delta;
  const double st = std::sin(t);
  if (!(st > 0.0)) return theta > r ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
  const double near = std::sin(r - 0.5 * delta) * delta_over_theta * sinc(0.5 * delta) / sinc(theta);
  return (-near + std::cos(t) * std::tan(0.5 * theta)) / st;
}

double cap_exit_cosine(double r, double delta, double theta) {
  return cap_exit_cosine(r, delta, theta, delta / theta);
}

double perimeter_cap(int n, double s, double r, double tol) {
  check_s(s);
  if (n < 1) throw DomainError("perimeter_cap needs n >= 1");
  if (!(r >= 0.0 && r <= kPi)) throw DomainError("cap radius must lie in [0, pi]");
  if (std::isnan(tol)) tol = default_cap_tol(s);
  if (!(tol > 0.0)) throw DomainError("tolerance must be positive");
  // P_s(C) = P_s(C^c) and C^c is a cap of radius π − r up to a nullset.
  const double rho = std::min(r, kPi - r);
  if (rho <= 0.0) return 0.0;
  if (n == 1) {
    if (s == 0.0) throw DomainError("the circle closed form does not cover s = 0");
    return perimeter_circle_exact(ArcUnion::from_arcs({{0.0, 2.0 * r}}), s);
  }

  const double wn = omega(n);
  const double spos = std::max(s, 0.0);
  QuadOptions qi;
  qi.rel_tol = tol / 10.0;
  qi.max_intervals = 4000;

  auto fraction = [&](double delta, double theta, double ratio) {
    const double c = cap_exit_cosine(rho, delta, theta, ratio);
    return slice_cap_fraction(n, std::acos(std::clamp(c, -1.0, 1.0)));
  };

  // δ^{max(s,0)} ∫_δ^π θ^{−(n+s)} ω_n sin^{n−1}θ F(θ) dθ for a point at depth δ.
  auto inner_scaled = [&](double delta) {
    if (!(delta < rho)) return 0.0;
    const double log_delta = std::log(delta);
    // θ ∈ [δ, ρ] in z = log(θ/δ).
    const double zmax = std::log(rho) - log_delta;
    auto g1 = [&](double z) {
      const double theta = std::exp(log_delta + z);
      return std::exp(-s * z) * std::pow(sinc(theta), n - 1) * fraction(delta, theta, std::exp(-z));
    };
    double p1 = 0.0;
    {
      QuadOptions q = qi;
      q.grading = Grading{0.5, Endpoint::Lower};
      const double first = std::min(1.0, zmax);
      p1 = adaptive_quad(g1, 0.0, first, q);
      double lo = first, width = 3.0;
      while (lo < zmax) {
        if (s > 0.0 && std::exp(-s * lo) / s < 1e-3 * qi.rel_tol * std::abs(p1)) break;
        const double hi = (zmax - lo <= 1.5 * width) ? zmax : lo + width;
        p1 += adaptive_quad(g1, lo, hi, qi);
        lo = hi;
        width *= 4.0;
      }
    }
    p1 *= wn * (s > 0.0 ? 1.0 : std::exp(-s * log_delta));

    const double scale = std::exp(spos * log_delta);
    auto kernel = [&](double theta) { return std::pow(theta, -(n + s)) * std::pow(std::sin(theta), n - 1); };
    // θ ∈ [ρ, 2ρ − δ]: partial exit.
    QuadOptions q2 = qi;
    q2.grading = Grading{0.5, Endpoint::Upper};
    const double top = 2.0 * rho - delta;
    const double p2 = adaptive_quad([&](double th) { return kernel(th) * fraction(delta, th, delta / th); }, rho, top, q2);
    // θ ∈ [2ρ − δ, π]: whole sphere of radius θ lies outside.
    const double p3 = top < kPi ? adaptive_quad(kernel, top, kPi, qi) : 0.0;
    return p1 + wn * scale * (p2 + p3);
  };

  QuadOptions qo;
  qo.rel_tol = tol;
  qo.max_intervals = 4000;
  if (s > 0.0) {
    // δ = u^{1/(1−s)} flattens the δ^{−s} edge behaviour.
    const double q = 1.0 / (1.0 - s);
    auto outer = [&](double u) {
      const double delta = std::max(std::exp(q * std::log(u)), 1e-300);
      return wn * std::pow(std::sin(rho - delta), n - 1) * inner_scaled(delta) * q;
    };
    return adaptive_quad(outer, 0.0, std::pow(rho, 1.0 - s), qo);
  }
  auto outer = [&](double delta) { return wn * std::pow(std::sin(rho - delta), n - 1) * inner_scaled(delta); };
  return adaptive_quad(outer, 0.0, rho, qo);
}

// ---------------------------------------------------------------------------------------------
// Circle and line closed forms

namespace {

// Second antiderivative of δ(u)^{−(1+s)} on [0, 2π], C¹ across u = π.
double circle_phi(double u, double s) {
  const double c = s * (1.0 - s);
  u = std::clamp(u, 0.0, kTwoPi);
  if (u <= kPi) return -std::pow(u, 1.0 - s) / c;
  return -std::pow(kTwoPi - u, 1.0 - s) / c - 2.0 * std::pow(kPi, -s) / s * (u - kPi);
}

// Second antiderivative of u^{−(1+s)}·1[u < ε] on u ≥ 0.
double line_phi(double u, double s, double eps) {
  const double c = s * (1.0 - s);
  if (u <= eps) return -std::pow(u, 1.0 - s) / c;
  return -std::pow(eps, 1.0 - s) / c - std::pow(eps, -s) / s * (u - eps);
}

}  // namespace

double perimeter_circle_exact(const ArcUnion& E, double s) {
  check_s(s);
  if (s == 0.0) throw DomainError("the circle closed form does not cover s = 0 (logarithmic kernel); use mc");
  if (E.empty() || E.is_full()) return 0.0;
  const auto arcs = E.arcs();
  const auto gaps = E.gaps();
  double total = 0.0;
  for (const auto& arc : arcs) {
    const double a = arc.start, b = arc.start + arc.length;
    for (const auto& gap : gaps) {
      // Place the gap inside [b − 2π, a] so that φ − ψ ∈ [0, 2π] on the whole rectangle.
      double d = wrap_angle(a - (gap.start + gap.length));
      if (d > kTwoPi - arc.length - gap.length + 1e-9) d = 0.0;  // rounding of a touching end
      const double beta = a - d, alpha = beta - gap.length;
      total += circle_phi(b - alpha, s) - circle_phi(a - alpha, s) - circle_phi(b - beta, s) + circle_phi(a - beta, s);
    }
  }
  return total;
}

double localized_boundary_term(double s, double eps) {
  if (!(s > 0.0 && s < 1.0)) throw DomainError("s must lie in (0, 1)");
  const double e = std::pow(eps, 1.0 - s);
  return (e / (1.0 - s) - e) / s;
}

double interval_perimeter_exact(const std::vector<Interval1D>& E, double I_lo, double I_hi, double s, double eps) {
  if (!(s > 0.0 && s < 1.0)) throw DomainError("interval perimeter needs s in (0, 1)");
  if (!(eps > 0.0)) throw DomainError("localization radius must be positive");
  if (!(I_lo < I_hi)) throw DomainError("ambient interval must satisfy lo < hi");
  if (E.empty()) return 0.0;
  std::vector<Interval1D> iv = E;
  std::sort(iv.begin(), iv.end(), [](const Interval1D& x, const Interval1D& y) { return x.a < y.a; });
  for (std::size_t k = 0; k < iv.size(); ++k) {
    if (!(iv[k].a < iv[k].b)) throw DomainError("intervals must have a < b");
    if (iv[k].a < I_lo || iv[k].b > I_hi) throw DomainError("intervals must lie inside the ambient interval");
    if (k > 0 && iv[k].a < iv[k - 1].b) throw DomainError("intervals overlap");
  }
  std::vector<Interval1D> gaps;
  double cursor = I_lo;
  for (const auto& x : iv) {
    if (x.a > cursor) gaps.push_back({cursor, x.a});
    cursor = x.b;
  }
  if (cursor < I_hi) gaps.push_back({cursor, I_hi});

  const bool local = std::isfinite(eps);
  // ∫_a^b ∫_α^β k(x − y) for a gap [α, β] left of [a, b] (β ≤ a).
  auto left_pair = [&](double a, double b, double alpha, double beta) {
    double far = 0.0;  // H(b − α) − H(a − α)
    if (std::isfinite(alpha))
      far = line_phi(b - alpha, s, eps) - line_phi(a - alpha, s, eps);
    else if (local)
      far = -std::pow(eps, -s) / s * (b - a);
    const double nearp = -line_phi(b - beta, s, eps) + line_phi(a - beta, s, eps);
    return far + nearp;
  };
  double total = 0.0;
  for (const auto& x : iv)
    for (const auto& g : gaps) {
      if (g.b <= x.a)
        total += left_pair(x.a, x.b, g.a, g.b);
      else
        total += left_pair(-x.b, -x.a, -g.b, -g.a);
    }
  return total;
}

// ---------------------------------------------------------------------------------------------
// Monte Carlo

namespace {

struct CapPlan {
  Cap cap;
  double cos_r;
  double log_prob;
  TabulatedSampler depth;
};

Estimate perimeter_mc_caps(int n, const std::vector<Cap>& all_caps, double s, std::size_t N, const RandomStream& rng,
                           double scale) {
  std::vector<CapPlan> plans;
  std::vector<double> cum;
  double wsum = 0.0;
  std::vector<Cap> caps;
  for (const auto& c : all_caps)
    if (c.radius > 0.0 && c.radius < kPi) caps.push_back(c);
  if (caps.empty()) return Estimate::exact(0.0, N);
  std::vector<double> w;
  for (const auto& c : caps) {
    w.push_back(std::max(std::pow(std::sin(c.radius), n - 1), 1e-3));
    wsum += w.back();
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < caps.size(); ++i) {
    const double r = caps[i].radius;
    // depth density sin^{n−1}(r − δ) δ^{−s} on [0, r]
    auto log_regular = [=](double delta) { return (n - 1) * std::log(sinc(r - delta)); };
    plans.push_back({caps[i], std::cos(r), std::log(w[i] / wsum), TabulatedSampler(log_regular, 0.0, r, -s, n - 1.0)});
    acc += w[i] / wsum;
    cum.push_back(acc);
  }
  cum.back() = 1.0;
  const double log_wn2 = 2.0 * std::log(omega(n));
  const double log_pi = std::log(kPi);

  auto draw = [&](RandomStream& r) -> double {
    const double pick = r.uniform();
    const std::size_t i = std::min<std::size_t>(std::upper_bound(cum.begin(), cum.end(), pick) - cum.begin(),
                                                plans.size() - 1);
    const CapPlan& P = plans[i];
    const Vec& c = P.cap.center;
    const double rad = P.cap.radius;
    const TabulatedDraw d = P.depth.sample(r);
    const double delta = d.x, log_delta = d.log_offset;
    const double t = rad - delta;
    if (!(t > 0.0)) return 0.0;
    const Vec e = sample_tangent(c, r);
    const double st = std::sin(t), ct = std::cos(t);
    const Vec x = ct * c + st * e;
    const Vec u = sample_tangent(x, r);
    const TruncatedPowerLaw shell(s, log_delta, log_pi);
    const double log_theta = shell.log_sample(r);
    const double theta = std::exp(log_theta);
    const Vec y = std::cos(theta) * x + std::sin(theta) * u;
    bool outside;
    if (delta > 1e-4) {
      outside = !(y.dot(c) > P.cos_r);
    } else {
      const double cos_phi = u.dot(st * c - ct * e);
      outside = cos_phi <= cap_exit_cosine(rad, delta, theta, std::exp(log_delta - log_theta));
    }
    if (!outside) return 0.0;
    for (std::size_t j = 0; j < plans.size(); ++j)
      if (j != i && y.dot(plans[j].cap.center) > plans[j].cos_r) return 0.0;
    double log_w = log_wn2 + d.log_weight - P.log_prob + shell.log_normalizer();
    if (n > 1) log_w += (n - 1) * (std::log(st) + std::log(sinc(theta)));
    return std::exp(log_w) * scale;
  };
  return mc_estimate(draw, N, rng);
}

Estimate perimeter_mc_generic(int n, const SetHandle& E, double s, std::size_t N, const RandomStream& rng,
                              bool normalized) {
  const double wn1 = sphere_surface(n), wn = omega(n);
  if (s < 0.0) {
    const double kappa = -(n + s);
    const RadialProposal prop(n, kappa);
    const double scale = wn1 * wn * (normalized ? 1.0 : std::pow(kPi, kappa));
    auto draw = [&](RandomStream& r) -> double {
      const Vec x = sample_uniform(n, r);
      if (!E.contains(x)) return 0.0;
      const TabulatedDraw d = prop.sample_log(r);
      const Vec y = sample_at_distance(x, d.x, r);
      if (E.contains(y)) return 0.0;
      return scale * std::exp(prop.log_kernel(d) + d.log_weight);
    };
    return mc_estimate(draw, N, rng);
  }
  const double scale = wn1 * wn * (normalized ? std::pow(kPi, n + s) : 1.0);
  const double log_pi = std::log(kPi);
  auto draw = [&](RandomStream& r) -> double {
    const Vec x = sample_uniform(n, r);
    if (!E.contains(x)) return 0.0;
    const auto bd = E.boundary_distance(x);
    if (!bd)
      throw CapabilityError("perimeter_mc with s >= 0 needs a set with boundary_distance (got " + E.render() + ")");
    const double theta_min = *bd * (1.0 - 1e-9) - 1e-15;
    if (theta_min <= 1e-14 || theta_min >= kPi) return 0.0;
    const TruncatedPowerLaw shell(s, std::log(theta_min), log_pi);
    const double theta = std::exp(shell.log_sample(r));
    const Vec y = sample_at_distance(x, theta, r);
    if (E.contains(y)) return 0.0;
    return scale * std::exp(shell.log_normalizer() + (n - 1) * std::log(sinc(theta)));
  };
  return mc_estimate(draw, N, rng);
}

}  // namespace

Estimate perimeter_mc(int n, const SetHandle& E, double s, std::size_t N, const RandomStream& rng,
                      KernelOptions kernel) {
  check_s(s);
  if (E.dim() != n) throw DomainError("perimeter_mc: set dimension mismatch");
  if (N < 2) throw DomainError("perimeter_mc needs at least 2 samples");
  if (E.is_empty() || E.is_full()) return Estimate::exact(0.0, N);
  if (s >= 0.0) {
    if (auto caps = E.as_caps())
      return perimeter_mc_caps(n, *caps, s, N, rng, kernel.normalized ? std::pow(kPi, n + s) : 1.0);
  }
  return perimeter_mc_generic(n, E, s, N, rng, kernel.normalized);
}

Estimate seminorm_mc(int n, const std::function<double(const Vec&)>& f, double p, double s, std::size_t N,
                     const RandomStream& rng, KernelOptions kernel) {
  check_s(s);
  if (!(s < 0.0)) throw DomainError("seminorm_mc supports s < 0 only");
  if (!(p >= 1.0)) throw DomainError("seminorm exponent p must be >= 1");
  if (n < 1) throw DomainError("seminorm_mc needs n >= 1");
  const double kappa = -(n + s * p);
  const RadialProposal prop(n, kappa);
  const double scale = sphere_surface(n) * omega(n) * (kernel.normalized ? 1.0 : std::pow(kPi, kappa));
  auto draw = [&](RandomStream& r) -> double {
    const Vec x = sample_uniform(n, r);
    const TabulatedDraw d = prop.sample_log(r);
    if (d.x == 0.0) return 0.0;  // θ below the double range: y = x
    const Vec y = sample_at_distance(x, d.x, r);
    const double diff = std::abs(f(x) - f(y));
    if (diff == 0.0) return 0.0;
    return scale * std::pow(diff, p) * std::exp(prop.log_kernel(d) + d.log_weight);
  };
  return mc_estimate(draw, N, rng);
}

double concentration_constant(int n, double p) {
  if (n < 1 || !(p > 0.0)) throw DomainError("concentration constant needs n >= 1, p > 0");
  return omega(n) * std::pow(kPi, n) * std::tgamma(static_cast<double>(n)) / std::pow(p, n);
}

double antipodal_concentration_quad(int n, double p, double t, double delta) {
  if (n < 1) throw DomainError("n must be >= 1");
  if (!(p >= 1.0)) throw DomainError("p must be >= 1");
  if (!(t > n / p)) throw DomainError("t must exceed n/p");
  if (!(delta >= 0.0 && delta <= kPi)) throw DomainError("delta must lie in [0, pi]");
  if (delta == 0.0) return 0.0;
  const double k = t * p - n;
  // w = π − θ
  auto g = [&](double w) {
    const double sw = std::sin(w);
    if (!(sw > 0.0) && n > 1) return 0.0;
    return std::pow(sw, n - 1) * std::exp(k * std::log1p(-w / kPi));
  };
  QuadOptions q;
  q.rel_tol = 1e-12;
  const double h = std::min(delta, kPi / (t * p));
  return std::pow(t, n) * omega(n) * geometric_quad(g, 0.0, delta, h, q);
}

// ---------------------------------------------------------------------------------------------
// Front end

PerimeterResult perimeter(int n, const SetHandle& E, double s, const PerimeterOptions& opt) {
  check_s(s);
  if (E.dim() != n) throw DomainError("perimeter: set dimension mismatch");
  const double norm = opt.kernel.normalized ? std::pow(kPi, n + s) : 1.0;
  Method m = opt.method;
  if (m == Method::Auto) {
    if (s == -static_cast<double>(n) && E.exact_measure())
      m = Method::ClosedForm;
    else if (n == 1 && s != 0.0 && E.as_arcs())
      m = Method::CircleExact;
    else if (auto caps = E.as_caps(); n >= 2 && caps && caps->size() == 1)
      m = Method::CapOracle;
    else if (E.is_empty() || E.is_full())
      m = Method::ClosedForm;
    else
      m = Method::Mc;
  }
  PerimeterResult res;
  res.method = m;
  switch (m) {
    case Method::ClosedForm: {
      if (E.is_empty() || E.is_full()) {
        res.value = 0.0;
        return res;
      }
      if (s != -static_cast<double>(n)) throw DomainError("closed_form is exact only at s = -n");
      const auto a = E.exact_measure();
      if (!a) throw CapabilityError("closed_form needs a set with known measure");
      res.value = perimeter_minus_n(n, *a) * norm;
      return res;
    }
    case Method::CircleExact: {
      const auto arcs = E.as_arcs();
      if (!arcs) throw CapabilityError("circle_exact needs n = 1 and an arc-representable set");
      res.value = perimeter_circle_exact(*arcs, s) * norm;
      return res;
    }
    case Method::CapOracle: {
      const auto caps = E.as_caps();
      if (!caps || caps->size() != 1) throw CapabilityError("cap_oracle needs a single cap");
      const double tol = std::isnan(opt.tol) ? default_cap_tol(s) : opt.tol;
      res.value = perimeter_cap(n, s, caps->front().radius, tol) * norm;
      res.error = tol * std::abs(res.value);
      return res;
    }
    case Method::Mc:
    case Method::Auto: {
      const Estimate e = perimeter_mc(n, E, s, opt.samples, opt.rng, opt.kernel);
      res.value = e.value();
      res.error = e.std_error();
      res.samples = e.samples();
      return res;
    }
  }
  return res;
}

}  // namespace spherefrac
