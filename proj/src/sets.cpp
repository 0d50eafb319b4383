#include "spherefrac/sets.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <sstream>

namespace spherefrac {

struct SetHandle::Node {
  Kind kind;
  int n;
  Cap cap;
  Polytope poly;
  std::vector<SetHandle> parts;
  ArcUnion arcs;
};

namespace {

std::shared_ptr<SetHandle::Node> make_node(SetHandle::Kind k, int n) {
  auto node = std::make_shared<SetHandle::Node>();
  node->kind = k;
  node->n = n;
  return node;
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string fmt_vec(const Vec& v) {
  std::string s;
  for (Eigen::Index i = 0; i < v.size(); ++i) s += (i ? "," : "") + fmt(v(i));
  return s;
}

// Angle of a point of S¹ in [0, 2π).
double circle_angle(const Vec& x) { return wrap_angle(std::atan2(x(1), x(0))); }

}  // namespace

SetHandle SetHandle::empty(int n) {
  if (n < 1) throw DomainError("set dimension must be >= 1");
  return SetHandle(make_node(Kind::Empty, n));
}

SetHandle SetHandle::cap(Vec center, double radius) {
  check_sphere_point(center, 1e-9);
  if (!(radius >= 0.0 && radius <= kPi)) throw DomainError("cap radius must lie in [0, pi]");
  auto node = make_node(Kind::Cap, sphere_dim(center));
  node->cap = Cap{center / center.norm(), radius};
  return SetHandle(node);
}

SetHandle SetHandle::polytope(std::vector<Vec> normals) {
  if (normals.empty()) throw DomainError("polytope needs at least one normal");
  const int n = sphere_dim(normals.front());
  for (auto& u : normals) {
    check_sphere_point(u, 1e-9);
    if (sphere_dim(u) != n) throw DomainError("polytope normals differ in dimension");
    u /= u.norm();
  }
  auto node = make_node(Kind::Polytope, n);
  node->poly = Polytope{std::move(normals)};
  return SetHandle(node);
}

SetHandle SetHandle::union_of(std::vector<SetHandle> parts) {
  if (parts.empty()) throw DomainError("union needs at least one part");
  const int n = parts.front().dim();
  for (const auto& p : parts)
    if (p.dim() != n) throw DomainError("union parts differ in dimension");
  auto node = make_node(Kind::Union, n);
  node->parts = std::move(parts);
  return SetHandle(node);
}

SetHandle SetHandle::arcs(ArcUnion arcs) {
  auto node = make_node(Kind::Arcs, 1);
  node->arcs = std::move(arcs);
  return SetHandle(node);
}

SetHandle SetHandle::complement(SetHandle inner) {
  auto node = make_node(Kind::Complement, inner.dim());
  node->parts = {std::move(inner)};
  return SetHandle(node);
}

SetHandle SetHandle::reflection(SetHandle inner) {
  auto node = make_node(Kind::Reflection, inner.dim());
  node->parts = {std::move(inner)};
  return SetHandle(node);
}

SetHandle::Kind SetHandle::kind() const { return node_->kind; }
int SetHandle::dim() const { return node_->n; }

const Cap& SetHandle::cap_data() const {
  if (kind() != Kind::Cap) throw DomainError("set is not a cap");
  return node_->cap;
}
const Polytope& SetHandle::polytope_data() const {
  if (kind() != Kind::Polytope) throw DomainError("set is not a polytope");
  return node_->poly;
}
const std::vector<SetHandle>& SetHandle::parts() const {
  if (kind() != Kind::Union) throw DomainError("set is not a union");
  return node_->parts;
}
const ArcUnion& SetHandle::arc_data() const {
  if (kind() != Kind::Arcs) throw DomainError("set is not an arc union");
  return node_->arcs;
}
const SetHandle& SetHandle::inner() const {
  if (kind() != Kind::Complement && kind() != Kind::Reflection) throw DomainError("set has no inner set");
  return node_->parts.front();
}

bool SetHandle::contains(const Vec& x) const {
  switch (kind()) {
    case Kind::Empty: return false;
    case Kind::Cap: return x.dot(node_->cap.center) > std::cos(node_->cap.radius);
    case Kind::Polytope:
      for (const auto& u : node_->poly.normals)
        if (x.dot(u) > 0.0) return false;
      return true;
    case Kind::Union:
      for (const auto& p : node_->parts)
        if (p.contains(x)) return true;
      return false;
    case Kind::Arcs: return node_->arcs.contains(circle_angle(x));
    case Kind::Complement: return !inner().contains(x);
    case Kind::Reflection: return inner().contains(-x);
  }
  return false;
}

std::optional<double> SetHandle::boundary_distance(const Vec& x) const {
  switch (kind()) {
    case Kind::Empty: return std::numeric_limits<double>::infinity();
    case Kind::Cap: return std::abs(node_->cap.radius - geodesic_distance(node_->cap.center, x));
    case Kind::Polytope: {
      double m = std::numeric_limits<double>::infinity();
      for (const auto& u : node_->poly.normals) m = std::min(m, std::abs(std::asin(std::clamp(x.dot(u), -1.0, 1.0))));
      return m;
    }
    case Kind::Union: {
      double m = std::numeric_limits<double>::infinity();
      for (const auto& p : node_->parts) {
        const auto d = p.boundary_distance(x);
        if (!d) return std::nullopt;
        if (p.contains(x)) return d;  // leaving E means leaving this part
        m = std::min(m, *d);
      }
      return m;
    }
    case Kind::Arcs: {
      const auto& au = node_->arcs;
      if (au.empty() || au.is_full()) return std::numeric_limits<double>::infinity();
      const double phi = circle_angle(x);
      double m = std::numeric_limits<double>::infinity();
      for (const auto& a : au.arcs())
        for (double end : {a.start, a.start + a.length}) {
          const double d = std::abs(wrap_angle(phi - end));
          m = std::min({m, d, 2.0 * kPi - d});
        }
      return m;
    }
    case Kind::Complement: return inner().boundary_distance(x);
    case Kind::Reflection: return inner().boundary_distance(-x);
  }
  return std::nullopt;
}

std::optional<double> SetHandle::boundary_measure() const {
  const int n = dim();
  switch (kind()) {
    case Kind::Empty: return 0.0;
    case Kind::Cap: {
      const double r = node_->cap.radius;
      if (r <= 0.0 || r >= kPi) return 0.0;
      return omega(n) * std::pow(std::sin(r), n - 1);
    }
    case Kind::Polytope: {
      if (n != 2) return std::nullopt;
      // Each face lies on the great circle u_i^⊥; its part inside the other halfspaces is an arc union.
      double total = 0.0;
      const auto& N = node_->poly.normals;
      for (std::size_t i = 0; i < N.size(); ++i) {
        Vec e = Vec::Zero(3);
        int k = 0;
        N[i].cwiseAbs().minCoeff(&k);
        e(k) = 1.0;
        e -= e.dot(N[i]) * N[i];
        e.normalize();
        const Vec f = Eigen::Vector3d(N[i]).cross(Eigen::Vector3d(e));
        GreatCircle L{e, f};
        ArcUnion tr = ArcUnion::full();
        for (std::size_t j = 0; j < N.size(); ++j) {
          if (j == i) continue;
          const double B = std::hypot(N[j].dot(e), N[j].dot(f));
          if (B < kTangencyTol) {
            if (N[j].dot(N[i]) > 0.0) continue;  // same face repeated
            tr = ArcUnion();                      // opposite halfspaces: lower-dimensional polytope
            break;
          }
          const double psi0 = std::atan2(N[j].dot(f), N[j].dot(e));
          tr = tr.intersect(ArcUnion::from_arcs({{psi0 + 0.5 * kPi, kPi}}));
        }
        total += tr.measure();
      }
      return total;
    }
    case Kind::Union: {
      double sum = 0.0;
      for (const auto& p : node_->parts) {
        const auto b = p.boundary_measure();
        if (!b) return std::nullopt;
        sum += *b;
      }
      return sum;
    }
    case Kind::Arcs: {
      const auto& au = node_->arcs;
      if (au.empty() || au.is_full()) return 0.0;
      return 2.0 * static_cast<double>(au.arc_count());
    }
    case Kind::Complement:
    case Kind::Reflection: return inner().boundary_measure();
  }
  return std::nullopt;
}

std::optional<double> SetHandle::exact_measure() const {
  const int n = dim();
  switch (kind()) {
    case Kind::Empty: return 0.0;
    case Kind::Cap: return cap_area(n, node_->cap.radius);
    case Kind::Polytope: return std::nullopt;
    case Kind::Union: {
      double sum = 0.0;
      for (const auto& p : node_->parts) {
        const auto m = p.exact_measure();
        if (!m) return std::nullopt;
        sum += *m;
      }
      return sum;
    }
    case Kind::Arcs: return node_->arcs.measure();
    case Kind::Complement: {
      const auto m = inner().exact_measure();
      if (!m) return std::nullopt;
      return sphere_surface(n) - *m;
    }
    case Kind::Reflection: return inner().exact_measure();
  }
  return std::nullopt;
}

std::optional<std::vector<Cap>> SetHandle::as_caps() const {
  switch (kind()) {
    case Kind::Empty: return std::vector<Cap>{};
    case Kind::Cap: return std::vector<Cap>{node_->cap};
    case Kind::Union: {
      std::vector<Cap> out;
      for (const auto& p : node_->parts) {
        auto c = p.as_caps();
        if (!c) return std::nullopt;
        out.insert(out.end(), c->begin(), c->end());
      }
      return out;
    }
    case Kind::Complement: {
      auto c = inner().as_caps();
      if (!c || c->size() > 1) return std::nullopt;
      if (c->empty()) {
        Vec v = Vec::Zero(dim() + 1);
        v(0) = 1.0;
        return std::vector<Cap>{Cap{v, kPi}};
      }
      return std::vector<Cap>{Cap{-c->front().center, kPi - c->front().radius}};
    }
    case Kind::Reflection: {
      auto c = inner().as_caps();
      if (!c) return std::nullopt;
      for (auto& cap : *c) cap.center = -cap.center;
      return c;
    }
    case Kind::Polytope:
    case Kind::Arcs: return std::nullopt;
  }
  return std::nullopt;
}

std::optional<ArcUnion> SetHandle::as_arcs() const {
  if (dim() != 1) return std::nullopt;
  switch (kind()) {
    case Kind::Empty: return ArcUnion();
    case Kind::Cap: {
      const double c = circle_angle(node_->cap.center), r = node_->cap.radius;
      return ArcUnion::from_arcs({{c - r, 2.0 * r}});
    }
    case Kind::Polytope: {
      ArcUnion out = ArcUnion::full();
      for (const auto& u : node_->poly.normals)
        out = out.intersect(ArcUnion::from_arcs({{circle_angle(u) + 0.5 * kPi, kPi}}));
      return out;
    }
    case Kind::Union: {
      ArcUnion out;
      for (const auto& p : node_->parts) {
        auto a = p.as_arcs();
        if (!a) return std::nullopt;
        out = out.unite(*a);
      }
      return out;
    }
    case Kind::Arcs: return node_->arcs;
    case Kind::Complement: {
      auto a = inner().as_arcs();
      if (!a) return std::nullopt;
      return a->complement();
    }
    case Kind::Reflection: {
      auto a = inner().as_arcs();
      if (!a) return std::nullopt;
      return a->shifted(kPi);
    }
  }
  return std::nullopt;
}

bool SetHandle::is_empty() const {
  switch (kind()) {
    case Kind::Empty: return true;
    case Kind::Cap: return node_->cap.radius <= 0.0;
    case Kind::Arcs: return node_->arcs.empty();
    case Kind::Union:
      return std::all_of(node_->parts.begin(), node_->parts.end(), [](const SetHandle& p) { return p.is_empty(); });
    case Kind::Complement: return inner().is_full();
    case Kind::Reflection: return inner().is_empty();
    case Kind::Polytope: return false;
  }
  return false;
}

bool SetHandle::is_full() const {
  switch (kind()) {
    case Kind::Empty: return false;
    case Kind::Cap: return false;  // misses the antipode of its center at r = π
    case Kind::Arcs: return node_->arcs.is_full();
    case Kind::Union:
      return std::any_of(node_->parts.begin(), node_->parts.end(), [](const SetHandle& p) { return p.is_full(); });
    case Kind::Complement: return inner().is_empty();
    case Kind::Reflection: return inner().is_full();
    case Kind::Polytope: return false;
  }
  return false;
}

std::string SetHandle::render() const {
  switch (kind()) {
    case Kind::Empty: return "empty:" + std::to_string(dim());
    case Kind::Cap: return "cap:" + fmt_vec(node_->cap.center) + ":" + fmt(node_->cap.radius);
    case Kind::Polytope: {
      std::string s = "poly:";
      for (std::size_t i = 0; i < node_->poly.normals.size(); ++i)
        s += (i ? ";" : "") + fmt_vec(node_->poly.normals[i]);
      return s;
    }
    case Kind::Union: {
      std::string s = "union:";
      for (std::size_t i = 0; i < node_->parts.size(); ++i) {
        std::string part = node_->parts[i].render();
        if (part.rfind("union:", 0) == 0) part = part.substr(6);  // unions flatten
        s += (i ? "+" : "") + part;
      }
      return s;
    }
    case Kind::Arcs: {
      std::string s = "arcs:";
      const auto a = node_->arcs.arcs();
      for (std::size_t i = 0; i < a.size(); ++i) s += (i ? ";" : "") + fmt(a[i].start) + "," + fmt(a[i].length);
      return s;
    }
    case Kind::Complement: return "compl:" + inner().render();
    case Kind::Reflection: return "refl:" + inner().render();
  }
  return {};
}

Cap rearrangement(int n, const SetHandle& E, const Vec& e, double measure) {
  if (E.dim() != n) throw DomainError("rearrangement: set dimension mismatch");
  check_sphere_point(e, 1e-9);
  return Cap{e / e.norm(), volume_radius(n, measure)};
}

Estimate mc_measure(const SetHandle& E, std::size_t N, const RandomStream& rng) {
  const int n = E.dim();
  const double total = sphere_surface(n);
  return mc_estimate([&](RandomStream& r) { return E.contains(sample_uniform(n, r)) ? total : 0.0; }, N, rng);
}

Estimate symmetric_overlap_measure(int n, const SetHandle& E, std::size_t N, const RandomStream& rng) {
  if (N == 0) throw DomainError("symmetric_overlap_measure needs N > 0");
  if (E.dim() != n) throw DomainError("symmetric_overlap_measure: set dimension mismatch");
  if (E.is_full() || E.is_empty()) return Estimate::exact(0.0, N);
  if (auto caps = E.as_caps(); caps && caps->size() == 1) {
    const double r = caps->front().radius;
    return Estimate::exact(cap_area(n, std::min(r, kPi - r)), N);
  }
  const double total = sphere_surface(n);
  return mc_estimate(
      [&](RandomStream& r) {
        const Vec x = sample_uniform(n, r);
        return (E.contains(-x) && !E.contains(x)) ? total : 0.0;
      },
      std::max<std::size_t>(N, 2), rng);
}

bool parts_disjoint(const SetHandle& E, std::size_t samples, const RandomStream& rng) {
  if (E.kind() != SetHandle::Kind::Union) return true;
  const auto& parts = E.parts();
  if (auto caps = E.as_caps()) {
    for (std::size_t i = 0; i < caps->size(); ++i)
      for (std::size_t j = i + 1; j < caps->size(); ++j)
        if (geodesic_distance((*caps)[i].center, (*caps)[j].center) < (*caps)[i].radius + (*caps)[j].radius - 1e-12)
          return false;
    return true;
  }
  RandomStream r = rng;
  for (std::size_t k = 0; k < samples; ++k) {
    const Vec x = sample_uniform(E.dim(), r);
    int hits = 0;
    for (const auto& p : parts) hits += p.contains(x) ? 1 : 0;
    if (hits > 1) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------------------------
// Circle traces

namespace {

// For n = 1 the circle is S¹ itself; map standard angles to the circle parameter.
ArcUnion standard_to_circle(const ArcUnion& a, const GreatCircle& L) {
  const double ae = std::atan2(L.e(1), L.e(0));
  const bool positive = L.e(0) * L.f(1) - L.e(1) * L.f(0) > 0.0;
  // angle(γ(φ)) = ae + φ (positive) or ae − φ.
  return positive ? a.shifted(-ae) : a.shifted(-ae).mirrored();
}

CircleTrace trace_rec(const SetHandle& E, const GreatCircle& L) {
  using K = SetHandle::Kind;
  CircleTrace out;
  switch (E.kind()) {
    case K::Empty: return out;
    case K::Cap: {
      const Cap& c = E.cap_data();
      const double ce = c.center.dot(L.e), cf = c.center.dot(L.f);
      const double A = std::hypot(ce, cf), cr = std::cos(c.radius);
      out.degenerate = std::abs(A - std::abs(cr)) < kTangencyTol;
      if (A <= cr) return out;
      if (A <= -cr) {
        out.arcs = ArcUnion::full();
        return out;
      }
      const double phi0 = std::atan2(cf, ce), half = std::acos(std::clamp(cr / A, -1.0, 1.0));
      out.arcs = ArcUnion::from_arcs({{phi0 - half, 2.0 * half}});
      return out;
    }
    case K::Polytope: {
      out.arcs = ArcUnion::full();
      for (const auto& u : E.polytope_data().normals) {
        const double ue = u.dot(L.e), uf = u.dot(L.f);
        const double B = std::hypot(ue, uf);
        if (B < kTangencyTol) {
          out.degenerate = true;
          continue;
        }
        const double psi0 = std::atan2(uf, ue);
        out.arcs = out.arcs.intersect(ArcUnion::from_arcs({{psi0 + 0.5 * kPi, kPi}}));
      }
      return out;
    }
    case K::Union: {
      for (const auto& p : E.parts()) {
        const CircleTrace t = trace_rec(p, L);
        out.arcs = out.arcs.unite(t.arcs);
        out.degenerate = out.degenerate || t.degenerate;
      }
      return out;
    }
    case K::Arcs: {
      out.arcs = standard_to_circle(E.arc_data(), L);
      return out;
    }
    case K::Complement: {
      const CircleTrace t = trace_rec(E.inner(), L);
      return {t.arcs.complement(), t.degenerate};
    }
    case K::Reflection: {
      const CircleTrace t = trace_rec(E.inner(), L);
      return {t.arcs.shifted(-kPi), t.degenerate};
    }
  }
  return out;
}

}  // namespace

CircleTrace circle_trace(const SetHandle& E, const GreatCircle& L) {
  if (L.e.size() != E.dim() + 1) throw DomainError("circle_trace: dimension mismatch");
  CircleTrace t = trace_rec(E, L);
  if (t.arcs.shortest_piece() < kTangencyTol) t.degenerate = true;
  return t;
}

CircleTrace circle_trace_grid(const SetHandle& E, const GreatCircle& L, std::size_t grid) {
  if (grid < 8) throw DomainError("circle_trace_grid needs at least 8 probes");
  const double h = 2.0 * kPi / static_cast<double>(grid);
  std::vector<bool> in(grid);
  for (std::size_t k = 0; k < grid; ++k) in[k] = E.contains(L.at(h * static_cast<double>(k)));
  std::vector<double> ups, downs;  // entry and exit angles
  for (std::size_t k = 0; k < grid; ++k) {
    const std::size_t k1 = (k + 1) % grid;
    if (in[k] == in[k1]) continue;
    double lo = h * static_cast<double>(k), hi = lo + h;
    const bool start_in = in[k];
    while (hi - lo > 1e-12) {
      const double mid = 0.5 * (lo + hi);
      (E.contains(L.at(mid)) == start_in ? lo : hi) = mid;
    }
    (start_in ? downs : ups).push_back(0.5 * (lo + hi));
  }
  CircleTrace out;
  if (ups.empty()) {
    out.arcs = in[0] ? ArcUnion::full() : ArcUnion();
    return out;
  }
  std::vector<Arc> arcs;
  for (double u : ups) {
    // Matching exit: first down after u (cyclically).
    double best = std::numeric_limits<double>::infinity();
    for (double d : downs) best = std::min(best, wrap_angle(d - u));
    arcs.push_back({u, best});
  }
  out.arcs = ArcUnion::from_arcs(arcs);
  out.degenerate = out.arcs.shortest_piece() < kTangencyTol;
  return out;
}

CrossingCount crossing_count(const SetHandle& E, const GreatCircle& L) {
  const CircleTrace t = circle_trace(E, L);
  CrossingCount c;
  c.degenerate = t.degenerate;
  if (t.arcs.empty() || t.arcs.is_full()) return c;
  c.count = 2 * static_cast<int>(t.arcs.arc_count());
  return c;
}

}  // namespace spherefrac
