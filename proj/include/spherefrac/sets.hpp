#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "spherefrac/great_circle.hpp"
#include "spherefrac/integration.hpp"
#include "spherefrac/sphere_geometry.hpp"

namespace spherefrac {

/// Open cap {x : d(center, x) < radius}.
struct Cap {
  Vec center;
  double radius;
};

/// {x : x·u ≤ 0 for every outward normal u}.
struct Polytope {
  std::vector<Vec> normals;
};

/// Immutable handle to a Borel subset of Sⁿ.
///
/// Concrete forms are caps, polytopes, unions of parts (disjointness is the caller's promise), arc
/// unions on S¹, and the derived forms Complement and Reflection (x ↦ −x). Handles are cheap to copy
/// and safe to share between threads.
class SetHandle {
 public:
  enum class Kind { Empty, Cap, Polytope, Union, Arcs, Complement, Reflection };

  static SetHandle empty(int n);
  static SetHandle full(int n) { return complement(empty(n)); }
  static SetHandle cap(Vec center, double radius);
  static SetHandle polytope(std::vector<Vec> normals);
  static SetHandle union_of(std::vector<SetHandle> parts);
  static SetHandle arcs(ArcUnion arcs);
  static SetHandle complement(SetHandle inner);
  static SetHandle reflection(SetHandle inner);

  Kind kind() const;
  int dim() const;

  const Cap& cap_data() const;
  const Polytope& polytope_data() const;
  const std::vector<SetHandle>& parts() const;
  const ArcUnion& arc_data() const;
  const SetHandle& inner() const;

  bool contains(const Vec& x) const;

  /// Lower bound on the distance from x to the other side of the boundary; nullopt when unavailable.
  std::optional<double> boundary_distance(const Vec& x) const;
  /// H^{n−1}(∂E) when known in closed form.
  std::optional<double> boundary_measure() const;
  /// H^n(E) when known in closed form.
  std::optional<double> exact_measure() const;
  /// E as a disjoint family of caps (after canonicalizing complements and reflections of caps).
  std::optional<std::vector<Cap>> as_caps() const;
  /// For n = 1: E as an arc union in the standard angle of R².
  std::optional<ArcUnion> as_arcs() const;

  bool is_empty() const;
  bool is_full() const;

  /// Text form accepted by the CLI set parser.
  std::string render() const;

  struct Node;  // opaque

 private:
  explicit SetHandle(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

inline bool membership(const SetHandle& E, const Vec& x) { return E.contains(x); }
inline std::optional<double> boundary_distance(const SetHandle& E, const Vec& x) { return E.boundary_distance(x); }

/// Cap(e, a^{−1}(measure)).
Cap rearrangement(int n, const SetHandle& E, const Vec& e, double measure);

/// ω_{n+1}·(fraction of uniform points in E).
Estimate mc_measure(const SetHandle& E, std::size_t N, const RandomStream& rng);

/// H^n((−E) ∩ E^c); closed form for a cap, Monte Carlo otherwise.
Estimate symmetric_overlap_measure(int n, const SetHandle& E, std::size_t N, const RandomStream& rng);

/// Sampling check that no point lies in two parts of a union. Cap pairs are checked exactly.
bool parts_disjoint(const SetHandle& E, std::size_t samples, const RandomStream& rng);

struct CircleTrace {
  ArcUnion arcs;
  bool degenerate = false;
};

inline constexpr double kTangencyTol = 1e-9;

/// γ_L^{−1}(E ∩ L), analytic for every set form.
CircleTrace circle_trace(const SetHandle& E, const GreatCircle& L);

/// Membership-only trace: sign-change probes on a grid, refined by bisection to 1e-12.
CircleTrace circle_trace_grid(const SetHandle& E, const GreatCircle& L, std::size_t grid = 4096);

struct CrossingCount {
  int count = 0;
  bool degenerate = false;
};

/// H⁰(∂E ∩ L).
CrossingCount crossing_count(const SetHandle& E, const GreatCircle& L);

}  // namespace spherefrac
