#pragma once

#include <cstddef>
#include <vector>

#include "spherefrac/sphere_geometry.hpp"

namespace spherefrac {

/// Sⁿ ∩ L for a 2-plane L with orthonormal basis (e, f); γ(φ) = cos φ·e + sin φ·f has unit speed.
struct GreatCircle {
  Vec e;
  Vec f;

  Vec at(double phi) const { return std::cos(phi) * e + std::sin(phi) * f; }
  int dim() const { return static_cast<int>(e.size()) - 1; }
};

/// One arc of S¹: [start, start + length) with start in [0, 2π).
struct Arc {
  double start;
  double length;
};

/// Finite union of arcs of S¹, kept as sorted disjoint intervals of [0, 2π].
///
/// Touching intervals are merged; an arc that wraps through 0 is stored as two intervals and
/// reported as one arc.
class ArcUnion {
 public:
  ArcUnion() = default;
  static ArcUnion from_arcs(const std::vector<Arc>& arcs);
  static ArcUnion full();
  /// Throws DomainError when the given arcs overlap.
  static ArcUnion from_disjoint_arcs(const std::vector<Arc>& arcs, double tol = 1e-12);

  bool contains(double phi) const;
  bool empty() const { return pieces_.empty(); }
  bool is_full() const;
  double measure() const;

  /// Maximal arcs on the circle (wrap-around joined); the full circle is the single arc {0, 2π}.
  std::vector<Arc> arcs() const;
  /// Maximal gaps (arcs of the complement).
  std::vector<Arc> gaps() const { return complement().arcs(); }
  std::size_t arc_count() const { return arcs().size(); }
  /// Shortest arc or gap; +∞ when empty or full.
  double shortest_piece() const;

  ArcUnion complement() const;
  ArcUnion unite(const ArcUnion& o) const;
  ArcUnion intersect(const ArcUnion& o) const;
  /// {φ + c}.
  ArcUnion shifted(double c) const;
  /// {−φ}.
  ArcUnion mirrored() const;

  struct Piece {
    double a, b;
  };
  const std::vector<Piece>& pieces() const { return pieces_; }

 private:
  static ArcUnion from_pieces(std::vector<Piece> p);
  std::vector<Piece> pieces_;
};

/// φ reduced to [0, 2π).
double wrap_angle(double phi);

}  // namespace spherefrac
