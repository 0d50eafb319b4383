#include "spherefrac/great_circle.hpp"

#include <algorithm>
#include <limits>

namespace spherefrac {

namespace {
constexpr double kTwoPi = 2.0 * kPi;
}

double wrap_angle(double phi) {
  double r = std::fmod(phi, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

ArcUnion ArcUnion::from_pieces(std::vector<Piece> p) {
  std::sort(p.begin(), p.end(), [](const Piece& x, const Piece& y) { return x.a < y.a; });
  ArcUnion out;
  for (const auto& q : p) {
    if (!(q.b > q.a)) continue;
    if (!out.pieces_.empty() && q.a <= out.pieces_.back().b)
      out.pieces_.back().b = std::max(out.pieces_.back().b, q.b);
    else
      out.pieces_.push_back(q);
  }
  return out;
}

static void append_arc(std::vector<ArcUnion::Piece>& p, const Arc& arc) {
  if (!(arc.length > 0.0)) return;
  if (arc.length >= kTwoPi) {
    p.push_back({0.0, kTwoPi});
    return;
  }
  const double s = wrap_angle(arc.start), e = s + arc.length;
  if (e <= kTwoPi) {
    p.push_back({s, e});
  } else {
    p.push_back({s, kTwoPi});
    p.push_back({0.0, e - kTwoPi});
  }
}

ArcUnion ArcUnion::from_arcs(const std::vector<Arc>& arcs) {
  std::vector<Piece> p;
  for (const auto& a : arcs) append_arc(p, a);
  return from_pieces(std::move(p));
}

ArcUnion ArcUnion::full() { return from_pieces({{0.0, kTwoPi}}); }

ArcUnion ArcUnion::from_disjoint_arcs(const std::vector<Arc>& arcs, double tol) {
  double total = 0.0;
  std::vector<Piece> p;
  for (const auto& a : arcs) {
    if (!(a.length > 0.0) || !std::isfinite(a.start) || !std::isfinite(a.length))
      throw DomainError("arc lengths must be positive and finite");
    total += a.length;
    append_arc(p, a);
  }
  if (total > kTwoPi + tol) throw DomainError("arcs overlap: total length exceeds 2*pi");
  std::sort(p.begin(), p.end(), [](const Piece& x, const Piece& y) { return x.a < y.a; });
  for (std::size_t k = 1; k < p.size(); ++k)
    if (p[k].a < p[k - 1].b - tol) throw DomainError("arcs overlap");
  return from_pieces(std::move(p));
}

bool ArcUnion::contains(double phi) const {
  const double x = wrap_angle(phi);
  for (const auto& q : pieces_)
    if (q.a <= x && x < q.b) return true;
  return false;
}

bool ArcUnion::is_full() const { return pieces_.size() == 1 && pieces_[0].a <= 0.0 && pieces_[0].b >= kTwoPi; }

double ArcUnion::measure() const {
  double m = 0.0;
  for (const auto& q : pieces_) m += q.b - q.a;
  return m;
}

std::vector<Arc> ArcUnion::arcs() const {
  std::vector<Arc> out;
  if (pieces_.empty()) return out;
  if (is_full()) return {{0.0, kTwoPi}};
  const bool wraps = pieces_.size() >= 2 && pieces_.front().a <= 0.0 && pieces_.back().b >= kTwoPi;
  const std::size_t first = wraps ? 1 : 0, last = wraps ? pieces_.size() - 1 : pieces_.size();
  for (std::size_t k = first; k < last; ++k) out.push_back({pieces_[k].a, pieces_[k].b - pieces_[k].a});
  if (wraps)
    out.push_back({pieces_.back().a, pieces_.back().b - pieces_.back().a + pieces_.front().b - pieces_.front().a});
  return out;
}

double ArcUnion::shortest_piece() const {
  if (pieces_.empty() || is_full()) return std::numeric_limits<double>::infinity();
  double m = std::numeric_limits<double>::infinity();
  for (const auto& a : arcs()) m = std::min(m, a.length);
  for (const auto& g : gaps()) m = std::min(m, g.length);
  return m;
}

ArcUnion ArcUnion::complement() const {
  std::vector<Piece> out;
  double cursor = 0.0;
  for (const auto& q : pieces_) {
    if (q.a > cursor) out.push_back({cursor, q.a});
    cursor = std::max(cursor, q.b);
  }
  if (cursor < kTwoPi) out.push_back({cursor, kTwoPi});
  return from_pieces(std::move(out));
}

ArcUnion ArcUnion::unite(const ArcUnion& o) const {
  std::vector<Piece> p = pieces_;
  p.insert(p.end(), o.pieces_.begin(), o.pieces_.end());
  return from_pieces(std::move(p));
}

ArcUnion ArcUnion::intersect(const ArcUnion& o) const {
  std::vector<Piece> out;
  std::size_t i = 0, j = 0;
  while (i < pieces_.size() && j < o.pieces_.size()) {
    const double a = std::max(pieces_[i].a, o.pieces_[j].a), b = std::min(pieces_[i].b, o.pieces_[j].b);
    if (b > a) out.push_back({a, b});
    (pieces_[i].b < o.pieces_[j].b ? i : j)++;
  }
  return from_pieces(std::move(out));
}

ArcUnion ArcUnion::shifted(double c) const {
  if (is_full()) return *this;
  std::vector<Arc> a = arcs();
  for (auto& x : a) x.start += c;
  return from_arcs(a);
}

ArcUnion ArcUnion::mirrored() const {
  if (is_full()) return *this;
  std::vector<Arc> a = arcs();
  for (auto& x : a) x.start = -x.start - x.length;
  return from_arcs(a);
}

}  // namespace spherefrac
