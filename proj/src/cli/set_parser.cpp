#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>

#include "spherefrac/cli.hpp"

namespace spherefrac::cli {

namespace {

class Parser {
 public:
  Parser(const std::string& text, std::vector<std::string>* warnings) : s_(text), warn_(warnings) {}

  SetHandle set() {
    const std::size_t start = pos_;
    const std::string kw = keyword();
    if (kw == "cap") {
      Vec c = vector();
      expect(':');
      const double r = number();
      if (!(r >= 0.0 && r <= kPi)) fail("cap radius must lie in [0, pi]", start);
      return SetHandle::cap(std::move(c), r);
    }
    if (kw == "poly") {
      std::vector<Vec> normals{vector()};
      while (peek(';')) {
        ++pos_;
        normals.push_back(vector());
      }
      for (const auto& u : normals)
        if (u.size() != normals.front().size()) fail("polytope normals differ in length", start);
      return SetHandle::polytope(std::move(normals));
    }
    if (kw == "union") {
      std::vector<SetHandle> parts{set()};
      while (peek('+')) {
        ++pos_;
        parts.push_back(set());
      }
      for (const auto& p : parts)
        if (p.dim() != parts.front().dim()) fail("union parts live on spheres of different dimension", start);
      return SetHandle::union_of(std::move(parts));
    }
    if (kw == "compl") return SetHandle::complement(set());
    if (kw == "refl") return SetHandle::reflection(set());
    if (kw == "arcs") {
      std::vector<Arc> arcs;
      if (!at_end() && !peek('+')) {
        do {
          if (peek(';')) ++pos_;
          const double a = number();
          expect(',');
          const std::size_t lpos = pos_;
          const double len = number();
          if (!(len > 0.0)) fail("arc length must be positive", lpos);
          arcs.push_back({a, len});
        } while (peek(';'));
      }
      try {
        return SetHandle::arcs(ArcUnion::from_disjoint_arcs(arcs));
      } catch (const DomainError& e) {
        fail(e.what(), start);
      }
    }
    if (kw == "empty") {
      const std::size_t npos = pos_;
      const double n = number();
      if (!(n >= 1.0) || n != std::floor(n)) fail("dimension must be a positive integer", npos);
      return SetHandle::empty(static_cast<int>(n));
    }
    fail("unknown set kind '" + kw + "' (expected cap, poly, union, compl, refl, arcs or empty)", start);
  }

  Vec vector() {
    const std::size_t start = pos_;
    std::vector<double> v{number()};
    while (peek(',')) {
      ++pos_;
      v.push_back(number());
    }
    if (v.size() < 2) fail("a point of S^n needs at least 2 coordinates", start);
    Vec out = Eigen::Map<Vec>(v.data(), static_cast<Eigen::Index>(v.size()));
    const double norm = out.norm();
    if (!(norm > 0.0)) fail("zero vector", start);
    if (std::abs(norm - 1.0) > 1e-6 && warn_) {
      char buf[128];
      std::snprintf(buf, sizeof buf, "vector at position %zu has norm %.17g; normalized", start, norm);
      warn_->push_back(buf);
    }
    return out / norm;
  }

  double number() {
    const char* b = s_.data() + pos_;
    const char* e = s_.data() + s_.size();
    double v = 0.0;
    const auto res = std::from_chars(b, e, v);
    if (res.ec != std::errc() || !std::isfinite(v)) fail("expected a number", pos_);
    pos_ += static_cast<std::size_t>(res.ptr - b);
    return v;
  }

  std::string keyword() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (pos_ == start) fail("expected a set kind", start);
    std::string kw = s_.substr(start, pos_ - start);
    expect(':');
    return kw;
  }

  void expect(char c) {
    if (!peek(c)) fail(std::string("expected '") + c + "'", pos_);
    ++pos_;
  }
  bool peek(char c) const { return pos_ < s_.size() && s_[pos_] == c; }
  bool at_end() const { return pos_ >= s_.size(); }
  std::size_t pos() const { return pos_; }

  [[noreturn]] static void fail(const std::string& what, std::size_t at) { throw ParseError(what, at); }

 private:
  const std::string& s_;
  std::vector<std::string>* warn_;
  std::size_t pos_ = 0;
};

}  // namespace

SetHandle parse_set(const std::string& desc, std::vector<std::string>* warnings) {
  Parser p(desc, warnings);
  SetHandle E = p.set();
  if (!p.at_end()) Parser::fail("unexpected trailing input", p.pos());
  return E;
}

ParsedFunction parse_function(const std::string& desc, std::vector<std::string>* warnings) {
  const auto colon = desc.find(':');
  if (colon == std::string::npos) throw ParseError("expected '<kind>:<argument>'", 0);
  const std::string kind = desc.substr(0, colon);
  const std::string arg = desc.substr(colon + 1);
  ParsedFunction out;
  auto parse_vec = [&] {
    Parser p(arg, warnings);
    try {
      Vec e = p.vector();
      if (!p.at_end()) Parser::fail("unexpected trailing input", p.pos());
      return e;
    } catch (const ParseError& e) {
      throw ParseError(std::string(e.what()).substr(std::string(e.what()).find(": ") + 2), e.position + colon + 1);
    }
  };
  if (kind == "linear" || kind == "abs") {
    const Vec e = parse_vec();
    const bool absval = kind == "abs";
    out.f = [e, absval](const Vec& x) {
      const double v = x.dot(e);
      return absval ? std::abs(v) : v;
    };
    out.dim = static_cast<int>(e.size()) - 1;
    out.lipschitz = 1.0;
    std::string c = kind + ":";
    for (Eigen::Index i = 0; i < e.size(); ++i) {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", e(i));
      c += (i ? "," : "") + std::string(buf);
    }
    out.canonical = c;
    return out;
  }
  if (kind == "const") {
    Parser p(arg, warnings);
    double c;
    try {
      c = p.number();
      if (!p.at_end()) Parser::fail("unexpected trailing input", p.pos());
    } catch (const ParseError& e) {
      throw ParseError("expected a number", e.position + colon + 1);
    }
    out.f = [c](const Vec&) { return c; };
    out.lipschitz = 0.0;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", c);
    out.canonical = "const:" + std::string(buf);
    return out;
  }
  if (kind == "indicator") {
    SetHandle E = [&] {
      try {
        return parse_set(arg, warnings);
      } catch (const ParseError& e) {
        throw ParseError(std::string(e.what()).substr(std::string(e.what()).find(": ") + 2), e.position + colon + 1);
      }
    }();
    out.f = [E](const Vec& x) { return E.contains(x) ? 1.0 : 0.0; };
    out.dim = E.dim();
    out.canonical = "indicator:" + E.render();
    return out;
  }
  throw ParseError("unknown function kind '" + kind + "' (expected linear, abs, const or indicator)", 0);
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::optional<std::uint64_t> parse_seed(const std::string& text) {
  if (text.empty()) return std::nullopt;
  int base = 10;
  std::size_t off = 0;
  if (text.size() > 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X')) {
    base = 16;
    off = 2;
  }
  std::uint64_t v = 0;
  const char* b = text.data() + off;
  const char* e = text.data() + text.size();
  const auto res = std::from_chars(b, e, v, base);
  if (res.ec != std::errc() || res.ptr != e) return std::nullopt;
  return v;
}

}  // namespace spherefrac::cli
