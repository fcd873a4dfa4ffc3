#pragma once

// The configuration {xy} ∪ {x + f(y) : f ∈ F} for a finite family F of
// polynomials with zero constant term, and scans for monochromatic copies.

#include "coloring.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace monochrome {

/// A polynomial in t with f(0) = 0. The zero polynomial has no terms.
class ZeroConstPoly {
 public:
  ZeroConstPoly() = default;

  /// Throws if a degree-0 term is given; zero coefficients are dropped.
  explicit ZeroConstPoly(std::map<unsigned, Element> terms) {
    for (auto& [deg, coef] : terms) {
      if (coef.is_zero()) continue;
      if (deg == 0) throw std::invalid_argument("polynomial must have zero constant term");
      if (!terms_.empty() && !(terms_.begin()->second.ring() == coef.ring())) throw RingMismatch();
      terms_.emplace(deg, coef);
    }
  }

  static ZeroConstPoly monomial(Element coef, unsigned degree) { return ZeroConstPoly({{degree, std::move(coef)}}); }

  const std::map<unsigned, Element>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  /// -1 for the zero polynomial.
  int degree() const { return terms_.empty() ? -1 : static_cast<int>(terms_.rbegin()->first); }

  /// Coefficient of t^j (zero when absent).
  Element coefficient(unsigned j, const RingSpec& ring) const {
    auto it = terms_.find(j);
    return it == terms_.end() ? Element::zero(ring) : it->second;
  }

  std::string to_string() const;

  friend bool operator==(const ZeroConstPoly&, const ZeroConstPoly&) = default;

 private:
  std::map<unsigned, Element> terms_;
};

inline Element eval_poly(const ZeroConstPoly& f, const Element& y) {
  Element acc = Element::zero(y.ring());
  // Horner from the top degree down to t^1, then one final multiplication.
  if (f.is_zero()) return acc;
  unsigned prev = f.terms().rbegin()->first;
  for (auto it = f.terms().rbegin(); it != f.terms().rend(); ++it) {
    if (!(it->second.ring() == y.ring())) throw RingMismatch();
    acc = acc * y.pow(prev - it->first) + it->second;
    prev = it->first;
  }
  return acc * y.pow(prev);
}

/// Canonical order on polynomials: by degree, then coefficient vectors c_1, c_2, ...
inline bool poly_less(const ZeroConstPoly& a, const ZeroConstPoly& b) {
  if (a.degree() != b.degree()) return a.degree() < b.degree();
  if (a.is_zero()) return false;
  const RingSpec ring = a.terms().begin()->second.ring();
  for (int j = 1; j <= a.degree(); ++j) {
    const int c = compare_canonical(a.coefficient(j, ring), b.coefficient(j, ring));
    if (c) return c < 0;
  }
  return false;
}

class PolyFamily {
 public:
  explicit PolyFamily(std::vector<ZeroConstPoly> polys) : polys_(std::move(polys)) {
    if (polys_.empty()) throw std::invalid_argument("polynomial family must be nonempty");
    std::sort(polys_.begin(), polys_.end(), poly_less);
    polys_.erase(std::unique(polys_.begin(), polys_.end()), polys_.end());
  }

  const std::vector<ZeroConstPoly>& polys() const { return polys_; }
  std::size_t size() const { return polys_.size(); }
  int max_degree() const { return polys_.back().degree(); }

  std::string to_string() const {
    std::string out;
    for (const auto& f : polys_) out += (out.empty() ? "" : "; ") + f.to_string();
    return out;
  }

 private:
  std::vector<ZeroConstPoly> polys_;
};

inline std::string ZeroConstPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [deg, coef] = *it;
    std::string mono;
    const std::string lit = coef.to_string();
    if (!coef.is_one()) {
      const bool simple = lit.find_first_of("+-x", 1) == std::string::npos && lit[0] != 'x';
      mono = simple ? lit : "(" + lit + ")";
      if (lit == "-1") mono = "-";
    }
    mono += "t";
    if (deg > 1) mono += "^" + std::to_string(deg);
    if (!out.empty() && mono[0] != '-') out += "+";
    out += mono;
  }
  return out;
}

namespace detail {

// Splits at top-level '+'/'-' signs, keeping each sign with its term.
inline std::vector<std::string> top_level_terms(const std::string& s) {
  std::vector<std::string> terms;
  std::string cur;
  int depth = 0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    const char c = s[k];
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (depth < 0) throw ParseError("unbalanced parentheses in '" + s + "'");
    if ((c == '+' || c == '-') && depth == 0 && k > 0 && s[k - 1] != '^' && s[k - 1] != '(') {
      terms.push_back(cur);
      cur.clear();
    }
    cur.push_back(c);
  }
  if (depth != 0) throw ParseError("unbalanced parentheses in '" + s + "'");
  terms.push_back(cur);
  return terms;
}

}  // namespace detail

/// Parses one polynomial over `t`, e.g. `2t^2+t`, `(1+i)t`, `(x+1)t^3`, `0`.
inline ZeroConstPoly parse_poly(const RingSpec& ring, std::string_view text) {
  const std::string s = detail::strip_spaces(text);
  if (s.empty()) throw ParseError("empty polynomial");
  std::map<unsigned, Element> terms;
  for (std::string term : detail::top_level_terms(s)) {
    bool neg = false;
    if (!term.empty() && (term[0] == '+' || term[0] == '-')) {
      neg = term[0] == '-';
      term.erase(0, 1);
    }
    if (term.empty()) throw ParseError("bad polynomial '" + s + "'");
    const auto tpos = term.rfind('t');
    std::string coef_text = term;
    unsigned degree = 0;
    if (tpos != std::string::npos && term.find(')', tpos) == std::string::npos) {
      coef_text = term.substr(0, tpos);
      const std::string rest = term.substr(tpos + 1);
      degree = 1;
      if (!rest.empty()) {
        if (rest[0] != '^') throw ParseError("bad exponent in '" + term + "'");
        degree = static_cast<unsigned>(detail::parse_u64(std::string_view(rest).substr(1), "exponent"));
        if (degree > 64) throw ParseError("exponent too large in '" + term + "'");
      }
    }
    if (coef_text.size() >= 2 && coef_text.front() == '(' && coef_text.back() == ')')
      coef_text = coef_text.substr(1, coef_text.size() - 2);
    Element coef = coef_text.empty() ? Element::one(ring) : parse_element(ring, coef_text);
    if (neg) coef = -coef;
    if (degree == 0) {
      if (!coef.is_zero()) throw ParseError("polynomial '" + s + "' has a nonzero constant term");
      continue;
    }
    auto [it, fresh] = terms.emplace(degree, coef);
    if (!fresh) it->second += coef;
  }
  return ZeroConstPoly(std::move(terms));
}

/// Semicolon-separated polynomials: `t; 0; 2t^2+t`.
inline PolyFamily parse_family(const RingSpec& ring, std::string_view text) {
  std::vector<ZeroConstPoly> polys;
  std::string cur;
  for (char c : text) {
    if (c == ';') {
      polys.push_back(parse_poly(ring, cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  polys.push_back(parse_poly(ring, cur));
  return PolyFamily(std::move(polys));
}

struct PatternInstance {
  Element x, y;
  /// [x*y] followed by x + f(y) in family order, first occurrences only.
  std::vector<Element> elements;

  bool degenerate() const { return elements.size() == 1; }
};

namespace detail {

inline void push_unique(std::vector<Element>& v, Element e) {
  if (std::find(v.begin(), v.end(), e) == v.end()) v.push_back(std::move(e));
}

inline PatternInstance make_instance(const Element& x, const Element& y, const std::vector<Element>& f_values) {
  PatternInstance inst{x, y, {}};
  inst.elements.reserve(f_values.size() + 1);
  inst.elements.push_back(x * y);
  for (const auto& fy : f_values) push_unique(inst.elements, x + fy);
  return inst;
}

inline std::vector<Element> family_values(const PolyFamily& F, const Element& y) {
  std::vector<Element> out;
  out.reserve(F.size());
  for (const auto& f : F.polys()) out.push_back(eval_poly(f, y));
  return out;
}

}  // namespace detail

inline PatternInstance pattern_elements(const Element& x, const Element& y, const PolyFamily& F) {
  if (!(x.ring() == y.ring())) throw RingMismatch();
  return detail::make_instance(x, y, detail::family_values(F, y));
}

struct PatternColor {
  enum class Status { Monochromatic, NotMonochromatic, OutOfWindow };
  Status status;
  Coloring::Color color = 0;  // set only when Monochromatic

  bool monochromatic() const { return status == Status::Monochromatic; }
  friend bool operator==(const PatternColor&, const PatternColor&) = default;
};

namespace detail {

// With `require_in_window` false, elements outside the window are ignored and
// only the remaining ones must agree; an instance with nothing inside is OutOfWindow.
inline PatternColor instance_color(const Coloring& c, const std::vector<Element>& elements, bool require_in_window = true) {
  Coloring::Color seen = 0;
  bool mixed = false;
  for (const auto& e : elements) {
    const auto col = c.color_of(e);
    if (!col) {
      if (require_in_window) return {PatternColor::Status::OutOfWindow};
      continue;
    }
    if (seen == 0) seen = *col;
    else if (seen != *col) mixed = true;
  }
  if (seen == 0) return {PatternColor::Status::OutOfWindow};
  if (mixed) return {PatternColor::Status::NotMonochromatic};
  return {PatternColor::Status::Monochromatic, seen};
}

}  // namespace detail

inline PatternColor pattern_color(const Coloring& c, const Element& x, const Element& y, const PolyFamily& F) {
  if (!(x.ring() == c.window().spec()) || !(y.ring() == c.window().spec())) throw RingMismatch();
  return detail::instance_color(c, pattern_elements(x, y, F).elements);
}

struct ScanConstraints {
  std::vector<Element> exclude_y;
  std::vector<Element> exclude_x;
  bool require_in_window = true;
  bool forbid_degenerate = true;

  /// exclude_y = {0, 1}, exclude_x = {0}, both flags on.
  static ScanConstraints defaults(const RingSpec& ring) {
    return {{Element::zero(ring), Element::one(ring)}, {Element::zero(ring)}, true, true};
  }

  bool allows_y(const Element& y) const { return std::find(exclude_y.begin(), exclude_y.end(), y) == exclude_y.end(); }
  bool allows_x(const Element& x) const { return std::find(exclude_x.begin(), exclude_x.end(), x) == exclude_x.end(); }
};

struct Witness {
  Element x, y;
  Coloring::Color color;
  std::vector<Element> elements;
};

namespace detail {

// Visits every (y, x) pair with y in [y_begin, y_end) in scan order;
// `visit` returns false to stop.
template <typename Visit>
bool scan_range(const Coloring& c, const PolyFamily& F, const ScanConstraints& k, std::size_t y_begin, std::size_t y_end,
                Visit&& visit) {
  const Window& w = c.window();
  for (std::size_t yi = y_begin; yi < y_end; ++yi) {
    const Element& y = w[yi];
    if (!k.allows_y(y)) continue;
    const auto fy = family_values(F, y);
    for (std::size_t xi = 0; xi < w.size(); ++xi) {
      const Element& x = w[xi];
      if (!k.allows_x(x)) continue;
      PatternInstance inst = make_instance(x, y, fy);
      if (k.forbid_degenerate && inst.degenerate()) continue;
      const PatternColor pc = instance_color(c, inst.elements, k.require_in_window);
      if (!pc.monochromatic()) continue;
      if (!visit(Witness{x, y, pc.color, std::move(inst.elements)})) return false;
    }
  }
  return true;
}

}  // namespace detail

/// Streams monochromatic instances in (index(y), index(x)) order; `sink`
/// returns false to stop early.
template <typename Sink>
void for_each_witness(const Coloring& c, const PolyFamily& F, const ScanConstraints& k, Sink&& sink) {
  detail::scan_range(c, F, k, 0, c.window().size(), sink);
}

/// All witnesses in scan order, truncated to `limit`. With jobs > 1 the y range
/// is split into contiguous chunks and the results concatenated in order.
inline std::vector<Witness> witness_scan(const Coloring& c, const PolyFamily& F, const ScanConstraints& k,
                                         std::optional<std::size_t> limit = std::nullopt, unsigned jobs = 1) {
  const std::size_t n = c.window().size();
  std::vector<Witness> out;
  if (limit && *limit == 0) return out;
  auto collect = [&](std::vector<Witness>& dst, std::size_t b, std::size_t e) {
    detail::scan_range(c, F, k, b, e, [&](Witness&& wt) {
      dst.push_back(std::move(wt));
      return !limit || dst.size() < *limit;
    });
  };
  if (jobs <= 1 || n < 2 * jobs) {
    collect(out, 0, n);
    return out;
  }
  std::vector<std::vector<Witness>> parts(jobs);
  std::vector<std::thread> workers;
  for (unsigned j = 0; j < jobs; ++j) {
    const std::size_t b = n * j / jobs, e = n * (j + 1) / jobs;
    workers.emplace_back([&, j, b, e] { collect(parts[j], b, e); });
  }
  for (auto& t : workers) t.join();
  for (auto& p : parts)
    for (auto& wt : p) {
      if (limit && out.size() >= *limit) return out;
      out.push_back(std::move(wt));
    }
  return out;
}

/// X_y^i for i = 1..r (entry i-1): the window elements x whose instance with
/// this y lies in the window and is entirely colored i.
inline std::vector<std::vector<Element>> abundance_profile(const Coloring& c, const PolyFamily& F, const Element& y,
                                                           const ScanConstraints& k) {
  if (!(y.ring() == c.window().spec())) throw RingMismatch();
  if (!k.allows_y(y)) throw std::invalid_argument("y = " + y.to_string() + " is excluded by the scan constraints");
  std::vector<std::vector<Element>> out(c.colors_count());
  const auto fy = detail::family_values(F, y);
  for (const auto& x : c.window().elements()) {
    const auto pc = detail::instance_color(c, detail::make_instance(x, y, fy).elements);
    if (pc.monochromatic()) out[pc.color - 1].push_back(x);
  }
  return out;
}

}  // namespace monochrome
