#pragma once

// Brute-force reference computations for the tests. They only use ring
// arithmetic and string keys; nothing here goes through the pattern, search
// or Hales–Jewett code paths they are compared against.

#include <monochrome/ring.hpp>
#include <monochrome/window.hpp>
#include <monochrome/coloring.hpp>

#include <map>
#include <set>
#include <string>
#include <vector>

namespace oracle {

using monochrome::Element;

/// f given as (degree, coefficient) pairs; evaluated by repeated multiplication.
using Poly = std::vector<std::pair<unsigned, Element>>;

inline Element eval(const Poly& f, const Element& y) {
  Element acc = Element::zero(y.ring());
  for (const auto& [deg, coef] : f) {
    Element p = Element::one(y.ring());
    for (unsigned k = 0; k < deg; ++k) p = p * y;
    acc = acc + coef * p;
  }
  return acc;
}

struct ColorTable {
  std::map<std::string, unsigned> color;  // literal -> color
  explicit ColorTable(const monochrome::Coloring& c) {
    for (std::size_t k = 0; k < c.window().size(); ++k) color[c.window()[k].to_string()] = c.at(k);
  }
  /// 0 when outside the window.
  unsigned operator()(const Element& e) const {
    auto it = color.find(e.to_string());
    return it == color.end() ? 0 : it->second;
  }
};

/// Element set {xy} ∪ {x + f(y)} as literals.
inline std::set<std::string> instance(const Element& x, const Element& y, const std::vector<Poly>& F) {
  std::set<std::string> out{(x * y).to_string()};
  for (const auto& f : F) out.insert((x + eval(f, y)).to_string());
  return out;
}

/// Common color of an instance fully inside the window, 0 otherwise.
inline unsigned mono_color(const ColorTable& table, const std::set<std::string>& inst) {
  unsigned c0 = 0;
  for (const auto& lit : inst) {
    auto it = table.color.find(lit);
    if (it == table.color.end()) return 0;
    if (c0 == 0) c0 = it->second;
    else if (c0 != it->second) return 0;
  }
  return c0;
}

struct Pair {
  std::string x, y;
  unsigned color;
  friend bool operator==(const Pair&, const Pair&) = default;
};

/// All (x, y) with y ∉ {0,1}, x ≠ 0, nondegenerate, monochromatic, fully in the window.
inline std::vector<Pair> witnesses(const monochrome::Coloring& c, const std::vector<Poly>& F) {
  const ColorTable table(c);
  std::vector<Pair> out;
  const auto& w = c.window();
  for (std::size_t yi = 0; yi < w.size(); ++yi) {
    const Element& y = w[yi];
    if (y.is_zero() || y.is_one()) continue;
    for (std::size_t xi = 0; xi < w.size(); ++xi) {
      const Element& x = w[xi];
      if (x.is_zero()) continue;
      const auto inst = instance(x, y, F);
      if (inst.size() == 1) continue;
      if (unsigned col = mono_color(table, inst)) out.push_back({x.to_string(), y.to_string(), col});
    }
  }
  return out;
}

/// |X_y^i| for i = 1..r, no filtering on x.
inline std::vector<std::size_t> abundance_counts(const monochrome::Coloring& c, const std::vector<Poly>& F,
                                                 const Element& y) {
  const ColorTable table(c);
  std::vector<std::size_t> counts(c.colors_count(), 0);
  for (const auto& x : c.window().elements())
    if (unsigned col = mono_color(table, instance(x, y, F))) ++counts[col - 1];
  return counts;
}

/// Every r-coloring of [t]^N contains a monochromatic combinatorial line.
/// Words are base-(t+1) digit strings, digit 0 = variable.
inline bool every_coloring_has_line(unsigned r, unsigned t, unsigned N) {
  std::size_t cells = 1, words = 1;
  for (unsigned k = 0; k < N; ++k) {
    cells *= t;
    words *= t + 1;
  }
  std::vector<std::vector<std::size_t>> lines;
  for (std::size_t code = 0; code < words; ++code) {
    std::vector<unsigned> digits(N);
    std::size_t c = code;
    bool has_var = false;
    for (unsigned k = N; k-- > 0;) {
      digits[k] = static_cast<unsigned>(c % (t + 1));
      c /= t + 1;
      has_var |= digits[k] == 0;
    }
    if (!has_var) continue;
    std::vector<std::size_t> line;
    for (unsigned a = 1; a <= t; ++a) {
      std::size_t idx = 0;
      for (unsigned k = 0; k < N; ++k) idx = idx * t + ((digits[k] == 0 ? a : digits[k]) - 1);
      line.push_back(idx);
    }
    lines.push_back(line);
  }
  std::size_t total = 1;
  for (std::size_t k = 0; k < cells; ++k) total *= r;
  for (std::size_t code = 0; code < total; ++code) {
    std::vector<unsigned> col(cells);
    std::size_t c = code;
    for (auto& v : col) {
      v = static_cast<unsigned>(c % r);
      c /= r;
    }
    bool has_line = false;
    for (const auto& line : lines) {
      bool mono = true;
      for (auto cell : line) mono &= col[cell] == col[line[0]];
      if (mono) { has_line = true; break; }
    }
    if (!has_line) return false;
  }
  return true;
}

/// Whether some r-coloring of {1..N} has no monochromatic nondegenerate
/// instance with x >= 1, y >= 2 (all of {1..N}^2 checked per coloring).
inline bool avoidable(unsigned r, unsigned N, const std::vector<Poly>& F) {
  std::vector<std::set<long>> cands;
  for (long y = 2; y <= static_cast<long>(N); ++y)
    for (long x = 1; x <= static_cast<long>(N); ++x) {
      std::set<long> inst;
      bool inside = true;
      for (const auto& lit : instance(Element::integer(x), Element::integer(y), F)) {
        const long v = std::stol(lit);
        if (v < 1 || v > static_cast<long>(N)) inside = false;
        inst.insert(v);
      }
      if (inside && inst.size() > 1) cands.push_back(inst);
    }
  std::size_t total = 1;
  for (unsigned k = 0; k < N; ++k) total *= r;
  for (std::size_t code = 0; code < total; ++code) {
    std::vector<unsigned> col(N + 1);
    std::size_t c = code;
    for (unsigned k = 1; k <= N; ++k) {
      col[k] = static_cast<unsigned>(c % r);
      c /= r;
    }
    bool ok = true;
    for (const auto& inst : cands) {
      bool mono = true;
      for (long v : inst) mono &= col[v] == col[*inst.begin()];
      if (mono) { ok = false; break; }
    }
    if (ok) return true;
  }
  return false;
}

}  // namespace oracle
