#pragma once

#include "window.hpp"

#include <cstdint>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace monochrome {

/// SplitMix64. Each call advances the state by 0x9E3779B97F4A7C15 and returns
///   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
///   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
///   z ^ (z >> 31)
/// which is simple enough to reproduce bit-for-bit in any language.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, bound) by rejection: outputs >= 2^64 - (2^64 mod bound) are redrawn.
  std::uint64_t below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("empty range");
    const std::uint64_t reject_from = -bound % bound;  // 2^64 mod bound
    for (;;) {
      const std::uint64_t z = next();
      if (z >= reject_from) return (z - reject_from) % bound;
    }
  }

 private:
  std::uint64_t state_;
};

/// Random element for experiments: integers and Gaussian parts uniform in
/// [-bound, bound]; polynomials uniform of degree < bound.
inline Element random_element(const RingSpec& ring, SplitMix64& rng, std::uint64_t bound) {
  auto signed_draw = [&] { return mpz_class(static_cast<long>(rng.below(2 * bound + 1)) - static_cast<long>(bound)); };
  switch (ring.kind()) {
    case RingKind::Integers: return Element::integer(signed_draw());
    case RingKind::GaussianIntegers: {
      mpz_class re = signed_draw();
      return Element::gaussian(re, signed_draw());
    }
    case RingKind::PolyOverPrimeField: {
      std::vector<std::uint64_t> coeffs(bound);
      for (auto& c : coeffs) c = rng.below(ring.modulus());
      return Element::poly(ring, std::move(coeffs));
    }
  }
  throw std::logic_error("unreachable");
}

class Coloring {
 public:
  using Color = std::uint32_t;

  Coloring(std::shared_ptr<const Window> window, Color r, std::vector<Color> colors)
      : window_(std::move(window)), r_(r), colors_(std::move(colors)) {
    if (!window_) throw std::invalid_argument("coloring needs a window");
    if (r_ < 1) throw std::invalid_argument("color count must be at least 1");
    if (colors_.size() != window_->size())
      throw std::invalid_argument("coloring has " + std::to_string(colors_.size()) + " entries for a window of " +
                                  std::to_string(window_->size()));
    for (Color c : colors_)
      if (c < 1 || c > r_) throw std::invalid_argument("color " + std::to_string(c) + " outside 1.." + std::to_string(r_));
  }

  static Coloring constant(std::shared_ptr<const Window> window, Color r, Color c = 1) {
    const std::size_t n = window->size();
    return Coloring(std::move(window), r, std::vector<Color>(n, c));
  }

  const Window& window() const { return *window_; }
  const std::shared_ptr<const Window>& window_ptr() const { return window_; }
  Color colors_count() const { return r_; }
  const std::vector<Color>& colors() const { return colors_; }
  Color at(std::size_t index) const { return colors_[index]; }

  /// nullopt for elements outside the window.
  std::optional<Color> color_of(const Element& e) const {
    const auto k = window_->index_of(e);
    if (!k) return std::nullopt;
    return colors_[*k];
  }

  friend bool operator==(const Coloring& a, const Coloring& b) {
    return *a.window_ == *b.window_ && a.r_ == b.r_ && a.colors_ == b.colors_;
  }

 private:
  std::shared_ptr<const Window> window_;
  Color r_;
  std::vector<Color> colors_;
};

/// Position k receives 1 + (k-th draw of SplitMix64(seed) reduced to [0, r)).
inline Coloring random_coloring(std::shared_ptr<const Window> window, Coloring::Color r, std::uint64_t seed) {
  if (r == 0) throw std::invalid_argument("color count must be at least 1");
  SplitMix64 rng(seed);
  std::vector<Coloring::Color> colors(window->size());
  for (auto& c : colors) c = static_cast<Coloring::Color>(1 + rng.below(r));
  return Coloring(std::move(window), r, std::move(colors));
}

/// C_i: the window elements colored i, in canonical order.
inline std::vector<Element> color_class(const Coloring& c, Coloring::Color i) {
  if (i < 1 || i > c.colors_count()) throw std::out_of_range("color " + std::to_string(i) + " out of range");
  std::vector<Element> out;
  for (std::size_t k = 0; k < c.colors().size(); ++k)
    if (c.at(k) == i) out.push_back(c.window()[k]);
  return out;
}

inline std::string format_coloring(const Coloring& c) {
  std::string out = "ring " + c.window().spec().to_string() + "\nwindow " + c.window().params().to_string() +
                    "\ncolors " + std::to_string(c.colors_count()) + "\n";
  for (std::size_t k = 0; k < c.colors().size(); ++k) {
    if (k) out += ' ';
    out += std::to_string(c.at(k));
  }
  out += '\n';
  return out;
}

inline Coloring parse_coloring(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line, key, value;
  auto header = [&](const char* expect) {
    if (!std::getline(in, line)) throw ParseError(std::string("coloring file: missing '") + expect + "' line");
    const auto sp = line.find(' ');
    if (sp == std::string::npos || line.substr(0, sp) != expect)
      throw ParseError(std::string("coloring file: expected '") + expect + " ...', got '" + line + "'");
    return line.substr(sp + 1);
  };
  const RingSpec spec = RingSpec::parse(header("ring"));
  const WindowParams params = WindowParams::parse(header("window"));
  const auto r = detail::parse_u64(detail::trim(header("colors")), "color count");
  if (r < 1 || r > 0xffffffffULL) throw ParseError("coloring file: color count must be at least 1");
  auto window = std::make_shared<const Window>(spec, params);
  std::vector<Coloring::Color> colors;
  colors.reserve(window->size());
  std::string token;
  while (in >> token) {
    const auto c = detail::parse_u64(token, "color");
    if (c < 1 || c > r) throw ParseError("coloring file: color " + token + " outside 1.." + std::to_string(r));
    colors.push_back(static_cast<Coloring::Color>(c));
  }
  if (colors.size() != window->size())
    throw ParseError("coloring file: " + std::to_string(colors.size()) + " colors for a window of " +
                     std::to_string(window->size()));
  return Coloring(std::move(window), static_cast<Coloring::Color>(r), std::move(colors));
}

inline void store_coloring(const std::string& path, const Coloring& c) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << format_coloring(c);
}

inline Coloring load_coloring(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_coloring(buf.str());
}

}  // namespace monochrome
