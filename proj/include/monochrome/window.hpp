#pragma once

// Finite, canonically ordered slices of the infinite rings.

#include "ring.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace monochrome {

/// `N=<n>` selects {1..n} in Z (`N=<n>,sym` selects {-n..n}); `B=<b>` selects the
/// box |re|,|im| <= b in Z[i]; `d=<d>` selects polynomials of degree < d.
struct WindowParams {
  enum class Kind { Count, Box, Degree };
  Kind kind = Kind::Count;
  std::uint64_t value = 0;
  bool symmetric = false;

  static WindowParams count(std::uint64_t n, bool symmetric = false) { return {Kind::Count, n, symmetric}; }
  static WindowParams box(std::uint64_t b) { return {Kind::Box, b, false}; }
  static WindowParams degree(std::uint64_t d) { return {Kind::Degree, d, false}; }

  static WindowParams parse(std::string_view text) {
    std::string s = detail::strip_spaces(text);
    WindowParams p;
    if (s.size() >= 4 && s.compare(s.size() - 4, 4, ",sym") == 0) {
      p.symmetric = true;
      s.resize(s.size() - 4);
    }
    if (s.size() < 3 || s[1] != '=') throw ParseError("bad window parameter '" + std::string(text) + "'");
    switch (s[0]) {
      case 'N': p.kind = Kind::Count; break;
      case 'B': p.kind = Kind::Box; break;
      case 'd': p.kind = Kind::Degree; break;
      default: throw ParseError("bad window parameter '" + std::string(text) + "' (expected N=, B= or d=)");
    }
    if (p.symmetric && p.kind != Kind::Count) throw ParseError("',sym' only applies to integer windows");
    p.value = detail::parse_u64(std::string_view(s).substr(2), "window size");
    return p;
  }

  std::string to_string() const {
    switch (kind) {
      case Kind::Count: return "N=" + std::to_string(value) + (symmetric ? ",sym" : "");
      case Kind::Box: return "B=" + std::to_string(value);
      case Kind::Degree: return "d=" + std::to_string(value);
    }
    return "?";
  }

  friend bool operator==(const WindowParams&, const WindowParams&) = default;
};

class Window {
 public:
  static constexpr std::uint64_t max_size = std::uint64_t(1) << 24;

  Window(RingSpec spec, WindowParams params) : spec_(spec), params_(params) { enumerate(); }

  static Window parse(std::string_view ring, std::string_view params) {
    return Window(RingSpec::parse(ring), WindowParams::parse(params));
  }

  const RingSpec& spec() const { return spec_; }
  const WindowParams& params() const { return params_; }
  std::size_t size() const { return elements_.size(); }
  const std::vector<Element>& elements() const { return elements_; }
  const Element& operator[](std::size_t k) const { return elements_[k]; }

  std::optional<std::size_t> index_of(const Element& e) const {
    auto it = index_.find(e);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  bool contains(const Element& e) const { return index_.count(e) != 0; }

  /// Windows are identified by ring and parameters alone.
  friend bool operator==(const Window& a, const Window& b) { return a.spec_ == b.spec_ && a.params_ == b.params_; }

 private:
  void enumerate() {
    using Kind = WindowParams::Kind;
    switch (spec_.kind()) {
      case RingKind::Integers: {
        if (params_.kind != Kind::Count) throw std::invalid_argument("integer windows take N=<n>");
        if (params_.value < 1) throw std::invalid_argument("integer window needs N >= 1");
        if (params_.value > max_size) throw std::invalid_argument("window too large");
        const long n = static_cast<long>(params_.value);
        for (long v = params_.symmetric ? -n : 1; v <= n; ++v) elements_.push_back(Element::integer(v));
        break;
      }
      case RingKind::GaussianIntegers: {
        if (params_.kind != Kind::Box) throw std::invalid_argument("Gaussian windows take B=<b>");
        const long b = static_cast<long>(params_.value);
        if ((2 * params_.value + 1) * (2 * params_.value + 1) > max_size) throw std::invalid_argument("window too large");
        for (long re = -b; re <= b; ++re)
          for (long im = -b; im <= b; ++im) elements_.push_back(Element::gaussian(re, im));
        std::sort(elements_.begin(), elements_.end(), CanonicalLess{});
        break;
      }
      case RingKind::PolyOverPrimeField: {
        if (params_.kind != Kind::Degree) throw std::invalid_argument("polynomial windows take d=<d>");
        if (params_.value < 1) throw std::invalid_argument("polynomial window needs d >= 1");
        const std::uint64_t q = spec_.modulus();
        std::uint64_t total = 1;
        for (std::uint64_t k = 0; k < params_.value; ++k) {
          total *= q;
          if (total > max_size) throw std::invalid_argument("window too large");
        }
        // Counting in base q with c_0 as the least significant digit gives
        // (degree, base-q value) order directly.
        for (std::uint64_t v = 0; v < total; ++v) {
          std::vector<std::uint64_t> coeffs;
          for (std::uint64_t r = v; r; r /= q) coeffs.push_back(r % q);
          elements_.push_back(Element::poly(spec_, std::move(coeffs)));
        }
        break;
      }
    }
    index_.reserve(elements_.size());
    for (std::size_t k = 0; k < elements_.size(); ++k) index_.emplace(elements_[k], k);
  }

  RingSpec spec_;
  WindowParams params_;
  std::vector<Element> elements_;
  std::unordered_map<Element, std::size_t> index_;
};

}  // namespace monochrome
