#pragma once

// Exact arithmetic over the three concrete integral domains used throughout
// the library: Z, Z[i] and GF(q)[x] for prime q.

#include <gmpxx.h>

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace monochrome {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RingMismatch : std::invalid_argument {
  RingMismatch() : std::invalid_argument("ring elements from different rings") {}
};

enum class RingKind { Integers, GaussianIntegers, PolyOverPrimeField };

namespace detail {

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p = 2; p * p <= n; ++p)
    if (n % p == 0) return false;
  return true;
}

inline std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

inline std::string strip_spaces(std::string_view s) {
  std::string out;
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) out.push_back(c);
  return out;
}

inline std::uint64_t parse_u64(std::string_view s, std::string_view what) {
  if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; }))
    throw ParseError("expected a non-negative integer for " + std::string(what) + ", got '" +
                     std::string(s) + "'");
  if (s.size() > 18) throw ParseError(std::string(what) + " is too large: " + std::string(s));
  return std::stoull(std::string(s));
}

inline std::size_t hash_mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

inline std::size_t hash_mpz(const mpz_class& z) {
  const mpz_srcptr p = z.get_mpz_t();
  std::size_t h = static_cast<std::size_t>(mpz_sgn(p)) + 0x51ed27;
  const std::size_t n = mpz_size(p);
  for (std::size_t k = 0; k < n; ++k) h = hash_mix(h, static_cast<std::size_t>(mpz_getlimbn(p, k)));
  return h;
}

inline std::uint32_t pow_mod(std::uint64_t b, std::uint64_t e, std::uint32_t q) {
  std::uint64_t r = 1;
  b %= q;
  while (e) {
    if (e & 1) r = r * b % q;
    b = b * b % q;
    e >>= 1;
  }
  return static_cast<std::uint32_t>(r);
}

}  // namespace detail

/// Which ring an element lives in. `q` is only meaningful for GF(q)[x].
class RingSpec {
 public:
  RingSpec() = default;

  static RingSpec integers() { return RingSpec(RingKind::Integers, 0); }
  static RingSpec gaussian() { return RingSpec(RingKind::GaussianIntegers, 0); }
  static RingSpec poly_over(std::uint32_t q) {
    if (!detail::is_prime(q)) throw std::invalid_argument("GF(q)[x] requires prime q, got " + std::to_string(q));
    if (q >= (1u << 31)) throw std::invalid_argument("modulus too large");
    return RingSpec(RingKind::PolyOverPrimeField, q);
  }

  /// Accepts `Z`, `Zi` and `GF(q)[x]`.
  static RingSpec parse(std::string_view text) {
    const std::string s = detail::strip_spaces(text);
    if (s == "Z") return integers();
    if (s == "Zi" || s == "Z[i]") return gaussian();
    if (s.size() > 7 && s.rfind("GF(", 0) == 0 && s.compare(s.size() - 4, 4, ")[x]") == 0) {
      const auto q = detail::parse_u64(std::string_view(s).substr(3, s.size() - 7), "field modulus");
      if (!detail::is_prime(q) || q >= (1u << 31)) throw ParseError("field modulus must be a prime below 2^31: " + s);
      return poly_over(static_cast<std::uint32_t>(q));
    }
    throw ParseError("unknown ring '" + std::string(text) + "' (expected Z, Zi or GF(q)[x])");
  }

  RingKind kind() const { return kind_; }
  std::uint32_t modulus() const { return q_; }

  std::string to_string() const {
    switch (kind_) {
      case RingKind::Integers: return "Z";
      case RingKind::GaussianIntegers: return "Zi";
      case RingKind::PolyOverPrimeField: return "GF(" + std::to_string(q_) + ")[x]";
    }
    return "?";
  }

  friend bool operator==(const RingSpec&, const RingSpec&) = default;

 private:
  RingSpec(RingKind k, std::uint32_t q) : kind_(k), q_(q) {}
  RingKind kind_ = RingKind::Integers;
  std::uint32_t q_ = 0;
};

struct Gaussian {
  mpz_class re, im;
  friend bool operator==(const Gaussian& a, const Gaussian& b) { return a.re == b.re && a.im == b.im; }
};

/// Coefficients c_0, c_1, ... in {0..q-1}; never has a trailing zero.
struct FpPoly {
  std::vector<std::uint32_t> coeffs;
  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  friend bool operator==(const FpPoly&, const FpPoly&) = default;
};

class Element {
 public:
  using Value = std::variant<mpz_class, Gaussian, FpPoly>;

  Element() : ring_(RingSpec::integers()), value_(mpz_class(0)) {}

  static Element integer(mpz_class v) { return Element(RingSpec::integers(), std::move(v)); }
  static Element integer(long v) { return integer(mpz_class(v)); }
  static Element gaussian(mpz_class re, mpz_class im) {
    return Element(RingSpec::gaussian(), Gaussian{std::move(re), std::move(im)});
  }
  /// Reduces coefficients mod q and strips trailing zeros.
  static Element poly(const RingSpec& ring, std::vector<std::uint64_t> coeffs) {
    if (ring.kind() != RingKind::PolyOverPrimeField) throw RingMismatch();
    FpPoly p;
    p.coeffs.reserve(coeffs.size());
    for (auto c : coeffs) p.coeffs.push_back(static_cast<std::uint32_t>(c % ring.modulus()));
    trim(p);
    return Element(ring, std::move(p));
  }

  static Element zero(const RingSpec& ring) { return from_integer(ring, 0); }
  static Element one(const RingSpec& ring) { return from_integer(ring, 1); }

  /// The image of an ordinary integer under the unique ring map Z -> R.
  static Element from_integer(const RingSpec& ring, long v) {
    switch (ring.kind()) {
      case RingKind::Integers: return integer(v);
      case RingKind::GaussianIntegers: return gaussian(v, 0);
      case RingKind::PolyOverPrimeField: {
        const long q = ring.modulus();
        const long r = ((v % q) + q) % q;
        return poly(ring, {static_cast<std::uint64_t>(r)});
      }
    }
    throw std::logic_error("unreachable");
  }

  const RingSpec& ring() const { return ring_; }
  const Value& value() const { return value_; }
  const mpz_class& as_integer() const { return std::get<mpz_class>(value_); }
  const Gaussian& as_gaussian() const { return std::get<Gaussian>(value_); }
  const FpPoly& as_poly() const { return std::get<FpPoly>(value_); }

  bool is_zero() const {
    switch (ring_.kind()) {
      case RingKind::Integers: return sgn(as_integer()) == 0;
      case RingKind::GaussianIntegers: return sgn(as_gaussian().re) == 0 && sgn(as_gaussian().im) == 0;
      case RingKind::PolyOverPrimeField: return as_poly().coeffs.empty();
    }
    return false;
  }
  bool is_one() const { return *this == one(ring_); }

  friend bool operator==(const Element& a, const Element& b) { return a.ring_ == b.ring_ && a.value_ == b.value_; }
  friend bool operator!=(const Element& a, const Element& b) { return !(a == b); }

  friend Element operator+(const Element& a, const Element& b) {
    same_ring(a, b);
    switch (a.ring_.kind()) {
      case RingKind::Integers: return integer(a.as_integer() + b.as_integer());
      case RingKind::GaussianIntegers: {
        const auto &x = a.as_gaussian(), &y = b.as_gaussian();
        return gaussian(x.re + y.re, x.im + y.im);
      }
      case RingKind::PolyOverPrimeField: {
        const auto &x = a.as_poly().coeffs, &y = b.as_poly().coeffs;
        const std::uint32_t q = a.ring_.modulus();
        FpPoly r;
        r.coeffs.resize(std::max(x.size(), y.size()), 0);
        for (std::size_t k = 0; k < r.coeffs.size(); ++k) {
          std::uint64_t s = (k < x.size() ? x[k] : 0u);
          s += (k < y.size() ? y[k] : 0u);
          r.coeffs[k] = static_cast<std::uint32_t>(s % q);
        }
        trim(r);
        return Element(a.ring_, std::move(r));
      }
    }
    throw std::logic_error("unreachable");
  }

  Element operator-() const {
    switch (ring_.kind()) {
      case RingKind::Integers: return integer(-as_integer());
      case RingKind::GaussianIntegers: return gaussian(-as_gaussian().re, -as_gaussian().im);
      case RingKind::PolyOverPrimeField: {
        FpPoly r = as_poly();
        for (auto& c : r.coeffs) c = c == 0 ? 0 : ring_.modulus() - c;
        return Element(ring_, std::move(r));
      }
    }
    throw std::logic_error("unreachable");
  }

  friend Element operator-(const Element& a, const Element& b) { return a + (-b); }

  friend Element operator*(const Element& a, const Element& b) {
    same_ring(a, b);
    switch (a.ring_.kind()) {
      case RingKind::Integers: return integer(a.as_integer() * b.as_integer());
      case RingKind::GaussianIntegers: {
        const auto &x = a.as_gaussian(), &y = b.as_gaussian();
        return gaussian(x.re * y.re - x.im * y.im, x.re * y.im + x.im * y.re);
      }
      case RingKind::PolyOverPrimeField: {
        const auto &x = a.as_poly().coeffs, &y = b.as_poly().coeffs;
        if (x.empty() || y.empty()) return zero(a.ring_);
        const std::uint64_t q = a.ring_.modulus();
        FpPoly r;
        r.coeffs.assign(x.size() + y.size() - 1, 0);
        for (std::size_t i = 0; i < x.size(); ++i) {
          if (x[i] == 0) continue;
          for (std::size_t j = 0; j < y.size(); ++j)
            r.coeffs[i + j] = static_cast<std::uint32_t>((r.coeffs[i + j] + std::uint64_t(x[i]) * y[j]) % q);
        }
        trim(r);
        return Element(a.ring_, std::move(r));
      }
    }
    throw std::logic_error("unreachable");
  }

  Element& operator+=(const Element& o) { return *this = *this + o; }
  Element& operator*=(const Element& o) { return *this = *this * o; }

  Element pow(unsigned e) const {
    Element result = one(ring_), base = *this;
    while (e) {
      if (e & 1) result *= base;
      e >>= 1;
      if (e) base *= base;
    }
    return result;
  }

  std::string to_string() const;

 private:
  Element(RingSpec ring, Value v) : ring_(ring), value_(std::move(v)) {}

  static void trim(FpPoly& p) {
    while (!p.coeffs.empty() && p.coeffs.back() == 0) p.coeffs.pop_back();
  }
  static void same_ring(const Element& a, const Element& b) {
    if (!(a.ring_ == b.ring_)) throw RingMismatch();
  }

  RingSpec ring_;
  Value value_;
};

enum class RingOp { Add, Mul, Neg, Sub };

/// Single entry point over the four ring operations; `b` is ignored for Neg.
inline Element ring_arith(RingOp op, const Element& a, const std::optional<Element>& b = std::nullopt) {
  if (op == RingOp::Neg) return -a;
  if (!b) throw std::invalid_argument("binary ring operation needs two operands");
  switch (op) {
    case RingOp::Add: return a + *b;
    case RingOp::Mul: return a * *b;
    case RingOp::Sub: return a - *b;
    case RingOp::Neg: break;
  }
  return -a;
}

/// Returns c with b*c == a when it exists in the ring, nullopt otherwise.
/// Throws std::domain_error when b == 0.
inline std::optional<Element> exact_divide(const Element& a, const Element& b) {
  if (!(a.ring() == b.ring())) throw RingMismatch();
  if (b.is_zero()) throw std::domain_error("division by zero");
  switch (a.ring().kind()) {
    case RingKind::Integers: {
      const mpz_class &x = a.as_integer(), &y = b.as_integer();
      if (!mpz_divisible_p(x.get_mpz_t(), y.get_mpz_t())) return std::nullopt;
      mpz_class c;
      mpz_divexact(c.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
      return Element::integer(std::move(c));
    }
    case RingKind::GaussianIntegers: {
      // a/b = a * conj(b) / |b|^2
      const auto &x = a.as_gaussian(), &y = b.as_gaussian();
      const mpz_class norm = y.re * y.re + y.im * y.im;
      mpz_class re = x.re * y.re + x.im * y.im;
      mpz_class im = x.im * y.re - x.re * y.im;
      if (!mpz_divisible_p(re.get_mpz_t(), norm.get_mpz_t()) || !mpz_divisible_p(im.get_mpz_t(), norm.get_mpz_t()))
        return std::nullopt;
      mpz_divexact(re.get_mpz_t(), re.get_mpz_t(), norm.get_mpz_t());
      mpz_divexact(im.get_mpz_t(), im.get_mpz_t(), norm.get_mpz_t());
      return Element::gaussian(std::move(re), std::move(im));
    }
    case RingKind::PolyOverPrimeField: {
      const std::uint32_t q = a.ring().modulus();
      std::vector<std::uint64_t> rem(a.as_poly().coeffs.begin(), a.as_poly().coeffs.end());
      const auto& den = b.as_poly().coeffs;
      const int db = static_cast<int>(den.size()) - 1;
      if (static_cast<int>(rem.size()) - 1 < db) {
        if (rem.empty()) return Element::zero(a.ring());
        return std::nullopt;
      }
      const std::uint64_t lead_inv = detail::pow_mod(den.back(), q - 2, q);
      std::vector<std::uint64_t> quot(rem.size() - den.size() + 1, 0);
      for (int k = static_cast<int>(rem.size()) - 1; k >= db; --k) {
        const std::uint64_t c = rem[k] % q * lead_inv % q;
        quot[k - db] = c;
        if (c == 0) continue;
        for (int j = 0; j <= db; ++j) {
          rem[k - db + j] = (rem[k - db + j] + (q - c) * den[j]) % q;
        }
      }
      for (int k = 0; k < db; ++k)
        if (rem[k] % q != 0) return std::nullopt;
      return Element::poly(a.ring(), std::move(quot));
    }
  }
  return std::nullopt;
}

/// Total order used for every deterministic listing: integers by value,
/// Gaussian integers by (norm, re, im), polynomials by (degree, base-q value).
inline int compare_canonical(const Element& a, const Element& b) {
  if (!(a.ring() == b.ring())) throw RingMismatch();
  auto sign = [](int c) { return (c > 0) - (c < 0); };
  switch (a.ring().kind()) {
    case RingKind::Integers: return sign(cmp(a.as_integer(), b.as_integer()));
    case RingKind::GaussianIntegers: {
      const auto &x = a.as_gaussian(), &y = b.as_gaussian();
      const mpz_class nx = x.re * x.re + x.im * x.im, ny = y.re * y.re + y.im * y.im;
      if (int c = sign(cmp(nx, ny))) return c;
      if (int c = sign(cmp(x.re, y.re))) return c;
      return sign(cmp(x.im, y.im));
    }
    case RingKind::PolyOverPrimeField: {
      const auto &x = a.as_poly().coeffs, &y = b.as_poly().coeffs;
      if (x.size() != y.size()) return x.size() < y.size() ? -1 : 1;
      for (std::size_t k = x.size(); k-- > 0;)
        if (x[k] != y[k]) return x[k] < y[k] ? -1 : 1;
      return 0;
    }
  }
  return 0;
}

struct CanonicalLess {
  bool operator()(const Element& a, const Element& b) const { return compare_canonical(a, b) < 0; }
};

inline std::string Element::to_string() const {
  switch (ring_.kind()) {
    case RingKind::Integers: return as_integer().get_str();
    case RingKind::GaussianIntegers: {
      const auto& g = as_gaussian();
      if (sgn(g.im) == 0) return g.re.get_str();
      std::string im;
      if (g.im == 1) im = "i";
      else if (g.im == -1) im = "-i";
      else im = g.im.get_str() + "i";
      if (sgn(g.re) == 0) return im;
      return g.re.get_str() + (sgn(g.im) > 0 ? "+" : "") + im;
    }
    case RingKind::PolyOverPrimeField: {
      const auto& c = as_poly().coeffs;
      if (c.empty()) return "0";
      std::string out;
      for (std::size_t k = c.size(); k-- > 0;) {
        if (c[k] == 0) continue;
        if (!out.empty()) out += "+";
        if (k == 0 || c[k] != 1) out += std::to_string(c[k]);
        if (k >= 1) out += "x";
        if (k >= 2) out += "^" + std::to_string(k);
      }
      return out;
    }
  }
  return "?";
}

namespace detail {

inline Element parse_integer_literal(std::string_view s) {
  mpz_class v;
  std::string str(s);
  if (!str.empty() && str[0] == '+') str.erase(0, 1);
  if (str.empty() || str == "-" || v.set_str(str, 10) != 0) throw ParseError("bad integer literal '" + std::string(s) + "'");
  return Element::integer(v);
}

// Splits "a+b-c" into signed terms, keeping the sign with each term.
inline std::vector<std::string> signed_terms(const std::string& s) {
  std::vector<std::string> terms;
  std::string cur;
  for (std::size_t k = 0; k < s.size(); ++k) {
    const char c = s[k];
    if ((c == '+' || c == '-') && k > 0 && s[k - 1] != '^') {
      terms.push_back(cur);
      cur.clear();
    }
    cur.push_back(c);
  }
  terms.push_back(cur);
  return terms;
}

inline Element parse_gaussian_literal(const std::string& s) {
  mpz_class re = 0, im = 0;
  bool seen_re = false, seen_im = false;
  for (const auto& term : signed_terms(s)) {
    std::string body = term;
    bool neg = false;
    if (!body.empty() && (body[0] == '+' || body[0] == '-')) {
      neg = body[0] == '-';
      body.erase(0, 1);
    }
    if (body.empty()) throw ParseError("bad Gaussian integer literal '" + s + "'");
    if (body.back() == 'i') {
      if (seen_im) throw ParseError("repeated imaginary part in '" + s + "'");
      seen_im = true;
      body.pop_back();
      mpz_class v = 1;
      if (!body.empty() && v.set_str(body, 10) != 0) throw ParseError("bad Gaussian integer literal '" + s + "'");
      if (!body.empty() && body[0] == '-') throw ParseError("bad Gaussian integer literal '" + s + "'");
      im = neg ? mpz_class(-v) : v;
    } else {
      if (seen_re) throw ParseError("repeated real part in '" + s + "'");
      seen_re = true;
      mpz_class v;
      if (v.set_str(body, 10) != 0 || body[0] == '-') throw ParseError("bad Gaussian integer literal '" + s + "'");
      re = neg ? mpz_class(-v) : v;
    }
  }
  return Element::gaussian(re, im);
}

inline Element parse_poly_literal(const RingSpec& ring, const std::string& s) {
  const std::uint32_t q = ring.modulus();
  std::vector<std::uint64_t> coeffs;
  for (const auto& term : signed_terms(s)) {
    std::string body = term;
    bool neg = false;
    if (!body.empty() && (body[0] == '+' || body[0] == '-')) {
      neg = body[0] == '-';
      body.erase(0, 1);
    }
    if (body.empty()) throw ParseError("bad polynomial literal '" + s + "'");
    std::uint64_t coef = 1;
    std::size_t degree = 0;
    const auto xpos = body.find('x');
    if (xpos == std::string::npos) {
      coef = parse_u64(body, "coefficient") % q;
    } else {
      if (xpos > 0) coef = parse_u64(std::string_view(body).substr(0, xpos), "coefficient") % q;
      std::string rest = body.substr(xpos + 1);
      degree = 1;
      if (!rest.empty()) {
        if (rest[0] != '^') throw ParseError("bad polynomial literal '" + s + "'");
        degree = parse_u64(std::string_view(rest).substr(1), "exponent");
        if (degree > 4096) throw ParseError("exponent too large in '" + s + "'");
      }
    }
    if (neg) coef = (q - coef) % q;
    if (coeffs.size() <= degree) coeffs.resize(degree + 1, 0);
    coeffs[degree] = (coeffs[degree] + coef) % q;
  }
  return Element::poly(ring, std::move(coeffs));
}

}  // namespace detail

/// Reads an element literal: `-12` in Z, `3-2i` in Zi, `x^2+2x+1` in GF(q)[x].
inline Element parse_element(const RingSpec& ring, std::string_view text) {
  const std::string s = detail::strip_spaces(text);
  if (s.empty()) throw ParseError("empty ring element literal");
  switch (ring.kind()) {
    case RingKind::Integers: return detail::parse_integer_literal(s);
    case RingKind::GaussianIntegers: return detail::parse_gaussian_literal(s);
    case RingKind::PolyOverPrimeField: return detail::parse_poly_literal(ring, s);
  }
  throw ParseError("unreachable");
}

}  // namespace monochrome

template <>
struct std::hash<monochrome::Element> {
  std::size_t operator()(const monochrome::Element& e) const noexcept {
    using monochrome::RingKind;
    using monochrome::detail::hash_mix;
    using monochrome::detail::hash_mpz;
    std::size_t h = static_cast<std::size_t>(e.ring().kind()) * 131 + e.ring().modulus();
    switch (e.ring().kind()) {
      case RingKind::Integers: return hash_mix(h, hash_mpz(e.as_integer()));
      case RingKind::GaussianIntegers:
        return hash_mix(hash_mix(h, hash_mpz(e.as_gaussian().re)), hash_mpz(e.as_gaussian().im));
      case RingKind::PolyOverPrimeField:
        for (auto c : e.as_poly().coeffs) h = hash_mix(h, c);
        return h;
    }
    return h;
  }
};
