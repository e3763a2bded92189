#pragma once

#include <array>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#include "wd/bigpoly.hpp"
#include "wd/field.hpp"
#include "wd/galois_ring.hpp"

namespace wd {

/// Witt addition, multiplication and negation polynomials over Z.
/// Variables: X_0..X_{n-1} are indices 0..n-1, Y_j is index n+j.
struct StructurePolynomials {
  std::uint32_t p = 0;
  unsigned n = 0;
  std::vector<IntPoly> add;
  std::vector<IntPoly> mul;
  std::vector<IntPoly> neg;
};

inline IntPoly ghost_polynomial(std::uint32_t p, unsigned i, std::size_t var_offset) {
  IntPoly w;
  mpz_class pj = 1;
  for (unsigned j = 0; j <= i; ++j) {
    w = w + IntPoly::variable(var_offset + j, static_cast<std::uint16_t>(ipow(p, i - j))) * pj;
    pj *= p;
  }
  return w;
}

namespace detail {

// Solve sum_j p^j Z_j^{p^{i-j}} = target_i recursively for Z.
inline std::vector<IntPoly> solve_ghost(std::uint32_t p, unsigned n, const std::vector<IntPoly>& targets) {
  std::vector<IntPoly> z;
  std::vector<std::vector<IntPoly>> ppow;  // ppow[j][k] = z_j^{p^k}
  for (unsigned i = 0; i < n; ++i) {
    IntPoly num = targets[i];
    mpz_class pj = 1;
    for (unsigned j = 0; j < i; ++j) {
      auto& pw = ppow[j];
      while (pw.size() <= i - j) pw.push_back(pw.back().pow(p));
      num = num - pw[i - j] * pj;
      pj *= p;
    }
    z.push_back(num.exact_div(pj));
    ppow.push_back({z.back()});
  }
  return z;
}

}  // namespace detail

inline StructurePolynomials generate_structure_polys(std::uint32_t p, unsigned n) {
  if (!is_prime(p)) throw std::invalid_argument("p must be prime");
  if (n < 1 || 2 * n > kMaxPolyVars) throw std::invalid_argument("Witt length out of range");
  StructurePolynomials s;
  s.p = p;
  s.n = n;
  std::vector<IntPoly> tadd, tmul, tneg;
  for (unsigned i = 0; i < n; ++i) {
    IntPoly wx = ghost_polynomial(p, i, 0), wy = ghost_polynomial(p, i, n);
    tadd.push_back(wx + wy);
    tmul.push_back(wx * wy);
    tneg.push_back(-wx);
  }
  s.add = detail::solve_ghost(p, n, tadd);
  s.mul = detail::solve_ghost(p, n, tmul);
  s.neg = detail::solve_ghost(p, n, tneg);
  return s;
}

/// Cached structure polynomials; generated once per (p, n).
inline const StructurePolynomials& witt_structure_polys(std::uint32_t p, unsigned n) {
  static std::mutex mu;
  static std::map<std::pair<std::uint32_t, unsigned>, std::unique_ptr<StructurePolynomials>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{p, n}];
  if (!slot) slot = std::make_unique<StructurePolynomials>(generate_structure_polys(p, n));
  return *slot;
}

struct GhostCheck {
  bool ok = true;
  std::string failure;
};

namespace detail {
// Sum_j p^j Z_j^{p^{i-j}} computed by direct binary powering, independent of the generator's power cache.
inline IntPoly ghost_of(std::uint32_t p, unsigned i, const std::vector<IntPoly>& z) {
  IntPoly w;
  mpz_class pj = 1;
  for (unsigned j = 0; j <= i; ++j) {
    w = w + z[j].pow(ipow(p, i - j)) * pj;
    pj *= p;
  }
  return w;
}
}  // namespace detail

/// Verifies w_i(A) = w_i(X)+w_i(Y), w_i(P) = w_i(X)w_i(Y), w_i(N) = -w_i(X) as integer identities.
inline GhostCheck verify_ghost_identities(const StructurePolynomials& s) {
  GhostCheck r;
  const std::uint32_t p = s.p;
  for (unsigned i = 0; i < s.n; ++i) {
    IntPoly wx = ghost_polynomial(p, i, 0), wy = ghost_polynomial(p, i, s.n);
    if (!(detail::ghost_of(p, i, s.add) == wx + wy)) {
      r.ok = false;
      r.failure = "addition ghost identity fails at i=" + std::to_string(i);
      return r;
    }
    if (!(detail::ghost_of(p, i, s.mul) == wx * wy)) {
      r.ok = false;
      r.failure = "multiplication ghost identity fails at i=" + std::to_string(i);
      return r;
    }
    if (!(detail::ghost_of(p, i, s.neg) == -wx)) {
      r.ok = false;
      r.failure = "negation ghost identity fails at i=" + std::to_string(i);
      return r;
    }
  }
  return r;
}

/// S_1(X_0, Y_0) = -sum_{k=1}^{p-1} (1/p) binom(p,k) X_0^k Y_0^{p-k}, in the variable layout of length n.
inline IntPoly carry_polynomial_s1(std::uint32_t p, unsigned n) {
  IntPoly s;
  for (std::uint32_t k = 1; k < p; ++k) {
    mpz_class b;
    mpz_bin_uiui(b.get_mpz_t(), p, k);
    IntPoly mono = IntPoly::variable(0, static_cast<std::uint16_t>(k)) * IntPoly::variable(n, static_cast<std::uint16_t>(p - k));
    s = s - mono * mpz_class(b / p);
  }
  return s;
}

/// Isobaric check: with weight p^j on coordinate j, every monomial of poly i has weight p^i (per side for mul).
inline bool is_isobaric(const IntPoly& f, std::uint32_t p, unsigned n, std::uint64_t degree, bool per_side) {
  for (const auto& [e, c] : f.terms()) {
    std::uint64_t wx = 0, wy = 0;
    for (unsigned j = 0; j < n; ++j) {
      wx += e[j] * ipow(p, j);
      wy += e[n + j] * ipow(p, j);
    }
    if (per_side) {
      if (wx != degree || wy != degree) return false;
    } else if (wx + wy != degree) {
      return false;
    }
  }
  return true;
}

inline std::string poly_to_string(const IntPoly& f, unsigned n) {
  if (f.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : f.terms()) {
    mpz_class a = abs(c);
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    first = false;
    bool any = false;
    std::ostringstream mono;
    for (unsigned v = 0; v < 2 * n; ++v) {
      if (e[v] == 0) continue;
      if (any) mono << "*";
      any = true;
      mono << (v < n ? "X" : "Y") << (v < n ? v : v - n);
      if (e[v] > 1) mono << "^" << e[v];
    }
    if (!any) {
      os << a.get_str();
    } else {
      if (a != 1) os << a.get_str() << "*";
      os << mono.str();
    }
  }
  return os.str();
}

/// Structure polynomial with coefficients reduced mod p, ready for evaluation in characteristic p.
struct ReducedPoly {
  struct Term {
    std::vector<std::pair<std::uint16_t, std::uint16_t>> factors;  // (variable, exponent)
    std::uint32_t coeff;
  };
  std::vector<Term> terms;
};

inline ReducedPoly reduce_mod_p(const IntPoly& f, std::uint32_t p) {
  ReducedPoly r;
  mpz_class pp = p;
  for (const auto& [e, c] : f.terms()) {
    mpz_class m = c % pp;
    if (m < 0) m += pp;
    if (m == 0) continue;
    ReducedPoly::Term t;
    t.coeff = static_cast<std::uint32_t>(m.get_ui());
    for (std::uint16_t v = 0; v < kMaxPolyVars; ++v)
      if (e[v] != 0) t.factors.emplace_back(v, e[v]);
    r.terms.push_back(std::move(t));
  }
  return r;
}

struct ReducedStructure {
  std::uint32_t p;
  unsigned n;
  std::vector<ReducedPoly> add, mul, neg;
};

inline const ReducedStructure& reduced_structure(std::uint32_t p, unsigned n) {
  static std::mutex mu;
  static std::map<std::pair<std::uint32_t, unsigned>, std::unique_ptr<ReducedStructure>> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find({p, n});
    if (it != cache.end()) return *it->second;
  }
  const auto& s = witt_structure_polys(p, n);
  auto r = std::make_unique<ReducedStructure>();
  r->p = p;
  r->n = n;
  for (unsigned i = 0; i < n; ++i) {
    r->add.push_back(reduce_mod_p(s.add[i], p));
    r->mul.push_back(reduce_mod_p(s.mul[i], p));
    r->neg.push_back(reduce_mod_p(s.neg[i], p));
  }
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{p, n}];
  if (!slot) slot = std::move(r);
  return *slot;
}

/// Commutative rings of characteristic p that Witt vectors can be formed over.
template <class R>
concept CoefficientRing = std::copyable<R> && requires(const R a, const R b, long c) {
  { a + b } -> std::convertible_to<R>;
  { a - b } -> std::convertible_to<R>;
  { a * b } -> std::convertible_to<R>;
  { -a } -> std::convertible_to<R>;
  { a == b } -> std::convertible_to<bool>;
  { a.zero_like() } -> std::convertible_to<R>;
  { a.scalar_like(c) } -> std::convertible_to<R>;
  { a.characteristic() } -> std::convertible_to<std::uint32_t>;
};

template <CoefficientRing R>
R ring_pow(const R& x, std::uint64_t e) {
  R result = x.scalar_like(1), base = x;
  while (e > 0) {
    if (e & 1) result = result * base;
    e >>= 1;
    if (e) base = base * base;
  }
  return result;
}

template <CoefficientRing R>
R frobenius_power(const R& x) {
  if constexpr (std::is_same_v<R, FieldElement>) {
    return x.frobenius(1);
  } else {
    return ring_pow(x, x.characteristic());
  }
}

/// Evaluate a reduced polynomial at the given point (variables in layout order).
template <CoefficientRing R>
R evaluate(const ReducedPoly& f, const std::vector<R>& point, const R& like) {
  R acc = like.zero_like();
  std::vector<std::map<std::uint16_t, R>> cache(point.size());
  for (const auto& t : f.terms) {
    R term = like.scalar_like(t.coeff);
    for (const auto& [v, e] : t.factors) {
      auto& cv = cache[v];
      auto it = cv.find(e);
      if (it == cv.end()) it = cv.emplace(e, ring_pow(point[v], e)).first;
      term = term * it->second;
    }
    acc = acc + term;
  }
  return acc;
}

template <CoefficientRing R>
class WittVector;

inline constexpr unsigned kMaxWittLift = 40;

namespace detail {

// Witt arithmetic over F_q by solving the ghost recursion at lifted coordinates in GR(p^n, m).
enum class GhostOp { Add, Sub, Mul, Neg };

// Prime-field case: GR(p^n, 1) = Z/p^n, done in machine integers.
inline std::vector<FieldElement> ghost_lift_prime(GhostOp op, const std::vector<FieldElement>& x,
                                                  const std::vector<FieldElement>& y) {
  const unsigned n = static_cast<unsigned>(x.size());
  const std::uint64_t p = x[0].characteristic();
  const std::uint64_t mod = ipow(p, n);
  const bool narrow = mod <= (std::uint64_t(1) << 32);
  auto mulm = [mod, narrow](std::uint64_t a, std::uint64_t b) {
    if (narrow) return a * b % mod;
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % mod);
  };
  auto powp = [&](std::uint64_t a) {
    std::uint64_t r = 1, b = a, e = p;
    while (e) {
      if (e & 1) r = mulm(r, b);
      b = mulm(b, b);
      e >>= 1;
    }
    return r;
  };
  auto ghosts = [&](const std::vector<FieldElement>& v, std::array<std::uint64_t, kMaxWittLift>& g) {
    g.fill(0);
    std::uint64_t pj = 1;
    for (unsigned j = 0; j < n; ++j) {
      std::uint64_t w = v[j].v;
      for (unsigned i = j; i < n; ++i) {
        g[i] = (g[i] + mulm(w, pj)) % mod;
        if (i + 1 < n) w = powp(w);
      }
      pj *= p;
    }
  };
  std::array<std::uint64_t, kMaxWittLift> gx{}, gy{}, target{};
  ghosts(x, gx);
  if (op != GhostOp::Neg) ghosts(y, gy);
  for (unsigned i = 0; i < n; ++i) {
    switch (op) {
      case GhostOp::Add: target[i] = (gx[i] + gy[i]) % mod; break;
      case GhostOp::Sub: target[i] = (gx[i] + mod - gy[i]) % mod; break;
      case GhostOp::Mul: target[i] = mulm(gx[i], gy[i]); break;
      case GhostOp::Neg: target[i] = (mod - gx[i]) % mod; break;
    }
  }
  // zp[j] holds z_j^{p^(i-j)} for the current i
  std::array<std::uint64_t, kMaxWittLift> z{};
  std::vector<FieldElement> out;
  out.reserve(n);
  std::uint64_t pi = 1;
  for (unsigned i = 0; i < n; ++i) {
    std::uint64_t num = target[i];
    std::uint64_t pj = 1;
    for (unsigned j = 0; j < i; ++j) {
      z[j] = powp(z[j]);
      num = (num + mod - mulm(z[j], pj)) % mod;
      pj *= p;
    }
    if (num % pi != 0) throw InternalError("inexact division in ghost lift");
    z[i] = num / pi;
    out.push_back(x[0].scalar_like(static_cast<long>(z[i] % p)));
    pi *= p;
  }
  return out;
}

inline std::vector<FieldElement> ghost_lift_op(GhostOp op, const std::vector<FieldElement>& x,
                                               const std::vector<FieldElement>& y) {
  const unsigned n = static_cast<unsigned>(x.size());
  const Field k = x[0].field();
  if (k.m() == 1 && n <= kMaxWittLift && std::pow(static_cast<long double>(k.p()), n) < 4.0e18L)
    return ghost_lift_prime(op, x, y);
  const auto gr = GaloisRing::get(k, n);
  const std::uint32_t p = k.p();
  auto ghosts = [&](const std::vector<FieldElement>& v) {
    std::vector<GRElem> g(n, gr->zero());
    // g_i = sum_j p^j v_j^{p^{i-j}}
    for (unsigned j = 0; j < n; ++j) {
      GRElem pw = gr->lift(v[j]);
      const std::uint64_t pj = ipow(p, j);
      for (unsigned i = j; i < n; ++i) {
        g[i] = gr->add(g[i], gr->scale(pw, pj));
        if (i + 1 < n) pw = gr->pow(pw, p);
      }
    }
    return g;
  };
  std::vector<GRElem> gx = ghosts(x);
  std::vector<GRElem> target(n);
  if (op == GhostOp::Neg) {
    for (unsigned i = 0; i < n; ++i) target[i] = gr->neg(gx[i]);
  } else {
    std::vector<GRElem> gy = ghosts(y);
    for (unsigned i = 0; i < n; ++i) {
      if (op == GhostOp::Add) target[i] = gr->add(gx[i], gy[i]);
      if (op == GhostOp::Sub) target[i] = gr->sub(gx[i], gy[i]);
      if (op == GhostOp::Mul) target[i] = gr->mul(gx[i], gy[i]);
    }
  }
  std::vector<GRElem> zp;  // z_j^{p^(i-j)} for the current i
  std::vector<FieldElement> out;
  out.reserve(n);
  for (unsigned i = 0; i < n; ++i) {
    GRElem num = target[i];
    for (unsigned j = 0; j < i; ++j) {
      zp[j] = gr->pow(zp[j], p);
      num = gr->sub(num, gr->scale(zp[j], ipow(p, j)));
    }
    GRElem zi = gr->div_p(num, i);
    zp.push_back(zi);
    out.push_back(gr->reduce(zi));
  }
  return out;
}

}  // namespace detail

/// Truncated p-typical Witt vector of fixed length over a coefficient ring.
template <CoefficientRing R>
class WittVector {
 public:
  WittVector() = default;
  explicit WittVector(std::vector<R> coords) : c_(std::move(coords)) {
    if (c_.empty()) throw std::invalid_argument("Witt vectors need length >= 1");
  }

  static WittVector zero(const R& like, unsigned n) { return WittVector(std::vector<R>(n, like.zero_like())); }
  static WittVector one(const R& like, unsigned n) { return teichmuller(like.scalar_like(1), n); }
  static WittVector teichmuller(const R& a, unsigned n) {
    std::vector<R> c(n, a.zero_like());
    c[0] = a;
    return WittVector(std::move(c));
  }

  unsigned length() const { return static_cast<unsigned>(c_.size()); }
  const R& operator[](std::size_t i) const { return c_[i]; }
  const std::vector<R>& coords() const { return c_; }
  std::uint32_t p() const { return c_[0].characteristic(); }
  bool operator==(const WittVector& o) const { return c_ == o.c_; }
  bool operator!=(const WittVector& o) const { return !(*this == o); }

  bool is_zero() const {
    const R z = c_[0].zero_like();
    for (const auto& x : c_)
      if (!(x == z)) return false;
    return true;
  }
  bool is_teichmuller() const {
    const R z = c_[0].zero_like();
    for (std::size_t i = 1; i < c_.size(); ++i)
      if (!(c_[i] == z)) return false;
    return true;
  }

  WittVector operator+(const WittVector& o) const {
    check(o);
    if constexpr (std::is_same_v<R, FieldElement>) {
      if (is_zero()) return o;
      if (o.is_zero()) return *this;
      return WittVector(detail::ghost_lift_op(detail::GhostOp::Add, c_, o.c_));
    } else {
      return structure_add(o);
    }
  }
  WittVector operator*(const WittVector& o) const {
    check(o);
    if (is_teichmuller()) return o.teichmuller_scale(c_[0]);
    if (o.is_teichmuller()) return teichmuller_scale(o.c_[0]);
    if constexpr (std::is_same_v<R, FieldElement>) {
      return WittVector(detail::ghost_lift_op(detail::GhostOp::Mul, c_, o.c_));
    } else {
      return structure_mul(o);
    }
  }
  WittVector operator-() const {
    if constexpr (std::is_same_v<R, FieldElement>) {
      if (p() != 2) {
        std::vector<R> c;
        for (const auto& x : c_) c.push_back(-x);
        return WittVector(std::move(c));
      }
      return WittVector(detail::ghost_lift_op(detail::GhostOp::Neg, c_, c_));
    } else {
      return structure_neg();
    }
  }
  WittVector operator-(const WittVector& o) const {
    if constexpr (std::is_same_v<R, FieldElement>) {
      check(o);
      if (o.is_zero()) return *this;
      return WittVector(detail::ghost_lift_op(detail::GhostOp::Sub, c_, o.c_));
    } else {
      return *this + (-o);
    }
  }
  WittVector& operator+=(const WittVector& o) { return *this = *this + o; }
  WittVector& operator-=(const WittVector& o) { return *this = *this - o; }

  /// Evaluation of the structure polynomials, regardless of ring.
  WittVector structure_add(const WittVector& o) const {
    check(o);
    const auto& rs = reduced_structure(p(), length());
    return apply_binary(rs.add, o);
  }
  WittVector structure_mul(const WittVector& o) const {
    check(o);
    const auto& rs = reduced_structure(p(), length());
    return apply_binary(rs.mul, o);
  }
  WittVector structure_neg() const {
    const auto& rs = reduced_structure(p(), length());
    std::vector<R> out;
    for (unsigned i = 0; i < length(); ++i) {
      std::vector<R> pt(c_.begin(), c_.begin() + i + 1);
      out.push_back(evaluate(rs.neg[i], pt, c_[0]));
    }
    return WittVector(std::move(out));
  }

  /// [a] * (x_0, x_1, ...) = (a x_0, a^p x_1, a^{p^2} x_2, ...)
  WittVector teichmuller_scale(const R& a) const {
    std::vector<R> out;
    R ap = a;
    for (unsigned i = 0; i < length(); ++i) {
      out.push_back(ap * c_[i]);
      if (i + 1 < length()) ap = frobenius_power(ap);
    }
    return WittVector(std::move(out));
  }

  WittVector frobenius() const {
    std::vector<R> out;
    for (const auto& x : c_) out.push_back(frobenius_power(x));
    return WittVector(std::move(out));
  }
  WittVector verschiebung() const {
    std::vector<R> out(length(), c_[0].zero_like());
    for (unsigned i = 1; i < length(); ++i) out[i] = c_[i - 1];
    return WittVector(std::move(out));
  }
  WittVector times_p() const {
    std::vector<R> out(length(), c_[0].zero_like());
    for (unsigned i = 1; i < length(); ++i) out[i] = frobenius_power(c_[i - 1]);
    return WittVector(std::move(out));
  }
  WittVector times_p_power(unsigned t) const {
    if (t >= length()) return zero(c_[0], length());
    WittVector r = *this;
    for (unsigned i = 0; i < t; ++i) r = r.times_p();
    return r;
  }
  WittVector times_int(long k) const {
    WittVector acc = zero(c_[0], length());
    WittVector base = k < 0 ? -*this : *this;
    unsigned long u = k < 0 ? static_cast<unsigned long>(-k) : static_cast<unsigned long>(k);
    while (u > 0) {
      if (u & 1) acc = acc + base;
      u >>= 1;
      if (u) base = base + base;
    }
    return acc;
  }

  // Field-only operations.
  WittVector sigma(std::int64_t e) const
    requires std::is_same_v<R, FieldElement>
  {
    std::vector<R> out;
    for (const auto& x : c_) out.push_back(x.frobenius(e));
    return WittVector(std::move(out));
  }
  /// Digits c_t with this = sum_t p^t [c_t]; uses (x_0, x_1, ...) = sum_t V^t [x_t] = sum_t p^t [x_t^{1/p^t}].
  std::vector<FieldElement> digits() const
    requires std::is_same_v<R, FieldElement>
  {
    std::vector<FieldElement> d;
    for (unsigned t = 0; t < length(); ++t) d.push_back(c_[t].frobenius(-static_cast<std::int64_t>(t)));
    return d;
  }
  static WittVector assemble(const std::vector<FieldElement>& d)
    requires std::is_same_v<R, FieldElement>
  {
    const unsigned n = static_cast<unsigned>(d.size());
    WittVector acc = zero(d[0], n);
    for (unsigned t = 0; t < n; ++t) acc = acc + teichmuller(d[t], n).times_p_power(t);
    return acc;
  }
  /// (xi_1^{1/p}, xi_2^{1/p}, ..., 0): the beta with xi = [xi_0] + p * beta.
  WittVector p_quotient() const
    requires std::is_same_v<R, FieldElement>
  {
    std::vector<R> out(length(), c_[0].zero_like());
    for (unsigned i = 0; i + 1 < length(); ++i) out[i] = c_[i + 1].frobenius(-1);
    return WittVector(std::move(out));
  }

 private:
  void check(const WittVector& o) const {
    if (o.length() != length()) throw std::invalid_argument("Witt vectors of different lengths");
  }
  WittVector apply_binary(const std::vector<ReducedPoly>& polys, const WittVector& o) const {
    const unsigned n = length();
    std::vector<R> pt(2 * n, c_[0].zero_like());
    for (unsigned i = 0; i < n; ++i) {
      pt[i] = c_[i];
      pt[n + i] = o.c_[i];
    }
    std::vector<R> out;
    for (unsigned i = 0; i < n; ++i) out.push_back(evaluate(polys[i], pt, c_[0]));
    return WittVector(std::move(out));
  }

  std::vector<R> c_;
};

template <CoefficientRing R>
std::ostream& operator<<(std::ostream& os, const WittVector<R>& w) {
  os << "(";
  for (unsigned i = 0; i < w.length(); ++i) os << (i ? ", " : "") << w[i];
  return os << ")";
}

using FieldWitt = WittVector<FieldElement>;

}  // namespace wd
