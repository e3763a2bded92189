#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "wd/errors.hpp"

namespace wd {

inline constexpr unsigned kDefaultMaxFieldDegree = 16;
inline constexpr unsigned kMaxFieldDegree = 20;

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline std::uint64_t ipow(std::uint64_t b, unsigned e) {
  std::uint64_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

namespace detail {

// Dense polynomials over F_p, low degree first, trailing zeros trimmed.
using PolyP = std::vector<std::uint32_t>;

inline void trim(PolyP& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline std::uint32_t inv_mod_p(std::uint32_t a, std::uint32_t p) {
  std::uint64_t r = 1, b = a % p;
  for (std::uint32_t e = p - 2; e > 0; e >>= 1) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
  }
  return static_cast<std::uint32_t>(r);
}

// Remainder of a modulo b (b nonzero).
inline PolyP poly_mod(PolyP a, const PolyP& b, std::uint32_t p) {
  trim(a);
  const std::size_t db = b.size() - 1;
  const std::uint32_t lead_inv = inv_mod_p(b.back(), p);
  while (a.size() >= b.size()) {
    const std::uint32_t c = static_cast<std::uint32_t>(std::uint64_t(a.back()) * lead_inv % p);
    const std::size_t shift = a.size() - 1 - db;
    for (std::size_t i = 0; i <= db; ++i) {
      a[shift + i] = static_cast<std::uint32_t>((a[shift + i] + std::uint64_t(p - c) * b[i]) % p);
    }
    trim(a);
  }
  return a;
}

inline PolyP poly_mulmod(const PolyP& a, const PolyP& b, const PolyP& mod, std::uint32_t p) {
  if (a.empty() || b.empty()) return {};
  PolyP r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      r[i + j] = static_cast<std::uint32_t>((r[i + j] + std::uint64_t(a[i]) * b[j]) % p);
  return poly_mod(std::move(r), mod, p);
}

inline PolyP poly_powmod(PolyP base, std::uint64_t e, const PolyP& mod, std::uint32_t p) {
  PolyP r{1};
  base = poly_mod(std::move(base), mod, p);
  while (e > 0) {
    if (e & 1) r = poly_mulmod(r, base, mod, p);
    e >>= 1;
    if (e) base = poly_mulmod(base, base, mod, p);
  }
  return r;
}

inline PolyP digits_of(std::uint64_t index, std::uint32_t p, unsigned len) {
  PolyP c(len, 0);
  for (unsigned i = 0; i < len; ++i) {
    c[i] = static_cast<std::uint32_t>(index % p);
    index /= p;
  }
  return c;
}

inline std::uint64_t index_of(const PolyP& c, std::uint32_t p) {
  std::uint64_t v = 0;
  for (std::size_t i = c.size(); i-- > 0;) v = v * p + c[i];
  return v;
}

// Trial division by every monic polynomial of degree 1..deg/2.
inline bool is_irreducible(const PolyP& f, std::uint32_t p) {
  const unsigned m = static_cast<unsigned>(f.size() - 1);
  for (unsigned d = 1; d <= m / 2; ++d) {
    const std::uint64_t count = ipow(p, d);
    for (std::uint64_t low = 0; low < count; ++low) {
      PolyP g = digits_of(low, p, d);
      g.push_back(1);
      if (poly_mod(f, g, p).empty()) return false;
    }
  }
  return true;
}

inline std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

}  // namespace detail

struct FieldData {
  std::uint32_t p = 0;
  unsigned m = 0;
  std::uint32_t q = 0;
  std::vector<std::uint32_t> modulus;  // c_0..c_m, monic
  std::vector<std::uint32_t> weights;  // p^i
  std::vector<std::uint32_t> exp;      // doubled: exp[k] = g^k for 0 <= k < 2(q-1)
  std::vector<std::uint32_t> log;      // log[0] unused
  std::vector<std::uint32_t> add_table;  // q*q when q <= 256
  std::vector<std::uint32_t> neg_table;
  std::uint32_t primitive = 0;
};

namespace detail {

inline FieldData* build_field(std::uint32_t p, unsigned m) {
  auto fd = std::make_unique<FieldData>();
  fd->p = p;
  fd->m = m;
  const std::uint64_t q64 = ipow(p, m);
  if (q64 > kFieldExhaustionGuard)
    throw GuardExceeded("field of size " + std::to_string(q64) + " exceeds the exhaustion guard");
  fd->q = static_cast<std::uint32_t>(q64);
  const std::uint32_t q = fd->q;

  for (unsigned i = 0; i < m; ++i) fd->weights.push_back(static_cast<std::uint32_t>(ipow(p, i)));

  if (m == 1) {
    fd->modulus = {0, 1};
  } else {
    for (std::uint64_t low = 0; low < q64; ++low) {
      PolyP f = digits_of(low, p, m);
      f.push_back(1);
      if (f[0] == 0) continue;
      if (is_irreducible(f, p)) {
        fd->modulus = f;
        break;
      }
    }
  }

  fd->neg_table.resize(q);
  for (std::uint32_t x = 0; x < q; ++x) {
    std::uint32_t r = 0;
    std::uint32_t t = x;
    for (unsigned i = 0; i < m; ++i) {
      const std::uint32_t c = t % p;
      t /= p;
      r += ((p - c) % p) * fd->weights[i];
    }
    fd->neg_table[x] = r;
  }

  // Primitive element: least index whose order is q-1.
  const std::uint64_t order = q - 1;
  const auto factors = prime_factors(order);
  if (q == 2) {
    fd->primitive = 1;
  } else {
    for (std::uint32_t cand = 1; cand < q; ++cand) {
      const PolyP g = digits_of(cand, p, m);
      bool ok = true;
      for (std::uint64_t l : factors) {
        PolyP r = poly_powmod(g, order / l, fd->modulus, p);
        if (r.size() == 1 && r[0] == 1) {
          ok = false;
          break;
        }
      }
      if (ok) {
        fd->primitive = cand;
        break;
      }
    }
  }

  fd->exp.assign(2 * std::size_t(order) + 2, 0);
  fd->log.assign(q, 0);
  {
    const PolyP g = digits_of(fd->primitive, p, m);
    std::vector<std::uint32_t> cur(m, 0), xi(m, 0), next(m, 0);
    cur[0] = 1;
    for (std::uint64_t k = 0; k < order; ++k) {
      const std::uint32_t idx = static_cast<std::uint32_t>(index_of(cur, p));
      fd->exp[k] = idx;
      fd->log[idx] = static_cast<std::uint32_t>(k);
      // next = cur * g, computed as sum_i g_i * (x^i * cur)
      std::fill(next.begin(), next.end(), 0);
      xi = cur;
      for (unsigned i = 0; i < m; ++i) {
        if (i > 0) {
          const std::uint32_t top = xi[m - 1];
          for (unsigned j = m - 1; j > 0; --j) xi[j] = xi[j - 1];
          xi[0] = 0;
          if (top != 0)
            for (unsigned j = 0; j < m; ++j)
              xi[j] = static_cast<std::uint32_t>((xi[j] + std::uint64_t(p - top) * fd->modulus[j]) % p);
        }
        if (g[i] != 0)
          for (unsigned j = 0; j < m; ++j)
            next[j] = static_cast<std::uint32_t>((next[j] + std::uint64_t(g[i]) * xi[j]) % p);
      }
      cur.swap(next);
    }
    for (std::uint64_t k = order; k < 2 * order + 2; ++k) fd->exp[k] = fd->exp[k - order];
  }

  if (q <= 256) {
    fd->add_table.resize(std::size_t(q) * q);
    for (std::uint32_t a = 0; a < q; ++a)
      for (std::uint32_t b = 0; b < q; ++b) {
        std::uint32_t r = 0, x = a, y = b;
        for (unsigned i = 0; i < m; ++i) {
          r += ((x % p + y % p) % p) * fd->weights[i];
          x /= p;
          y /= p;
        }
        fd->add_table[std::size_t(a) * q + b] = r;
      }
  }
  return fd.release();
}

inline const FieldData* intern_field(std::uint32_t p, unsigned m) {
  static std::mutex mu;
  static std::map<std::pair<std::uint32_t, unsigned>, const FieldData*> registry;
  std::lock_guard<std::mutex> lock(mu);
  auto it = registry.find({p, m});
  if (it != registry.end()) return it->second;
  const FieldData* fd = build_field(p, m);
  registry.emplace(std::make_pair(p, m), fd);
  return fd;
}

}  // namespace detail

class Field;

/// Element of F_{p^m}, stored as the integer sum c_i p^i of its power-basis coordinates.
struct FieldElement {
  const FieldData* f = nullptr;
  std::uint32_t v = 0;

  Field field() const;
  std::vector<std::uint32_t> coeffs() const;
  bool is_zero() const { return v == 0; }

  FieldElement operator+(const FieldElement& o) const;
  FieldElement operator-(const FieldElement& o) const;
  FieldElement operator*(const FieldElement& o) const;
  FieldElement operator-() const;
  FieldElement& operator+=(const FieldElement& o) { return *this = *this + o; }
  FieldElement& operator-=(const FieldElement& o) { return *this = *this - o; }
  FieldElement& operator*=(const FieldElement& o) { return *this = *this * o; }
  bool operator==(const FieldElement& o) const { return f == o.f && v == o.v; }
  bool operator<(const FieldElement& o) const { return v < o.v; }

  FieldElement inv() const;
  FieldElement pow(std::int64_t e) const;
  FieldElement frobenius(std::int64_t e = 1) const;

  FieldElement zero_like() const { return {f, 0}; }
  FieldElement scalar_like(long c) const;
  std::uint32_t characteristic() const { return f->p; }
};

class Field {
 public:
  Field() = default;
  explicit Field(const FieldData* d) : d_(d) {}

  static Field create(std::uint32_t p, unsigned m, unsigned max_degree = kDefaultMaxFieldDegree) {
    if (!is_prime(p)) throw std::invalid_argument("field characteristic " + std::to_string(p) + " is not prime");
    if (m < 1 || m > max_degree || m > kMaxFieldDegree)
      throw std::invalid_argument("field degree " + std::to_string(m) + " out of bounds");
    return Field(detail::intern_field(p, m));
  }

  const FieldData* data() const { return d_; }
  std::uint32_t p() const { return d_->p; }
  unsigned m() const { return d_->m; }
  std::uint32_t q() const { return d_->q; }
  const std::vector<std::uint32_t>& modulus() const { return d_->modulus; }
  bool operator==(const Field& o) const { return d_ == o.d_; }
  bool operator!=(const Field& o) const { return d_ != o.d_; }

  // Raw operations on element indices.
  std::uint32_t add(std::uint32_t a, std::uint32_t b) const {
    if (d_->p == 2) return a ^ b;
    if (!d_->add_table.empty()) return d_->add_table[std::size_t(a) * d_->q + b];
    if (d_->m == 1) return static_cast<std::uint32_t>((std::uint64_t(a) + b) % d_->p);
    std::uint32_t r = 0;
    for (unsigned i = 0; i < d_->m; ++i) {
      r += ((a % d_->p + b % d_->p) % d_->p) * d_->weights[i];
      a /= d_->p;
      b /= d_->p;
    }
    return r;
  }
  std::uint32_t neg(std::uint32_t a) const { return d_->neg_table[a]; }
  std::uint32_t sub(std::uint32_t a, std::uint32_t b) const { return add(a, neg(b)); }
  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const {
    if (a == 0 || b == 0) return 0;
    return d_->exp[std::size_t(d_->log[a]) + d_->log[b]];
  }
  std::uint32_t inv(std::uint32_t a) const {
    if (a == 0) throw std::domain_error("inverse of zero");
    return d_->exp[(d_->q - 1 - d_->log[a]) % (d_->q - 1)];
  }
  std::uint32_t pow(std::uint32_t a, std::int64_t e) const {
    const std::int64_t ord = d_->q - 1;
    if (a == 0) {
      if (e == 0) return 1;
      if (e < 0) throw std::domain_error("negative power of zero");
      return 0;
    }
    std::int64_t k = static_cast<std::int64_t>((static_cast<__int128>(d_->log[a]) * (e % ord)) % ord);
    if (k < 0) k += ord;
    return d_->exp[k];
  }
  std::uint32_t frob(std::uint32_t a, std::int64_t e) const {
    if (a == 0) return 0;
    std::int64_t em = e % static_cast<std::int64_t>(d_->m);
    if (em < 0) em += d_->m;
    const std::uint64_t ord = d_->q - 1;
    const std::uint64_t pe = ipow(d_->p, static_cast<unsigned>(em)) % ord;
    return d_->exp[(std::uint64_t(d_->log[a]) * pe) % ord];
  }
  std::uint32_t from_int(long c) const {
    long r = c % static_cast<long>(d_->p);
    if (r < 0) r += d_->p;
    return static_cast<std::uint32_t>(r);
  }

  FieldElement elem(std::uint32_t v) const {
    if (v >= d_->q) throw std::out_of_range("field element index out of range");
    return {d_, v};
  }
  FieldElement from_coeffs(const std::vector<std::uint32_t>& c) const {
    std::uint64_t v = 0;
    for (std::size_t i = c.size(); i-- > 0;) v = v * d_->p + (c[i] % d_->p);
    return elem(static_cast<std::uint32_t>(v));
  }
  FieldElement zero() const { return {d_, 0}; }
  FieldElement one() const { return {d_, 1}; }
  FieldElement gen() const { return {d_, d_->m == 1 ? 0u : d_->p}; }
  FieldElement primitive() const { return {d_, d_->primitive}; }
  FieldElement scalar(long c) const { return {d_, from_int(c)}; }

  std::vector<FieldElement> elements() const {
    std::vector<FieldElement> out;
    out.reserve(d_->q);
    for (std::uint32_t v = 0; v < d_->q; ++v) out.push_back({d_, v});
    return out;
  }

  std::string modulus_string() const {
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = d_->modulus.size(); i-- > 0;) {
      const auto c = d_->modulus[i];
      if (c == 0) continue;
      if (!first) os << " + ";
      first = false;
      if (c != 1 || i == 0) os << c;
      if (i >= 1) os << "x";
      if (i > 1) os << "^" << i;
    }
    return os.str();
  }

  std::string to_string(std::uint32_t v) const {
    if (d_->m == 1) return std::to_string(v);
    auto c = detail::digits_of(v, d_->p, d_->m);
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = c.size(); i-- > 0;) {
      if (c[i] == 0) continue;
      if (!first) os << "+";
      first = false;
      if (c[i] != 1 || i == 0) os << c[i];
      if (i >= 1) os << "g";
      if (i > 1) os << "^" << i;
    }
    return first ? "0" : os.str();
  }

 private:
  const FieldData* d_ = nullptr;
};

inline Field FieldElement::field() const { return Field(f); }

inline std::vector<std::uint32_t> FieldElement::coeffs() const { return detail::digits_of(v, f->p, f->m); }

namespace detail {
inline void require_same(const FieldElement& a, const FieldElement& b) {
  if (a.f != b.f) throw std::invalid_argument("mixed-field operands");
}
}  // namespace detail

inline FieldElement FieldElement::operator+(const FieldElement& o) const {
  detail::require_same(*this, o);
  return {f, Field(f).add(v, o.v)};
}
inline FieldElement FieldElement::operator-(const FieldElement& o) const {
  detail::require_same(*this, o);
  return {f, Field(f).sub(v, o.v)};
}
inline FieldElement FieldElement::operator*(const FieldElement& o) const {
  detail::require_same(*this, o);
  return {f, Field(f).mul(v, o.v)};
}
inline FieldElement FieldElement::operator-() const { return {f, f->neg_table[v]}; }
inline FieldElement FieldElement::inv() const { return {f, Field(f).inv(v)}; }
inline FieldElement FieldElement::pow(std::int64_t e) const { return {f, Field(f).pow(v, e)}; }
inline FieldElement FieldElement::frobenius(std::int64_t e) const { return {f, Field(f).frob(v, e)}; }
inline FieldElement FieldElement::scalar_like(long c) const { return {f, Field(f).from_int(c)}; }

inline std::ostream& operator<<(std::ostream& os, const FieldElement& x) {
  return os << Field(x.f).to_string(x.v);
}

/// Injective ring map F_{p^a} -> F_{p^b}, tabulated on every source element.
struct FieldEmbedding {
  Field from;
  Field to;
  std::vector<std::uint32_t> image;

  FieldElement operator()(const FieldElement& x) const {
    if (x.f != from.data()) throw std::invalid_argument("element not in embedding source");
    return {to.data(), image[x.v]};
  }
};

/// Sparse univariate polynomial: (exponent, coefficient) pairs.
struct UniPoly {
  std::vector<std::pair<std::uint64_t, FieldElement>> terms;

  Field field() const { return terms.front().second.field(); }
  FieldElement eval(const FieldElement& x) const {
    FieldElement acc = x.zero_like();
    for (const auto& [e, c] : terms) acc += c * x.pow(static_cast<std::int64_t>(e));
    return acc;
  }
  std::uint64_t degree() const {
    std::uint64_t d = 0;
    for (const auto& [e, c] : terms)
      if (!c.is_zero()) d = std::max(d, e);
    return d;
  }
  bool is_zero() const {
    return std::all_of(terms.begin(), terms.end(), [](const auto& t) { return t.second.is_zero(); });
  }
};

inline FieldEmbedding identity_embedding(const Field& f) {
  FieldEmbedding e{f, f, {}};
  e.image.resize(f.q());
  for (std::uint32_t v = 0; v < f.q(); ++v) e.image[v] = v;
  return e;
}

/// Embedding sending the generator to the least root (by index) of the source modulus in the target.
inline FieldEmbedding embed(const Field& from, const Field& to) {
  if (from.p() != to.p() || to.m() % from.m() != 0)
    throw std::invalid_argument("no embedding between these fields");
  if (from == to) return identity_embedding(from);
  const auto& mod = from.modulus();
  std::optional<std::uint32_t> theta;
  for (std::uint32_t v = 0; v < to.q() && !theta; ++v) {
    std::uint32_t acc = 0;
    for (std::size_t i = mod.size(); i-- > 0;) acc = to.add(to.mul(acc, v), mod[i]);
    if (acc == 0) theta = v;
  }
  if (!theta) throw InternalError("source modulus has no root in target field");
  FieldEmbedding e{from, to, {}};
  e.image.resize(from.q());
  std::vector<std::uint32_t> powers(from.m());
  powers[0] = 1;
  for (unsigned i = 1; i < from.m(); ++i) powers[i] = to.mul(powers[i - 1], *theta);
  for (std::uint32_t v = 0; v < from.q(); ++v) {
    std::uint32_t acc = 0, t = v;
    for (unsigned i = 0; i < from.m(); ++i) {
      const std::uint32_t c = t % from.p();
      t /= from.p();
      for (std::uint32_t k = 0; k < c; ++k) acc = to.add(acc, powers[i]);
    }
    e.image[v] = acc;
  }
  return e;
}

inline FieldEmbedding compose(const FieldEmbedding& first, const FieldEmbedding& second) {
  if (first.to != second.from) throw std::invalid_argument("embeddings do not compose");
  FieldEmbedding e{first.from, second.to, {}};
  e.image.resize(first.from.q());
  for (std::uint32_t v = 0; v < first.from.q(); ++v) e.image[v] = second.image[first.image[v]];
  return e;
}

inline UniPoly map_poly(const UniPoly& f, const FieldEmbedding& e) {
  UniPoly g;
  for (const auto& [k, c] : f.terms) g.terms.emplace_back(k, e(c));
  return g;
}

struct RootSearch {
  Field field;                 // field where the roots live
  FieldEmbedding embedding;    // original field -> field
  std::vector<FieldElement> roots;  // sorted by index
  unsigned extension_factor = 1;
};

/// Exhaustive root search over F_{p^m}, then F_{p^{mt}} for t = 2, 3, ... while m*t <= budget.
inline RootSearch find_roots(const UniPoly& f, unsigned extension_budget = kDefaultMaxFieldDegree,
                             std::size_t guard = kFieldExhaustionGuard) {
  if (f.terms.empty() || f.is_zero()) throw std::invalid_argument("find_roots on the zero polynomial");
  const Field base = f.field();
  for (const auto& t : f.terms)
    if (t.second.f != base.data()) throw std::invalid_argument("mixed-field polynomial");
  if (extension_budget < base.m()) throw std::invalid_argument("extension budget below base degree");
  for (unsigned t = 1; base.m() * t <= extension_budget; ++t) {
    const unsigned deg = base.m() * t;
    if (ipow(base.p(), deg) > guard)
      throw GuardExceeded("root search field F_" + std::to_string(base.p()) + "^" + std::to_string(deg) +
                          " exceeds the exhaustion guard");
    const Field k = t == 1 ? base : Field::create(base.p(), deg, std::max(deg, kDefaultMaxFieldDegree));
    FieldEmbedding emb = embed(base, k);
    const UniPoly g = map_poly(f, emb);
    std::vector<FieldElement> roots;
    for (std::uint32_t v = 0; v < k.q(); ++v) {
      const FieldElement x = k.elem(v);
      if (g.eval(x).is_zero()) roots.push_back(x);
    }
    if (!roots.empty()) return RootSearch{k, std::move(emb), std::move(roots), t};
  }
  throw BudgetExhausted("no root within extension budget " + std::to_string(extension_budget));
}

}  // namespace wd
