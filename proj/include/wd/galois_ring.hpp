#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "wd/field.hpp"

namespace wd {

/// Element of GR(p^N, m) = (Z/p^N)[x]/(h), h the integer lift of the field modulus.
struct GRElem {
  std::array<std::uint64_t, kMaxFieldDegree> c{};
  bool operator==(const GRElem& o) const { return c == o.c; }
};

/// Galois ring of characteristic p^N lifting a finite field; it is W_N(F_q) in disguise.
class GaloisRing {
 public:
  static std::shared_ptr<const GaloisRing> get(const Field& k, unsigned N) {
    static std::mutex mu;
    static std::map<std::pair<const FieldData*, unsigned>, std::shared_ptr<const GaloisRing>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[{k.data(), N}];
    if (!slot) slot = std::shared_ptr<const GaloisRing>(new GaloisRing(k, N));
    return slot;
  }

  const Field& field() const { return k_; }
  unsigned precision() const { return N_; }
  unsigned m() const { return m_; }
  std::uint64_t modulus() const { return mod_; }
  std::uint32_t p() const { return k_.p(); }

  GRElem zero() const { return {}; }
  GRElem one() const {
    GRElem r;
    r.c[0] = 1 % mod_;
    return r;
  }
  GRElem basis(unsigned j) const {
    GRElem r;
    r.c[j] = 1 % mod_;
    return r;
  }
  GRElem scalar(std::int64_t v) const {
    GRElem r;
    std::int64_t s = v % static_cast<std::int64_t>(mod_);
    if (s < 0) s += static_cast<std::int64_t>(mod_);
    r.c[0] = static_cast<std::uint64_t>(s);
    return r;
  }

  GRElem add(const GRElem& a, const GRElem& b) const {
    GRElem r;
    for (unsigned i = 0; i < m_; ++i) {
      std::uint64_t s = a.c[i] + b.c[i];
      r.c[i] = s >= mod_ ? s - mod_ : s;
    }
    return r;
  }
  GRElem sub(const GRElem& a, const GRElem& b) const {
    GRElem r;
    for (unsigned i = 0; i < m_; ++i) r.c[i] = a.c[i] >= b.c[i] ? a.c[i] - b.c[i] : a.c[i] + mod_ - b.c[i];
    return r;
  }
  GRElem neg(const GRElem& a) const { return sub(zero(), a); }
  GRElem scale(const GRElem& a, std::uint64_t s) const {
    GRElem r;
    s %= mod_;
    for (unsigned i = 0; i < m_; ++i) r.c[i] = mulmod(a.c[i], s);
    return r;
  }
  GRElem mul(const GRElem& a, const GRElem& b) const {
    if (m_ == 1) {
      GRElem r;
      r.c[0] = mulmod(a.c[0], b.c[0]);
      return r;
    }
    std::array<unsigned __int128, 2 * kMaxFieldDegree> t{};
    for (unsigned i = 0; i < m_; ++i) {
      if (a.c[i] == 0) continue;
      for (unsigned j = 0; j < m_; ++j) t[i + j] += static_cast<unsigned __int128>(a.c[i]) * b.c[j] % mod_;
    }
    std::array<std::uint64_t, 2 * kMaxFieldDegree> u{};
    for (unsigned i = 0; i + 1 < 2 * m_; ++i) u[i] = static_cast<std::uint64_t>(t[i] % mod_);
    // x^m = -sum h_i x^i
    for (unsigned k = 2 * m_ - 2; k >= m_; --k) {
      const std::uint64_t top = u[k];
      u[k] = 0;
      if (top != 0)
        for (unsigned i = 0; i < m_; ++i) {
          const std::uint64_t sub = mulmod(top, h_[i]);
          u[k - m_ + i] = u[k - m_ + i] >= sub ? u[k - m_ + i] - sub : u[k - m_ + i] + mod_ - sub;
        }
    }
    GRElem r;
    for (unsigned i = 0; i < m_; ++i) r.c[i] = u[i];
    return r;
  }
  GRElem pow(GRElem base, std::uint64_t e) const {
    GRElem r = one();
    while (e > 0) {
      if (e & 1) r = mul(r, base);
      e >>= 1;
      if (e) base = mul(base, base);
    }
    return r;
  }
  /// x^(p^k)
  GRElem pow_p(GRElem x, unsigned k) const {
    for (unsigned i = 0; i < k; ++i) x = pow(x, k_.p());
    return x;
  }

  bool is_zero(const GRElem& a) const {
    for (unsigned i = 0; i < m_; ++i)
      if (a.c[i] != 0) return false;
    return true;
  }
  /// p-adic valuation (N for zero).
  unsigned valuation(const GRElem& a) const {
    unsigned v = N_;
    for (unsigned i = 0; i < m_; ++i) {
      if (a.c[i] == 0) continue;
      unsigned w = 0;
      std::uint64_t x = a.c[i];
      while (x % k_.p() == 0) {
        x /= k_.p();
        ++w;
      }
      v = std::min(v, w);
    }
    return v;
  }
  /// Exact division by p^k of an element divisible by p^k; result meaningful mod p^(N-k).
  GRElem div_p(const GRElem& a, unsigned k) const {
    const std::uint64_t d = ipow(k_.p(), k);
    GRElem r;
    for (unsigned i = 0; i < m_; ++i) {
      if (a.c[i] % d != 0) throw InternalError("inexact division by p^k in Galois ring");
      r.c[i] = a.c[i] / d;
    }
    return r;
  }

  /// Coefficientwise lift of a field element (digits in [0, p)).
  GRElem lift(const FieldElement& x) const {
    check(x);
    GRElem r;
    std::uint32_t v = x.v;
    for (unsigned i = 0; i < m_; ++i) {
      r.c[i] = v % k_.p();
      v /= k_.p();
    }
    return r;
  }
  FieldElement reduce(const GRElem& a) const {
    std::uint64_t v = 0;
    for (unsigned i = m_; i-- > 0;) v = v * k_.p() + a.c[i] % k_.p();
    return k_.elem(static_cast<std::uint32_t>(v));
  }

  /// Teichmuller representative: lift(c)^(q^(N-1)).
  GRElem teichmuller(const FieldElement& x) const {
    check(x);
    if (x.v == 0) return zero();
    std::lock_guard<std::mutex> lock(cache_mu_);
    auto it = teich_.find(x.v);
    if (it != teich_.end()) return it->second;
    GRElem t = lift(x);
    for (unsigned i = 0; i + 1 < N_; ++i) t = pow(t, k_.q());
    teich_.emplace(x.v, t);
    return t;
  }

  /// Teichmuller digits (c_0, ..., c_{N-1}) with a = sum p^t [c_t].
  std::vector<FieldElement> digits(GRElem a) const {
    std::vector<FieldElement> out;
    out.reserve(N_);
    for (unsigned t = 0; t < N_; ++t) {
      const FieldElement c = reduce(a);
      out.push_back(c);
      a = sub(a, teichmuller(c));
      if (t + 1 < N_) a = div_p(a, 1);
    }
    return out;
  }
  GRElem from_digits(const std::vector<FieldElement>& d) const {
    GRElem r = zero();
    std::uint64_t pt = 1;
    for (std::size_t t = 0; t < d.size() && t < N_; ++t) {
      r = add(r, scale(teichmuller(d[t]), pt));
      pt *= k_.p();
    }
    return r;
  }

  /// Frobenius automorphism sigma^e (e may be negative), Z-linear on the power basis.
  GRElem sigma(const GRElem& a, std::int64_t e) const {
    std::int64_t em = e % static_cast<std::int64_t>(m_);
    if (em < 0) em += m_;
    if (em == 0) return a;
    const auto& mat = sigma_matrix(static_cast<unsigned>(em));
    GRElem r;
    for (unsigned j = 0; j < m_; ++j) {
      if (a.c[j] == 0) continue;
      for (unsigned i = 0; i < m_; ++i) r.c[i] = (r.c[i] + mulmod(a.c[j], mat[j].c[i])) % mod_;
    }
    return r;
  }

 private:
  GaloisRing(const Field& k, unsigned N) : k_(k), N_(N), m_(k.m()) {
    if (N == 0) throw std::invalid_argument("Galois ring precision must be positive");
    long double approx = 1;
    for (unsigned i = 0; i < N; ++i) approx *= k.p();
    if (approx > 4.0e18L) throw GuardExceeded("p^N too large for 64-bit Galois ring arithmetic");
    mod_ = ipow(k.p(), N);
    for (unsigned i = 0; i < m_; ++i) h_[i] = k.modulus()[i] % mod_;
  }

  void check(const FieldElement& x) const {
    if (x.f != k_.data()) throw std::invalid_argument("field element from a different field");
  }

  std::uint64_t mulmod(std::uint64_t a, std::uint64_t b) const {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % mod_);
  }

  const std::vector<GRElem>& sigma_matrix(unsigned e) const {
    std::lock_guard<std::mutex> lock(sigma_mu_);
    auto it = sigma_.find(e);
    if (it != sigma_.end()) return it->second;
    std::vector<GRElem> cols;
    for (unsigned j = 0; j < m_; ++j) {
      // sigma acts on digits: sum p^t [c_t] -> sum p^t [c_t^(p^e)]
      GRElem b = basis(j);
      std::vector<FieldElement> d;
      {
        GRElem a = b;
        for (unsigned t = 0; t < N_; ++t) {
          const FieldElement c = reduce(a);
          d.push_back(c.frobenius(e));
          GRElem tc = teich_unlocked(c);
          a = sub(a, tc);
          if (t + 1 < N_) a = div_p(a, 1);
        }
      }
      GRElem r = zero();
      std::uint64_t pt = 1;
      for (unsigned t = 0; t < N_; ++t) {
        r = add(r, scale(teich_unlocked(d[t]), pt));
        pt *= k_.p();
      }
      cols.push_back(r);
    }
    return sigma_.emplace(e, std::move(cols)).first->second;
  }

  GRElem teich_unlocked(const FieldElement& x) const {
    if (x.v == 0) return zero();
    GRElem t = lift(x);
    for (unsigned i = 0; i + 1 < N_; ++i) t = pow(t, k_.q());
    return t;
  }

  Field k_;
  unsigned N_;
  unsigned m_;
  std::uint64_t mod_ = 1;
  std::array<std::uint64_t, kMaxFieldDegree> h_{};
  mutable std::mutex cache_mu_;
  mutable std::unordered_map<std::uint32_t, GRElem> teich_;
  mutable std::mutex sigma_mu_;
  mutable std::map<unsigned, std::vector<GRElem>> sigma_;
};

}  // namespace wd
