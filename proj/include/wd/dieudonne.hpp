#pragma once

#include <cstdint>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>

#include "wd/galois_ring.hpp"
#include "wd/witt.hpp"

namespace wd {

/// Element of W_N(F_q) in Galois-ring coordinates, with the operations the ring E needs.
struct GRCoef {
  const GaloisRing* gr = nullptr;
  GRElem v{};

  GRCoef operator+(const GRCoef& o) const { return {gr, gr->add(v, o.v)}; }
  GRCoef operator-(const GRCoef& o) const { return {gr, gr->sub(v, o.v)}; }
  GRCoef operator*(const GRCoef& o) const { return {gr, gr->mul(v, o.v)}; }
  GRCoef operator-() const { return {gr, gr->neg(v)}; }
  bool operator==(const GRCoef& o) const { return gr == o.gr && v == o.v; }
  bool is_zero() const { return gr->is_zero(v); }
  GRCoef sigma(std::int64_t e) const { return {gr, gr->sigma(v, e)}; }
  GRCoef times_p_power(unsigned t) const {
    if (t >= gr->precision()) return {gr, gr->zero()};
    return {gr, gr->scale(v, ipow(gr->p(), t))};
  }
};

inline GRCoef to_gr(const GaloisRing& gr, const FieldWitt& w) { return {&gr, gr.from_digits(w.digits())}; }
inline FieldWitt to_witt(const GaloisRing& gr, const GRCoef& c) {
  return FieldWitt::assemble(gr.digits(c.v));
}

/// Element of E/p^N E: sum of coeff * X_a with X_a = F^a (a >= 0) or V^{-a} (a < 0), coefficients on the left.
template <class C>
struct DieudonneElement {
  std::map<int, C> terms;

  static DieudonneElement monomial(const C& coeff, int a) {
    DieudonneElement r;
    if (!coeff.is_zero()) r.terms.emplace(a, coeff);
    return r;
  }

  bool is_zero() const { return terms.empty(); }
  bool operator==(const DieudonneElement& o) const { return terms == o.terms; }

  void add_term(int a, const C& c) {
    if (c.is_zero()) return;
    auto it = terms.find(a);
    if (it == terms.end()) {
      terms.emplace(a, c);
      return;
    }
    it->second = it->second + c;
    if (it->second.is_zero()) terms.erase(it);
  }

  DieudonneElement operator+(const DieudonneElement& o) const {
    DieudonneElement r = *this;
    for (const auto& [a, c] : o.terms) r.add_term(a, c);
    return r;
  }
  DieudonneElement operator-() const {
    DieudonneElement r;
    for (const auto& [a, c] : terms) r.terms.emplace(a, -c);
    return r;
  }
  DieudonneElement operator-(const DieudonneElement& o) const { return *this + (-o); }

  /// Left scalar multiplication.
  DieudonneElement scale(const C& xi) const {
    DieudonneElement r;
    for (const auto& [a, c] : terms) r.add_term(a, xi * c);
    return r;
  }

  /// (xi X_a)(eta X_b) = xi sigma^a(eta) p^t X_{a+b}, t = min(|a|, |b|) when a, b have opposite signs.
  DieudonneElement operator*(const DieudonneElement& o) const {
    DieudonneElement r;
    for (const auto& [a, xi] : terms)
      for (const auto& [b, eta] : o.terms) {
        C c = xi * eta.sigma(a);
        if ((a > 0 && b < 0) || (a < 0 && b > 0)) c = c.times_p_power(static_cast<unsigned>(std::min(std::abs(a), std::abs(b))));
        r.add_term(a + b, c);
      }
    return r;
  }

  int min_index() const { return terms.empty() ? 0 : terms.begin()->first; }
  int max_index() const { return terms.empty() ? 0 : terms.rbegin()->first; }
};

using WittDElem = DieudonneElement<FieldWitt>;
using GRDElem = DieudonneElement<GRCoef>;

inline std::string monomial_name(int a) {
  if (a == 0) return "1";
  std::string s = a > 0 ? "F" : "V";
  if (std::abs(a) > 1) s += "^" + std::to_string(std::abs(a));
  return s;
}

inline std::string to_string(const WittDElem& x) {
  if (x.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [a, c] : x.terms) {
    if (!first) os << " + ";
    first = false;
    os << c;
    if (a != 0) os << "*" << monomial_name(a);
  }
  return os.str();
}

/// Convenience constructors over W_N(k).
struct WittDBuilder {
  Field k;
  unsigned N;

  FieldWitt teich(const FieldElement& c) const { return FieldWitt::teichmuller(c, N); }
  FieldWitt one_coef() const { return FieldWitt::one(k.one(), N); }
  WittDElem one() const { return WittDElem::monomial(one_coef(), 0); }
  WittDElem F(int j) const { return WittDElem::monomial(one_coef(), j); }
  WittDElem V(int j) const { return WittDElem::monomial(one_coef(), -j); }
  WittDElem term(const FieldWitt& c, int a) const { return WittDElem::monomial(c, a); }
  WittDElem teich_term(const FieldElement& c, int a) const { return WittDElem::monomial(teich(c), a); }
  WittDElem p_times(const WittDElem& x) const {
    WittDElem r;
    for (const auto& [a, c] : x.terms) r.add_term(a, c.times_p());
    return r;
  }
};

inline GRDElem to_gr(const GaloisRing& gr, const WittDElem& x) {
  GRDElem r;
  for (const auto& [a, c] : x.terms) r.add_term(a, to_gr(gr, c));
  return r;
}
inline WittDElem to_witt(const GaloisRing& gr, const GRDElem& x) {
  WittDElem r;
  for (const auto& [a, c] : x.terms) r.add_term(a, to_witt(gr, c));
  return r;
}

}  // namespace wd
