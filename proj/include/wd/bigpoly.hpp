#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <array>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "wd/errors.hpp"

namespace wd {

inline constexpr std::size_t kMaxPolyVars = 16;

using Exponents = std::array<std::uint16_t, kMaxPolyVars>;

struct ExponentsHash {
  std::size_t operator()(const Exponents& e) const noexcept {
    std::uint64_t h = 1469598103934665603ull;
    for (auto x : e) {
      h ^= x;
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }
};

/// Multivariate polynomial with arbitrary-precision integer coefficients, monomials kept sorted.
class IntPoly {
 public:
  using Term = std::pair<Exponents, mpz_class>;

  IntPoly() = default;

  static IntPoly constant(const mpz_class& c) {
    IntPoly r;
    if (c != 0) r.terms_.push_back({Exponents{}, c});
    return r;
  }
  static IntPoly variable(std::size_t v, std::uint16_t power = 1) {
    IntPoly r;
    Exponents e{};
    e[v] = power;
    r.terms_.push_back({e, mpz_class(1)});
    return r;
  }
  static IntPoly from_map(std::unordered_map<Exponents, mpz_class, ExponentsHash>&& acc) {
    IntPoly r;
    r.terms_.reserve(acc.size());
    for (auto& [e, c] : acc)
      if (c != 0) r.terms_.emplace_back(e, std::move(c));
    std::sort(r.terms_.begin(), r.terms_.end(), [](const Term& a, const Term& b) { return a.first < b.first; });
    return r;
  }

  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool operator==(const IntPoly& o) const { return terms_ == o.terms_; }

  IntPoly operator+(const IntPoly& o) const { return combine(o, 1); }
  IntPoly operator-(const IntPoly& o) const { return combine(o, -1); }
  IntPoly operator-() const {
    IntPoly r = *this;
    for (auto& t : r.terms_) t.second = -t.second;
    return r;
  }
  IntPoly operator*(const mpz_class& c) const {
    if (c == 0) return {};
    IntPoly r = *this;
    for (auto& t : r.terms_) t.second *= c;
    return r;
  }
  IntPoly operator*(const IntPoly& o) const {
    std::unordered_map<Exponents, mpz_class, ExponentsHash> acc;
    acc.reserve(terms_.size() * o.terms_.size() / 2 + 1);
    mpz_class prod;
    for (const auto& [ea, ca] : terms_)
      for (const auto& [eb, cb] : o.terms_) {
        Exponents e;
        for (std::size_t i = 0; i < kMaxPolyVars; ++i) e[i] = static_cast<std::uint16_t>(ea[i] + eb[i]);
        prod = ca * cb;
        acc[e] += prod;
      }
    return from_map(std::move(acc));
  }

  IntPoly pow(std::uint64_t e) const {
    IntPoly result = constant(1), base = *this;
    while (e > 0) {
      if (e & 1) result = result * base;
      e >>= 1;
      if (e) base = base * base;
    }
    return result;
  }

  /// Exact division by an integer; throws InternalError if any coefficient is not divisible.
  IntPoly exact_div(const mpz_class& d) const {
    IntPoly r = *this;
    for (auto& t : r.terms_) {
      if (!mpz_divisible_p(t.second.get_mpz_t(), d.get_mpz_t()))
        throw InternalError("inexact division by " + d.get_str() + " in structure polynomial generation");
      mpz_divexact(t.second.get_mpz_t(), t.second.get_mpz_t(), d.get_mpz_t());
    }
    return r;
  }

  /// Substitute polynomials for variables 0..subs.size()-1.
  IntPoly substitute(const std::vector<IntPoly>& subs) const {
    IntPoly out;
    std::vector<std::vector<IntPoly>> powers(subs.size());
    for (const auto& [e, c] : terms_) {
      IntPoly term = constant(c);
      for (std::size_t v = 0; v < subs.size(); ++v) {
        if (e[v] == 0) continue;
        auto& pv = powers[v];
        if (pv.empty()) pv.push_back(constant(1));
        while (pv.size() <= e[v]) pv.push_back(pv.back() * subs[v]);
        term = term * pv[e[v]];
      }
      out = out + term;
    }
    return out;
  }

  std::size_t total_degree_weighted(const std::vector<std::uint64_t>& weights) const {
    std::size_t best = 0;
    for (const auto& [e, c] : terms_) {
      std::size_t d = 0;
      for (std::size_t i = 0; i < weights.size(); ++i) d += e[i] * weights[i];
      best = std::max(best, d);
    }
    return best;
  }

 private:
  IntPoly combine(const IntPoly& o, int sign) const {
    IntPoly r;
    r.terms_.reserve(terms_.size() + o.terms_.size());
    std::size_t i = 0, j = 0;
    while (i < terms_.size() || j < o.terms_.size()) {
      if (j == o.terms_.size() || (i < terms_.size() && terms_[i].first < o.terms_[j].first)) {
        r.terms_.push_back(terms_[i++]);
      } else if (i == terms_.size() || o.terms_[j].first < terms_[i].first) {
        r.terms_.push_back({o.terms_[j].first, sign > 0 ? o.terms_[j].second : mpz_class(-o.terms_[j].second)});
        ++j;
      } else {
        mpz_class c = terms_[i].second;
        if (sign > 0) {
          c += o.terms_[j].second;
        } else {
          c -= o.terms_[j].second;
        }
        if (c != 0) r.terms_.push_back({terms_[i].first, std::move(c)});
        ++i;
        ++j;
      }
    }
    return r;
  }

  std::vector<Term> terms_;
};

}  // namespace wd
