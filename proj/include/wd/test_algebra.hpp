#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "wd/field.hpp"

namespace wd {

/// Rewriting rule x_var^bound -> coeff * (monomial in variables of lower index), or -> 0.
struct TruncationRule {
  unsigned bound = 0;
  std::optional<std::pair<std::uint32_t, std::vector<unsigned>>> rhs;  // (coeff index, exponents)
};

class TestAlgebra;

/// Element of a TestAlgebra: sparse (basis index, coefficient index) pairs sorted by index.
struct AlgebraElement {
  const TestAlgebra* alg = nullptr;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> terms;

  AlgebraElement operator+(const AlgebraElement& o) const;
  AlgebraElement operator-(const AlgebraElement& o) const;
  AlgebraElement operator*(const AlgebraElement& o) const;
  AlgebraElement operator-() const;
  bool operator==(const AlgebraElement& o) const { return alg == o.alg && terms == o.terms; }
  bool is_zero() const { return terms.empty(); }
  AlgebraElement zero_like() const { return {alg, {}}; }
  AlgebraElement scalar_like(long c) const;
  std::uint32_t characteristic() const;
  AlgebraElement scale(std::uint32_t c) const;
};

/// Finite-dimensional local algebra F_q[x_0..x_{k-1}] / (triangular truncation rules).
class TestAlgebra {
 public:
  TestAlgebra(Field base, std::vector<std::string> names, std::vector<TruncationRule> rules)
      : base_(base), names_(std::move(names)), rules_(std::move(rules)) {
    if (names_.size() != rules_.size()) throw std::invalid_argument("one rule per generator required");
    radix_.resize(rules_.size());
    std::uint64_t d = 1;
    for (std::size_t v = 0; v < rules_.size(); ++v) {
      if (rules_[v].bound < 1) throw std::invalid_argument("truncation bound must be positive");
      if (rules_[v].rhs) {
        const auto& ex = rules_[v].rhs->second;
        if (ex.size() != rules_.size()) throw std::invalid_argument("rule monomial has wrong arity");
        for (std::size_t u = v; u < ex.size(); ++u)
          if (ex[u] != 0) throw std::invalid_argument("rules must rewrite to lower-index variables");
      }
      radix_[v] = static_cast<std::uint32_t>(d);
      d *= rules_[v].bound;
      if (d > (std::uint64_t(1) << 24)) throw GuardExceeded("test algebra basis too large");
    }
    dim_ = static_cast<std::uint32_t>(d);
  }

  /// F_q[x]/(x^bound).
  static std::shared_ptr<TestAlgebra> truncated(Field base, unsigned bound, std::string name = "x") {
    return std::make_shared<TestAlgebra>(base, std::vector<std::string>{std::move(name)},
                                         std::vector<TruncationRule>{{bound, std::nullopt}});
  }

  const Field& base() const { return base_; }
  std::uint32_t dim() const { return dim_; }
  std::size_t num_vars() const { return rules_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  const std::vector<TruncationRule>& rules() const { return rules_; }

  std::vector<unsigned> exponents(std::uint32_t index) const {
    std::vector<unsigned> e(rules_.size());
    for (std::size_t v = 0; v < rules_.size(); ++v) {
      e[v] = index % rules_[v].bound;
      index /= rules_[v].bound;
    }
    return e;
  }
  std::uint32_t index(const std::vector<unsigned>& e) const {
    std::uint32_t idx = 0;
    for (std::size_t v = 0; v < rules_.size(); ++v) idx += e[v] * radix_[v];
    return idx;
  }

  /// Normal form of coeff * x^e for arbitrary exponents; nullopt when it rewrites to 0.
  std::optional<std::pair<std::uint32_t, std::uint32_t>> normalize(std::vector<unsigned> e, std::uint32_t coeff) const {
    for (std::size_t v = rules_.size(); v-- > 0;) {
      while (e[v] >= rules_[v].bound) {
        const auto& r = rules_[v];
        if (!r.rhs) return std::nullopt;
        e[v] -= r.bound;
        coeff = base_.mul(coeff, r.rhs->first);
        for (std::size_t u = 0; u < v; ++u) e[u] += r.rhs->second[u];
      }
    }
    if (coeff == 0) return std::nullopt;
    return std::make_pair(index(e), coeff);
  }

  std::optional<std::pair<std::uint32_t, std::uint32_t>> mul_basis(std::uint32_t a, std::uint32_t b) const {
    auto ea = exponents(a), eb = exponents(b);
    for (std::size_t v = 0; v < ea.size(); ++v) ea[v] += eb[v];
    return normalize(std::move(ea), 1);
  }

  AlgebraElement zero() const { return {this, {}}; }
  AlgebraElement one() const { return {this, {{0, 1}}}; }
  AlgebraElement scalar(std::uint32_t c) const {
    if (c == 0) return zero();
    return {this, {{0, c}}};
  }
  AlgebraElement var(std::size_t v) const {
    std::vector<unsigned> e(rules_.size(), 0);
    e[v] = 1;
    auto nf = normalize(e, 1);
    if (!nf) return zero();
    return {this, {*nf}};
  }
  AlgebraElement basis(std::uint32_t idx) const { return {this, {{idx, 1}}}; }
  AlgebraElement monomial(const std::vector<unsigned>& e, std::uint32_t coeff = 1) const {
    auto nf = normalize(e, coeff);
    if (!nf) return zero();
    return {this, {*nf}};
  }
  /// Every element, in index order of the coefficient vector (guarded).
  std::vector<AlgebraElement> all_elements(std::size_t guard = std::size_t(1) << 16) const {
    std::uint64_t count = 1;
    for (std::uint32_t i = 0; i < dim_; ++i) {
      count *= base_.q();
      if (count > guard) throw GuardExceeded("test algebra too large to enumerate");
    }
    std::vector<AlgebraElement> out;
    out.reserve(count);
    for (std::uint64_t code = 0; code < count; ++code) {
      AlgebraElement x{this, {}};
      std::uint64_t t = code;
      for (std::uint32_t i = 0; i < dim_; ++i) {
        const std::uint32_t c = static_cast<std::uint32_t>(t % base_.q());
        t /= base_.q();
        if (c) x.terms.emplace_back(i, c);
      }
      out.push_back(std::move(x));
    }
    return out;
  }

  /// A (x) A with variables (x_i (x) 1) first, then (1 (x) x_i); basis index of b_i (x) b_j is i + dim * j.
  std::shared_ptr<TestAlgebra> tensor_square() const {
    std::vector<std::string> names;
    std::vector<TruncationRule> rules;
    const std::size_t k = rules_.size();
    for (int side = 0; side < 2; ++side)
      for (std::size_t v = 0; v < k; ++v) {
        names.push_back(names_[v] + (side == 0 ? "(x)1" : "(1)x"));
        TruncationRule r{rules_[v].bound, std::nullopt};
        if (rules_[v].rhs) {
          std::vector<unsigned> ex(2 * k, 0);
          for (std::size_t u = 0; u < k; ++u) ex[side * k + u] = rules_[v].rhs->second[u];
          r.rhs = std::make_pair(rules_[v].rhs->first, ex);
        }
        rules.push_back(r);
      }
    return std::make_shared<TestAlgebra>(base_, names, rules);
  }

  std::string monomial_string(std::uint32_t idx) const {
    auto e = exponents(idx);
    std::ostringstream os;
    bool any = false;
    for (std::size_t v = 0; v < e.size(); ++v) {
      if (e[v] == 0) continue;
      if (any) os << "*";
      any = true;
      os << names_[v];
      if (e[v] > 1) os << "^" << e[v];
    }
    return any ? os.str() : "1";
  }

  std::string to_string(const AlgebraElement& x) const {
    if (x.terms.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [i, c] : x.terms) {
      if (!first) os << " + ";
      first = false;
      const std::string mono = monomial_string(i);
      if (c != 1 || mono == "1") os << base_.to_string(c) << (mono == "1" ? "" : "*");
      if (mono != "1") os << mono;
    }
    return os.str();
  }

 private:
  Field base_;
  std::vector<std::string> names_;
  std::vector<TruncationRule> rules_;
  std::vector<std::uint32_t> radix_;
  std::uint32_t dim_ = 1;
};

namespace detail {
inline void require_same_alg(const AlgebraElement& a, const AlgebraElement& b) {
  if (a.alg != b.alg) throw std::invalid_argument("elements of different test algebras");
}

inline AlgebraElement merge(const AlgebraElement& a, const AlgebraElement& b, bool negate_b) {
  const Field& k = a.alg->base();
  AlgebraElement r{a.alg, {}};
  r.terms.reserve(a.terms.size() + b.terms.size());
  std::size_t i = 0, j = 0;
  while (i < a.terms.size() || j < b.terms.size()) {
    if (j == b.terms.size() || (i < a.terms.size() && a.terms[i].first < b.terms[j].first)) {
      r.terms.push_back(a.terms[i++]);
    } else if (i == a.terms.size() || b.terms[j].first < a.terms[i].first) {
      r.terms.emplace_back(b.terms[j].first, negate_b ? k.neg(b.terms[j].second) : b.terms[j].second);
      ++j;
    } else {
      const std::uint32_t c = negate_b ? k.sub(a.terms[i].second, b.terms[j].second) : k.add(a.terms[i].second, b.terms[j].second);
      if (c) r.terms.emplace_back(a.terms[i].first, c);
      ++i;
      ++j;
    }
  }
  return r;
}
}  // namespace detail

inline AlgebraElement AlgebraElement::operator+(const AlgebraElement& o) const {
  detail::require_same_alg(*this, o);
  return detail::merge(*this, o, false);
}
inline AlgebraElement AlgebraElement::operator-(const AlgebraElement& o) const {
  detail::require_same_alg(*this, o);
  return detail::merge(*this, o, true);
}
inline AlgebraElement AlgebraElement::operator-() const {
  AlgebraElement r = *this;
  for (auto& t : r.terms) t.second = alg->base().neg(t.second);
  return r;
}
inline AlgebraElement AlgebraElement::scale(std::uint32_t c) const {
  if (c == 0) return zero_like();
  AlgebraElement r = *this;
  for (auto& t : r.terms) t.second = alg->base().mul(t.second, c);
  return r;
}
inline AlgebraElement AlgebraElement::operator*(const AlgebraElement& o) const {
  detail::require_same_alg(*this, o);
  if (terms.empty() || o.terms.empty()) return zero_like();
  const Field& k = alg->base();
  std::vector<std::pair<std::uint32_t, std::uint32_t>> acc;
  acc.reserve(terms.size() * o.terms.size());
  for (const auto& [ia, ca] : terms)
    for (const auto& [ib, cb] : o.terms) {
      auto nf = alg->mul_basis(ia, ib);
      if (!nf) continue;
      acc.emplace_back(nf->first, k.mul(nf->second, k.mul(ca, cb)));
    }
  std::sort(acc.begin(), acc.end());
  AlgebraElement r{alg, {}};
  for (const auto& [i, c] : acc) {
    if (!r.terms.empty() && r.terms.back().first == i) {
      r.terms.back().second = k.add(r.terms.back().second, c);
    } else {
      r.terms.emplace_back(i, c);
    }
  }
  std::erase_if(r.terms, [](const auto& t) { return t.second == 0; });
  return r;
}
inline AlgebraElement AlgebraElement::scalar_like(long c) const { return alg->scalar(alg->base().from_int(c)); }
inline std::uint32_t AlgebraElement::characteristic() const { return alg->base().p(); }

inline std::ostream& operator<<(std::ostream& os, const AlgebraElement& x) {
  return os << (x.alg ? x.alg->to_string(x) : std::string("?"));
}

}  // namespace wd
