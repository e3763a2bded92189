#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "wd/errors.hpp"
#include "wd/linalg.hpp"
#include "wd/test_algebra.hpp"
#include "wd/witt.hpp"

namespace wd {

/// Sparse vector: (index, coefficient) pairs sorted by index, no zero coefficients.
using SparseVec = std::vector<std::pair<std::uint32_t, std::uint32_t>>;

/// Generators and relations of a commutative Hopf algebra, with Delta, S, epsilon on generators.
struct HopfPresentation {
  std::shared_ptr<TestAlgebra> algebra;
  std::shared_ptr<TestAlgebra> square;   // algebra (x) algebra
  std::vector<AlgebraElement> delta;     // per generator, in square
  std::vector<AlgebraElement> antipode;  // per generator, in algebra
  std::vector<std::uint32_t> counit;     // per generator
};

/// Finite-dimensional Hopf algebra over F_q given by structure constants in a fixed basis.
struct HopfAlgebra {
  std::string name;
  Field k;
  std::uint32_t dim = 0;
  std::vector<std::string> labels;
  std::vector<SparseVec> mul;       // e_a e_b stored at a + dim * b
  FqVec unit;
  std::vector<SparseVec> comul;     // Delta(e_c); key a + dim * b stands for e_a (x) e_b
  FqVec counit;
  std::vector<SparseVec> antipode;  // S(e_c)
  std::optional<HopfPresentation> presentation;

  FqVec zero() const { return FqVec(dim, 0); }
  FqVec basis(std::uint32_t c) const {
    FqVec v(dim, 0);
    v[c] = 1;
    return v;
  }

  FqVec multiply(const FqVec& x, const FqVec& y) const {
    FqVec r(dim, 0);
    for (std::uint32_t a = 0; a < dim; ++a) {
      if (!x[a]) continue;
      for (std::uint32_t b = 0; b < dim; ++b) {
        if (!y[b]) continue;
        const std::uint32_t c = k.mul(x[a], y[b]);
        for (const auto& [t, v] : mul[a + dim * b]) r[t] = k.add(r[t], k.mul(c, v));
      }
    }
    return r;
  }
  FqVec power(const FqVec& x, std::uint64_t e) const {
    FqVec r = unit, b = x;
    while (e) {
      if (e & 1) r = multiply(r, b);
      e >>= 1;
      if (e) b = multiply(b, b);
    }
    return r;
  }
  std::uint32_t apply_counit(const FqVec& x) const {
    std::uint32_t s = 0;
    for (std::uint32_t c = 0; c < dim; ++c)
      if (x[c]) s = k.add(s, k.mul(x[c], counit[c]));
    return s;
  }
  FqVec apply_antipode(const FqVec& x) const {
    FqVec r(dim, 0);
    for (std::uint32_t c = 0; c < dim; ++c) {
      if (!x[c]) continue;
      for (const auto& [t, v] : antipode[c]) r[t] = k.add(r[t], k.mul(x[c], v));
    }
    return r;
  }
  /// Delta(x) as a dense vector on the dim^2 tensor basis.
  FqVec comultiply(const FqVec& x) const {
    FqVec r(static_cast<std::size_t>(dim) * dim, 0);
    for (std::uint32_t c = 0; c < dim; ++c) {
      if (!x[c]) continue;
      for (const auto& [t, v] : comul[c]) r[t] = k.add(r[t], k.mul(x[c], v));
    }
    return r;
  }

  bool is_commutative() const {
    for (std::uint32_t a = 0; a < dim; ++a)
      for (std::uint32_t b = a + 1; b < dim; ++b)
        if (mul[a + dim * b] != mul[b + dim * a]) return false;
    return true;
  }
  bool is_cocommutative() const {
    for (std::uint32_t c = 0; c < dim; ++c) {
      SparseVec swapped;
      for (const auto& [t, v] : comul[c]) swapped.emplace_back((t / dim) + dim * (t % dim), v);
      std::sort(swapped.begin(), swapped.end());
      if (swapped != comul[c]) return false;
    }
    return true;
  }
  std::optional<std::uint32_t> label_index(const std::string& s) const {
    for (std::uint32_t c = 0; c < dim; ++c)
      if (labels[c] == s) return c;
    return std::nullopt;
  }
};

namespace detail {

inline SparseVec to_sparse(const FqVec& v) {
  SparseVec s;
  for (std::uint32_t i = 0; i < v.size(); ++i)
    if (v[i]) s.emplace_back(i, v[i]);
  return s;
}

inline SparseVec to_sparse(const AlgebraElement& x) { return x.terms; }

inline FqVec to_dense(const SparseVec& s, std::size_t n) {
  FqVec v(n, 0);
  for (const auto& [i, c] : s) v[i] = c;
  return v;
}

/// Accumulates (key, coeff) pairs into a canonical sparse vector.
inline SparseVec combine(const Field& k, std::vector<std::pair<std::uint64_t, std::uint32_t>> acc) {
  std::sort(acc.begin(), acc.end());
  SparseVec out;
  for (std::size_t i = 0; i < acc.size();) {
    std::uint32_t s = 0;
    std::size_t j = i;
    for (; j < acc.size() && acc[j].first == acc[i].first; ++j) s = k.add(s, acc[j].second);
    if (s) out.emplace_back(static_cast<std::uint32_t>(acc[i].first), s);
    i = j;
  }
  return out;
}

}  // namespace detail

/// Evaluates a monomial (exponent vector) in the generators' images, with memoization by basis index.
class MonomialEvaluator {
 public:
  template <class Mul>
  static std::vector<FqVec> all(const TestAlgebra& alg, const std::vector<FqVec>& gens, const FqVec& one, Mul mul) {
    std::vector<FqVec> out(alg.dim());
    out[0] = one;
    for (std::uint32_t idx = 1; idx < alg.dim(); ++idx) {
      auto e = alg.exponents(idx);
      std::size_t v = e.size();
      while (e[--v] == 0) {
      }
      e[v] -= 1;
      out[idx] = mul(out[alg.index(e)], gens[v]);
    }
    return out;
  }
};

/// Checks that Delta, S and epsilon respect every defining relation of the presentation.
inline std::vector<std::string> presentation_defects(const HopfPresentation& P) {
  const TestAlgebra& A = *P.algebra;
  const TestAlgebra& A2 = *P.square;
  const Field& k = A.base();
  std::vector<std::string> bad;
  auto delta_of = [&](const std::vector<unsigned>& e, std::uint32_t coeff) {
    AlgebraElement r = A2.scalar(coeff);
    for (std::size_t v = 0; v < e.size(); ++v)
      for (unsigned t = 0; t < e[v]; ++t) r = r * P.delta[v];
    return r;
  };
  auto antipode_of = [&](const std::vector<unsigned>& e, std::uint32_t coeff) {
    AlgebraElement r = A.scalar(coeff);
    for (std::size_t v = 0; v < e.size(); ++v)
      for (unsigned t = 0; t < e[v]; ++t) r = r * P.antipode[v];
    return r;
  };
  auto counit_of = [&](const std::vector<unsigned>& e, std::uint32_t coeff) {
    std::uint32_t r = coeff;
    for (std::size_t v = 0; v < e.size(); ++v)
      for (unsigned t = 0; t < e[v]; ++t) r = k.mul(r, P.counit[v]);
    return r;
  };
  for (std::size_t v = 0; v < A.num_vars(); ++v) {
    const auto& rule = A.rules()[v];
    std::vector<unsigned> lhs(A.num_vars(), 0);
    lhs[v] = rule.bound;
    std::vector<unsigned> rhs(A.num_vars(), 0);
    std::uint32_t rc = 0;
    if (rule.rhs) {
      rhs = rule.rhs->second;
      rc = rule.rhs->first;
    }
    if (!(delta_of(lhs, 1) == delta_of(rhs, rc))) bad.push_back("Delta violates the relation on " + A.names()[v]);
    if (!(antipode_of(lhs, 1) == antipode_of(rhs, rc))) bad.push_back("S violates the relation on " + A.names()[v]);
    if (counit_of(lhs, 1) != counit_of(rhs, rc)) bad.push_back("counit violates the relation on " + A.names()[v]);
  }
  return bad;
}

/// Structure constants on the reduced-monomial basis of a presented commutative Hopf algebra.
inline HopfAlgebra hopf_from_presentation(std::string name, HopfPresentation P) {
  const auto defects = presentation_defects(P);
  if (!defects.empty()) throw InternalError(name + ": " + defects.front());
  const TestAlgebra& A = *P.algebra;
  const TestAlgebra& A2 = *P.square;
  if (A.dim() > dimension_guard()) throw GuardExceeded(name + ": Hopf algebra dimension exceeds the guard");
  HopfAlgebra H;
  H.name = std::move(name);
  H.k = A.base();
  H.dim = A.dim();
  const std::uint32_t d = H.dim;
  for (std::uint32_t i = 0; i < d; ++i) H.labels.push_back(A.monomial_string(i));
  H.mul.resize(static_cast<std::size_t>(d) * d);
  for (std::uint32_t a = 0; a < d; ++a)
    for (std::uint32_t b = 0; b < d; ++b) {
      const auto nf = A.mul_basis(a, b);
      if (nf) H.mul[a + d * b] = {{nf->first, nf->second}};
    }
  H.unit = H.basis(0);

  std::vector<AlgebraElement> delta(d, A2.zero()), anti(d, A.zero());
  delta[0] = A2.one();
  anti[0] = A.one();
  H.counit.assign(d, 0);
  H.counit[0] = 1;
  for (std::uint32_t idx = 1; idx < d; ++idx) {
    auto e = A.exponents(idx);
    std::size_t v = e.size();
    while (e[--v] == 0) {
    }
    e[v] -= 1;
    const std::uint32_t prev = A.index(e);
    delta[idx] = delta[prev] * P.delta[v];
    anti[idx] = anti[prev] * P.antipode[v];
    H.counit[idx] = H.k.mul(H.counit[prev], P.counit[v]);
  }
  for (std::uint32_t c = 0; c < d; ++c) {
    H.comul.push_back(delta[c].terms);
    H.antipode.push_back(anti[c].terms);
  }
  H.presentation = std::move(P);
  return H;
}

/// Witt coordinates x_{b,0}, ..., x_{b,n-1}: Delta and S from the Witt addition and negation polynomials.
struct WittBlock {
  std::vector<std::size_t> vars;
};

inline HopfPresentation witt_presentation(const Field& k, std::vector<std::string> names,
                                          std::vector<TruncationRule> rules, const std::vector<WittBlock>& blocks) {
  HopfPresentation P;
  P.algebra = std::make_shared<TestAlgebra>(k, std::move(names), std::move(rules));
  P.square = P.algebra->tensor_square();
  const std::size_t nv = P.algebra->num_vars();
  P.delta.assign(nv, P.square->zero());
  P.antipode.assign(nv, P.algebra->zero());
  P.counit.assign(nv, 0);
  std::vector<bool> covered(nv, false);
  for (const auto& b : blocks) {
    std::vector<AlgebraElement> left, right, x;
    for (std::size_t v : b.vars) {
      left.push_back(P.square->var(v));
      right.push_back(P.square->var(nv + v));
      x.push_back(P.algebra->var(v));
      if (covered[v]) throw std::invalid_argument("generator used in two Witt blocks");
      covered[v] = true;
    }
    const auto sum = WittVector<AlgebraElement>(left) + WittVector<AlgebraElement>(right);
    const auto neg = -WittVector<AlgebraElement>(x);
    for (std::size_t j = 0; j < b.vars.size(); ++j) {
      P.delta[b.vars[j]] = sum[j];
      P.antipode[b.vars[j]] = neg[j];
    }
  }
  if (std::find(covered.begin(), covered.end(), false) != covered.end())
    throw std::invalid_argument("every generator must lie in a Witt block");
  return P;
}

inline std::vector<std::string> indexed_names(const std::string& stem, unsigned n) {
  std::vector<std::string> out;
  for (unsigned j = 0; j < n; ++j) out.push_back(stem + std::to_string(j));
  return out;
}

/// k[W_n^{n'}] = k[T_0..T_{n-1}]/(T_j^{p^{n'}}).
inline HopfAlgebra build_witt_hopf(const Field& k, unsigned n, unsigned np) {
  if (n < 1 || np < 1) throw std::invalid_argument("Witt Hopf algebra needs n, n' >= 1");
  std::vector<TruncationRule> rules(n, TruncationRule{static_cast<unsigned>(ipow(k.p(), np)), std::nullopt});
  WittBlock b;
  for (unsigned j = 0; j < n; ++j) b.vars.push_back(j);
  return hopf_from_presentation("W_" + std::to_string(n) + "^" + std::to_string(np),
                                witt_presentation(k, indexed_names("T", n), rules, {b}));
}

/// k[alpha_{p^e}] = k[T]/(T^{p^e}) with T primitive.
inline HopfAlgebra build_alpha(const Field& k, unsigned e) {
  auto H = build_witt_hopf(k, 1, e);
  H.name = "alpha_p^" + std::to_string(e);
  return H;
}

/// k[T_0..T_{n-1}]/(T_j^{p^r} for j < s, T_j^{p^r} - T_{j-s} for j >= s) with Witt comultiplication.
inline HopfAlgebra build_kernel_hopf_presentation(const Field& k, unsigned r, unsigned s, unsigned m) {
  if (r < 1 || s < 1 || m < 2) throw std::invalid_argument("kernel presentation needs r, s >= 1 and m >= 2");
  const unsigned d = std::lcm(r, s);
  const unsigned n = std::min(s * m * d / r, m * d);
  const unsigned np = std::min(r * m * d / s, m * d);
  const unsigned bound = static_cast<unsigned>(ipow(k.p(), r));
  std::vector<TruncationRule> rules;
  for (unsigned j = 0; j < n; ++j) {
    TruncationRule t{bound, std::nullopt};
    if (j >= s) {
      std::vector<unsigned> ex(n, 0);
      ex[j - s] = 1;
      t.rhs = std::make_pair(1u, ex);
    }
    rules.push_back(t);
  }
  WittBlock b;
  for (unsigned j = 0; j < n; ++j) b.vars.push_back(j);
  return hopf_from_presentation("W_" + std::to_string(n) + "^" + std::to_string(np) + "[F^" + std::to_string(r) +
                                    "-V^" + std::to_string(s) + "]",
                                witt_presentation(k, indexed_names("T", n), rules, {b}));
}

/// Result of dividing a commutative Hopf algebra by a Hopf ideal.
struct HopfQuotient {
  HopfAlgebra algebra;
  std::vector<std::uint32_t> kept;  // original basis indices forming the quotient basis
  std::vector<SparseVec> projection;  // image of each original basis vector
  std::vector<std::string> defects;   // nonempty when the ideal is not a Hopf ideal
};

/// A / (ideal generated by gens). Requires A commutative; the quotient basis is the set of non-pivot basis vectors.
inline HopfQuotient quotient_hopf(const HopfAlgebra& A, const std::vector<FqVec>& gens, std::string name) {
  if (!A.is_commutative()) throw std::invalid_argument("quotient_hopf needs a commutative algebra");
  const std::uint32_t d = A.dim;
  const Field& k = A.k;
  FqEchelon I(k, d);
  for (const auto& g : gens)
    for (std::uint32_t b = 0; b < d; ++b) I.insert(A.multiply(A.basis(b), g));
  HopfQuotient Q;
  std::vector<std::int64_t> pos(d, -1);
  for (std::uint32_t c = 0; c < d; ++c)
    if (!I.is_pivot(c)) {
      pos[c] = static_cast<std::int64_t>(Q.kept.size());
      Q.kept.push_back(c);
    }
  const std::uint32_t dq = static_cast<std::uint32_t>(Q.kept.size());
  for (std::uint32_t c = 0; c < d; ++c) {
    const FqVec r = I.reduce(A.basis(c));
    SparseVec s;
    for (std::uint32_t j = 0; j < d; ++j)
      if (r[j]) s.emplace_back(static_cast<std::uint32_t>(pos[j]), r[j]);
    Q.projection.push_back(std::move(s));
  }
  auto project = [&](const SparseVec& x) {
    std::vector<std::pair<std::uint64_t, std::uint32_t>> acc;
    for (const auto& [c, v] : x)
      for (const auto& [t, w] : Q.projection[c]) acc.emplace_back(t, k.mul(v, w));
    return detail::combine(k, std::move(acc));
  };
  auto project2 = [&](const SparseVec& x) {
    std::vector<std::pair<std::uint64_t, std::uint32_t>> acc;
    for (const auto& [key, v] : x) {
      const std::uint32_t a = key % d, b = key / d;
      for (const auto& [ta, wa] : Q.projection[a])
        for (const auto& [tb, wb] : Q.projection[b])
          acc.emplace_back(ta + static_cast<std::uint64_t>(dq) * tb, k.mul(v, k.mul(wa, wb)));
    }
    return detail::combine(k, std::move(acc));
  };
  for (const auto& row : I.rows()) {
    const SparseVec sr = detail::to_sparse(row);
    if (A.apply_counit(row) != 0) Q.defects.push_back("counit does not vanish on the ideal");
    if (!project(detail::to_sparse(A.apply_antipode(row))).empty()) Q.defects.push_back("ideal is not stable under S");
    if (!project2(detail::to_sparse(A.comultiply(row))).empty())
      Q.defects.push_back("Delta(ideal) is not inside I (x) A + A (x) I");
    if (!Q.defects.empty()) break;
  }
  HopfAlgebra& H = Q.algebra;
  H.name = std::move(name);
  H.k = k;
  H.dim = dq;
  for (auto c : Q.kept) H.labels.push_back(A.labels[c]);
  H.mul.resize(static_cast<std::size_t>(dq) * dq);
  for (std::uint32_t i = 0; i < dq; ++i)
    for (std::uint32_t j = 0; j < dq; ++j) H.mul[i + dq * j] = project(A.mul[Q.kept[i] + d * Q.kept[j]]);
  H.unit = detail::to_dense(project(detail::to_sparse(A.unit)), dq);
  for (std::uint32_t i = 0; i < dq; ++i) {
    H.comul.push_back(project2(A.comul[Q.kept[i]]));
    H.counit.push_back(A.counit[Q.kept[i]]);
    H.antipode.push_back(project(A.antipode[Q.kept[i]]));
  }
  return Q;
}

/// Basis of the augmentation ideal: e_c - epsilon(e_c) 1, skipping one vector so the result is independent.
inline std::vector<FqVec> augmentation_basis(const HopfAlgebra& A) {
  FqEchelon e(A.k, A.dim);
  std::vector<FqVec> out;
  for (std::uint32_t c = 0; c < A.dim; ++c) {
    FqVec v = A.basis(c);
    const std::uint32_t eps = A.counit[c];
    for (std::uint32_t j = 0; j < A.dim; ++j)
      if (A.unit[j]) v[j] = A.k.sub(v[j], A.k.mul(eps, A.unit[j]));
    if (e.insert(v)) out.push_back(std::move(v));
  }
  return out;
}

/// Quotient by (a^{p^j} : a in the augmentation ideal): the Hopf algebra of ker F^j.
inline HopfAlgebra kernel_frobenius_power(const HopfAlgebra& A, unsigned j) {
  if (j < 1) throw std::invalid_argument("kernel_frobenius_power needs j >= 1");
  if (!A.is_commutative()) throw std::invalid_argument("Frobenius kernels need a commutative algebra");
  std::vector<FqVec> gens;
  for (const auto& x : augmentation_basis(A)) gens.push_back(A.power(x, ipow(A.k.p(), j)));
  auto Q = quotient_hopf(A, gens, "ker F^" + std::to_string(j) + " of " + A.name);
  if (!Q.defects.empty()) throw InternalError("Frobenius kernel ideal is not a Hopf ideal: " + Q.defects.front());
  return std::move(Q.algebra);
}

/// Linear dual: multiplication is the transpose of Delta and vice versa.
inline HopfAlgebra dual_hopf(const HopfAlgebra& A) {
  const std::uint32_t d = A.dim;
  if (d > dimension_guard()) throw GuardExceeded("dual of a Hopf algebra above the dimension guard");
  HopfAlgebra D;
  D.name = "dual(" + A.name + ")";
  D.k = A.k;
  D.dim = d;
  for (const auto& l : A.labels) D.labels.push_back("(" + l + ")*");
  std::vector<std::vector<std::pair<std::uint64_t, std::uint32_t>>> mul(static_cast<std::size_t>(d) * d);
  for (std::uint32_t c = 0; c < d; ++c)
    for (const auto& [key, v] : A.comul[c]) mul[key].emplace_back(c, v);
  for (auto& m : mul) D.mul.push_back(detail::combine(A.k, std::move(m)));
  std::vector<std::vector<std::pair<std::uint64_t, std::uint32_t>>> comul(d);
  for (std::uint32_t a = 0; a < d; ++a)
    for (std::uint32_t b = 0; b < d; ++b)
      for (const auto& [c, v] : A.mul[a + d * b]) comul[c].emplace_back(a + static_cast<std::uint64_t>(d) * b, v);
  for (auto& c : comul) D.comul.push_back(detail::combine(A.k, std::move(c)));
  D.unit = A.counit;
  D.counit = A.unit;
  std::vector<std::vector<std::pair<std::uint64_t, std::uint32_t>>> anti(d);
  for (std::uint32_t a = 0; a < d; ++a)
    for (const auto& [c, v] : A.antipode[a]) anti[c].emplace_back(a, v);
  for (auto& s : anti) D.antipode.push_back(detail::combine(A.k, std::move(s)));
  return D;
}

struct HopfAxiomReport {
  bool associative = true, unital = true, coassociative = true, counital = true, bialgebra = true,
       counit_multiplicative = true, antipode = true;
  bool commutative = false, cocommutative = false;
  std::vector<std::string> failures;
  bool all_pass() const { return failures.empty(); }
};

/// Algebra generators of a local algebra: lifts of a basis of m/m^2 (all of m when m is not nilpotent).
inline std::vector<FqVec> algebra_generators(const HopfAlgebra& A);

/// Full structure-constant contraction of every Hopf algebra axiom. Compatibility of Delta with products is
/// checked against a generating set, which implies it on all products.
inline HopfAxiomReport verify_hopf_axioms(const HopfAlgebra& A) {
  HopfAxiomReport R;
  const std::uint32_t d = A.dim;
  const Field& k = A.k;
  const std::uint64_t d2 = static_cast<std::uint64_t>(d) * d;
  auto fail = [&](bool& flag, const std::string& what) {
    if (flag) R.failures.push_back(what);
    flag = false;
  };
  // unit and associativity
  for (std::uint32_t a = 0; a < d && R.unital; ++a) {
    const FqVec x = A.basis(a);
    if (A.multiply(A.unit, x) != x || A.multiply(x, A.unit) != x) fail(R.unital, "unit law fails");
  }
  {
    FqVec acc(d, 0);
    std::vector<std::uint32_t> touched;
    for (std::uint32_t a = 0; a < d && R.associative; ++a)
      for (std::uint32_t b = 0; b < d && R.associative; ++b) {
        const SparseVec& ab = A.mul[a + d * b];
        for (std::uint32_t c = 0; c < d && R.associative; ++c) {
          touched.clear();
          for (const auto& [t, v] : ab)
            for (const auto& [u, w] : A.mul[t + d * c]) {
              acc[u] = k.add(acc[u], k.mul(v, w));
              touched.push_back(u);
            }
          for (const auto& [t, v] : A.mul[b + d * c])
            for (const auto& [u, w] : A.mul[a + d * t]) {
              acc[u] = k.sub(acc[u], k.mul(v, w));
              touched.push_back(u);
            }
          for (auto u : touched) {
            if (acc[u]) fail(R.associative, "associativity fails");
            acc[u] = 0;
          }
        }
      }
  }
  // coassociativity and counit
  for (std::uint32_t c = 0; c < d && (R.coassociative || R.counital); ++c) {
    std::vector<std::pair<std::uint64_t, std::uint32_t>> lhs, rhs, left_eps, right_eps;
    for (const auto& [key, v] : A.comul[c]) {
      const std::uint32_t a = key % d, b = key / d;
      for (const auto& [k2, w] : A.comul[a]) lhs.emplace_back(k2 + d2 * b, k.mul(v, w));
      for (const auto& [k2, w] : A.comul[b]) rhs.emplace_back(a + d * static_cast<std::uint64_t>(k2), k.mul(v, w));
      if (A.counit[a]) left_eps.emplace_back(b, k.mul(v, A.counit[a]));
      if (A.counit[b]) right_eps.emplace_back(a, k.mul(v, A.counit[b]));
    }
    if (detail::combine(k, std::move(lhs)) != detail::combine(k, std::move(rhs))) fail(R.coassociative, "coassociativity fails");
    const SparseVec ec{{c, 1}};
    if (detail::combine(k, std::move(left_eps)) != ec || detail::combine(k, std::move(right_eps)) != ec)
      fail(R.counital, "counit law fails");
  }
  // epsilon and Delta are algebra maps
  if (A.apply_counit(A.unit) != 1) fail(R.counit_multiplicative, "counit(1) != 1");
  for (std::uint32_t a = 0; a < d && R.counit_multiplicative; ++a)
    for (std::uint32_t b = 0; b < d && R.counit_multiplicative; ++b)
      if (A.apply_counit(detail::to_dense(A.mul[a + d * b], d)) != k.mul(A.counit[a], A.counit[b]))
        fail(R.counit_multiplicative, "counit is not multiplicative");
  {
    FqVec one2(d2, 0);
    for (std::uint32_t a = 0; a < d; ++a)
      for (std::uint32_t b = 0; b < d; ++b)
        if (A.unit[a] && A.unit[b]) one2[a + d * b] = k.mul(A.unit[a], A.unit[b]);
    if (A.comultiply(A.unit) != one2) fail(R.bialgebra, "Delta(1) != 1 (x) 1");
    auto tensor_mul = [&](const FqVec& xd, const FqVec& yd) {
      const SparseVec x = detail::to_sparse(xd), y = detail::to_sparse(yd);
      FqVec r(d2, 0);
      for (const auto& [s, xs] : x) {
        const std::uint32_t a1 = s % d, b1 = s / d;
        for (const auto& [t, yt] : y) {
          const std::uint32_t a2 = t % d, b2 = t / d;
          const std::uint32_t c = k.mul(xs, yt);
          for (const auto& [u, w] : A.mul[a1 + d * a2])
            for (const auto& [u2, w2] : A.mul[b1 + d * b2]) {
              const std::uint64_t key = u + static_cast<std::uint64_t>(d) * u2;
              r[key] = k.add(r[key], k.mul(c, k.mul(w, w2)));
            }
        }
      }
      return r;
    };
    const auto gens = algebra_generators(A);
    std::vector<FqVec> dgens;
    for (const auto& g : gens) dgens.push_back(A.comultiply(g));
    for (std::uint32_t a = 0; a < d && R.bialgebra; ++a) {
      const FqVec da = A.comultiply(A.basis(a));
      for (std::size_t gi = 0; gi < gens.size(); ++gi) {
        const FqVec& g = gens[gi];
        const FqVec& dg = dgens[gi];
        if (A.comultiply(A.multiply(A.basis(a), g)) != tensor_mul(da, dg) ||
            A.comultiply(A.multiply(g, A.basis(a))) != tensor_mul(dg, da)) {
          fail(R.bialgebra, "Delta is not multiplicative");
          break;
        }
      }
    }
  }
  // antipode
  for (std::uint32_t c = 0; c < d && R.antipode; ++c) {
    FqVec left(d, 0), right(d, 0);
    for (const auto& [key, v] : A.comul[c]) {
      const std::uint32_t a = key % d, b = key / d;
      for (const auto& [s, w] : A.antipode[a])
        for (const auto& [u, x] : A.mul[s + d * b]) left[u] = k.add(left[u], k.mul(v, k.mul(w, x)));
      for (const auto& [s, w] : A.antipode[b])
        for (const auto& [u, x] : A.mul[a + d * s]) right[u] = k.add(right[u], k.mul(v, k.mul(w, x)));
    }
    FqVec expect(d, 0);
    for (std::uint32_t j = 0; j < d; ++j) expect[j] = k.mul(A.counit[c], A.unit[j]);
    if (left != expect || right != expect) fail(R.antipode, "antipode law fails");
  }
  R.commutative = A.is_commutative();
  R.cocommutative = A.is_cocommutative();
  return R;
}

inline std::vector<FqVec> algebra_generators(const HopfAlgebra& A) {
  const auto m = augmentation_basis(A);
  FqEchelon sq(A.k, A.dim);
  for (const auto& x : m)
    for (const auto& y : m) sq.insert(A.multiply(x, y));
  std::vector<FqVec> gens;
  FqEchelon seen = sq;
  for (const auto& x : m)
    if (seen.insert(x)) gens.push_back(x);
  if (sq.rank() + gens.size() != m.size()) return m;
  // the lifts generate only when the algebra is local; fall back to m otherwise
  FqEchelon sub(A.k, A.dim);
  std::vector<FqVec> frontier{A.unit};
  sub.insert(A.unit);
  while (!frontier.empty()) {
    std::vector<FqVec> next;
    for (const auto& x : frontier)
      for (const auto& g : gens) {
        FqVec y = A.multiply(x, g);
        if (sub.insert(y)) next.push_back(std::move(y));
      }
    frontier = std::move(next);
  }
  if (sub.rank() != A.dim) return m;
  return gens;
}

/// Images of the source basis in target coordinates.
using LinearMap = std::vector<FqVec>;

struct HopfMapReport {
  bool bijective = true, unital = true, multiplicative = true, comultiplicative = true, counital = true,
       antipode = true;
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};

/// Checks every Hopf-morphism identity of L: A -> B by structure-constant transport.
inline HopfMapReport check_hopf_map(const HopfAlgebra& A, const HopfAlgebra& B, const LinearMap& L, bool require_bijective = true) {
  HopfMapReport R;
  const Field& k = B.k;
  const std::uint32_t d = A.dim, e = B.dim;
  auto fail = [&](bool& flag, const std::string& what) {
    if (flag) R.failures.push_back(what);
    flag = false;
  };
  auto apply = [&](const FqVec& x) {
    FqVec y(e, 0);
    for (std::uint32_t c = 0; c < d; ++c) {
      if (!x[c]) continue;
      for (std::uint32_t j = 0; j < e; ++j)
        if (L[c][j]) y[j] = k.add(y[j], k.mul(x[c], L[c][j]));
    }
    return y;
  };
  if (require_bijective && (d != e || rank_of(k, L, e) != e)) fail(R.bijective, "map is not bijective");
  if (apply(A.unit) != B.unit) fail(R.unital, "map does not preserve 1");
  for (std::uint32_t a = 0; a < d && R.multiplicative; ++a)
    for (std::uint32_t b = 0; b < d && R.multiplicative; ++b)
      if (apply(detail::to_dense(A.mul[a + d * b], d)) != B.multiply(L[a], L[b])) fail(R.multiplicative, "map is not multiplicative");
  for (std::uint32_t c = 0; c < d; ++c) {
    if (R.comultiplicative) {
      FqVec lhs(static_cast<std::size_t>(e) * e, 0);
      for (const auto& [key, v] : A.comul[c]) {
        const auto& x = L[key % d];
        const auto& y = L[key / d];
        for (std::uint32_t i = 0; i < e; ++i) {
          if (!x[i]) continue;
          for (std::uint32_t j = 0; j < e; ++j)
            if (y[j]) lhs[i + e * j] = k.add(lhs[i + e * j], k.mul(v, k.mul(x[i], y[j])));
        }
      }
      if (lhs != B.comultiply(L[c])) fail(R.comultiplicative, "map does not commute with Delta");
    }
    if (R.counital && B.apply_counit(L[c]) != A.counit[c]) fail(R.counital, "map does not preserve the counit");
    if (R.antipode && apply(detail::to_dense(A.antipode[c], d)) != B.apply_antipode(L[c]))
      fail(R.antipode, "map does not commute with S");
  }
  return R;
}

/// Extends generator images multiplicatively over the monomial basis of a presented algebra.
/// Returns nullopt (with a reason) when a defining relation is not respected.
inline std::optional<LinearMap> algebra_map_from_generators(const HopfAlgebra& A, const HopfAlgebra& B,
                                                            const std::vector<FqVec>& images, std::string* why = nullptr) {
  if (!A.presentation) throw std::invalid_argument("source has no presentation");
  const TestAlgebra& alg = *A.presentation->algebra;
  if (images.size() != alg.num_vars()) throw std::invalid_argument("one image per generator required");
  auto mono = [&](const std::vector<unsigned>& e) {
    FqVec r = B.unit;
    for (std::size_t v = 0; v < e.size(); ++v)
      for (unsigned t = 0; t < e[v]; ++t) r = B.multiply(r, images[v]);
    return r;
  };
  for (std::size_t v = 0; v < alg.num_vars(); ++v) {
    const auto& rule = alg.rules()[v];
    std::vector<unsigned> lhs(alg.num_vars(), 0);
    lhs[v] = rule.bound;
    FqVec rhs = B.zero();
    if (rule.rhs) {
      rhs = mono(rule.rhs->second);
      for (auto& x : rhs) x = B.k.mul(x, rule.rhs->first);
    }
    if (mono(lhs) != rhs) {
      if (why) *why = "relation on " + alg.names()[v] + " is not respected";
      return std::nullopt;
    }
  }
  return MonomialEvaluator::all(alg, images, B.unit, [&](const FqVec& x, const FqVec& y) { return B.multiply(x, y); });
}

/// Basis matching by identical labels; nullopt when some label of A is missing in B.
inline std::optional<LinearMap> match_by_labels(const HopfAlgebra& A, const HopfAlgebra& B) {
  LinearMap L;
  for (const auto& l : A.labels) {
    const auto j = B.label_index(l);
    if (!j) return std::nullopt;
    L.push_back(B.basis(*j));
  }
  return L;
}

/// Double-dual identification check: structure constants of dual(dual(A)) equal those of A.
inline bool same_structure_constants(const HopfAlgebra& A, const HopfAlgebra& B) {
  return A.dim == B.dim && A.mul == B.mul && A.unit == B.unit && A.comul == B.comul && A.counit == B.counit &&
         A.antipode == B.antipode;
}

}  // namespace wd
