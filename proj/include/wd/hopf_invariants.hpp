#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "wd/hopf.hpp"

namespace wd {

namespace detail {

inline SparseVec sparse_mul(const HopfAlgebra& A, const SparseVec& x, const SparseVec& y) {
  std::vector<std::pair<std::uint64_t, std::uint32_t>> acc;
  for (const auto& [a, u] : x)
    for (const auto& [b, v] : y)
      for (const auto& [c, w] : A.mul[a + A.dim * b]) acc.emplace_back(c, A.k.mul(u, A.k.mul(v, w)));
  return combine(A.k, std::move(acc));
}

/// Scales so that the lowest-index coefficient is 1; a canonical representative of the line.
inline SparseVec projective_normal(const Field& k, SparseVec v) {
  if (v.empty()) return v;
  const std::uint32_t inv = k.inv(v.front().second);
  for (auto& t : v) t.second = k.mul(t.second, inv);
  return v;
}

inline bool is_zero(const FqVec& v) {
  return std::all_of(v.begin(), v.end(), [](std::uint32_t x) { return x == 0; });
}

}  // namespace detail

inline unsigned order_exponent(const HopfAlgebra& A) {
  unsigned e = 0;
  std::uint64_t d = 1;
  while (d < A.dim) {
    d *= A.k.p();
    ++e;
  }
  if (d != A.dim) throw std::invalid_argument("dimension is not a power of p");
  return e;
}

/// Least e with a^{p^e} = 0 on the augmentation ideal of a commutative algebra; p-th powers are additive there,
/// so a basis suffices.
inline unsigned frobenius_height(const HopfAlgebra& A) {
  if (!A.is_commutative()) throw std::invalid_argument(A.name + ": Frobenius height needs a commutative algebra");
  const unsigned cap = order_exponent(A) + 1;
  auto cur = augmentation_basis(A);
  for (unsigned e = 0; e <= cap; ++e) {
    if (std::all_of(cur.begin(), cur.end(), detail::is_zero)) return e;
    for (auto& x : cur) x = A.power(x, A.k.p());
  }
  throw std::invalid_argument(A.name + ": augmentation ideal is not nilpotent (non-local algebra)");
}

/// Frobenius height of the dual; defined when the group law is commutative.
inline unsigned verschiebung_order(const HopfAlgebra& A) { return frobenius_height(dual_hopf(A)); }

/// Echelon basis of m^2.
inline FqEchelon augmentation_square(const HopfAlgebra& A) {
  const auto m = augmentation_basis(A);
  FqEchelon sq(A.k, A.dim);
  std::vector<SparseVec> ms;
  for (const auto& x : m) ms.push_back(detail::to_sparse(x));
  std::set<SparseVec> seen;
  if (A.presentation) {
    // m is generated by the presentation's generators, so m^2 = m * (generators)
    const TestAlgebra& alg = *A.presentation->algebra;
    for (std::size_t v = 0; v < alg.num_vars(); ++v) {
      const SparseVec g = alg.var(v).terms;
      for (const auto& x : ms) {
        auto y = detail::projective_normal(A.k, detail::sparse_mul(A, x, g));
        if (!y.empty() && seen.insert(y).second) sq.insert(detail::to_dense(y, A.dim));
        y = detail::projective_normal(A.k, detail::sparse_mul(A, g, x));
        if (!y.empty() && seen.insert(y).second) sq.insert(detail::to_dense(y, A.dim));
      }
    }
    return sq;
  }
  for (const auto& x : ms)
    for (const auto& y : ms) {
      auto z = detail::projective_normal(A.k, detail::sparse_mul(A, x, y));
      if (!z.empty() && seen.insert(z).second) sq.insert(detail::to_dense(z, A.dim));
    }
  return sq;
}

/// dim m / m^2.
inline unsigned lie_dim(const HopfAlgebra& A) {
  return static_cast<unsigned>(A.dim - 1 - augmentation_square(A).rank());
}

/// Basis of {x in m : Delta(x) = x (x) 1 + 1 (x) x}.
inline std::vector<FqVec> primitive_space(const HopfAlgebra& A) {
  const auto m = augmentation_basis(A);
  const std::uint32_t d = A.dim;
  std::vector<SparseVec> defect;
  std::map<std::uint32_t, std::uint32_t> keys;
  for (const auto& x : m) {
    FqVec t = A.comultiply(x);
    for (std::uint32_t j = 0; j < d; ++j) {
      if (!x[j]) continue;
      for (std::uint32_t u = 0; u < d; ++u) {
        if (!A.unit[u]) continue;
        const std::uint32_t c = A.k.mul(x[j], A.unit[u]);
        t[j + d * u] = A.k.sub(t[j + d * u], c);
        t[u + d * j] = A.k.sub(t[u + d * j], c);
      }
    }
    defect.push_back(detail::to_sparse(t));
    for (const auto& [key, v] : defect.back()) keys.emplace(key, 0);
  }
  std::uint32_t next = 0;
  for (auto& [key, slot] : keys) slot = next++;
  std::vector<FqVec> cols;
  for (const auto& s : defect) {
    FqVec c(keys.size(), 0);
    for (const auto& [key, v] : s) c[keys[key]] = v;
    cols.push_back(std::move(c));
  }
  std::vector<FqVec> out;
  for (const auto& rel : linear_relations(A.k, cols, keys.size())) {
    FqVec x = A.zero();
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (!rel[i]) continue;
      for (std::uint32_t j = 0; j < d; ++j)
        if (m[i][j]) x[j] = A.k.add(x[j], A.k.mul(rel[i], m[i][j]));
    }
    out.push_back(std::move(x));
  }
  return out;
}

/// dim of {x primitive : x^p = 0}; on a commutative algebra the p-th power is semilinear on primitives.
inline std::optional<unsigned> primitive_p_nil_dim(const HopfAlgebra& A) {
  if (!A.is_commutative()) return std::nullopt;
  const auto P = primitive_space(A);
  std::vector<FqVec> powers;
  for (const auto& x : P) powers.push_back(A.power(x, A.k.p()));
  return static_cast<unsigned>(P.size() - rank_of(A.k, powers, A.dim));
}

/// Whether the algebra is generated by one element.
inline bool is_monogenic(const HopfAlgebra& A) {
  if (A.dim == 1) return true;
  const FqEchelon sq = augmentation_square(A);
  if (A.dim - 1 - sq.rank() != 1) return false;
  for (const auto& x : augmentation_basis(A)) {
    if (sq.contains(x)) continue;
    FqEchelon span(A.k, A.dim);
    FqVec y = A.unit;
    for (std::uint32_t e = 0; e < A.dim; ++e) {
      span.insert(y);
      y = A.multiply(y, x);
    }
    return span.rank() == A.dim;
  }
  return false;
}

struct GroupSchemeInvariants {
  unsigned order_exponent = 0;
  unsigned height = 0;
  std::optional<unsigned> v_order;
  unsigned lie_dim = 0;
  unsigned primitive_dim = 0;
  std::optional<unsigned> primitive_p_nil_dim;
  bool monogenic = false;
  bool commutative = false;
  bool cocommutative = false;
  std::vector<std::string> violations;

  /// Fields compared when two reports are said to match.
  auto key() const {
    return std::make_tuple(order_exponent, height, v_order, lie_dim, primitive_dim, primitive_p_nil_dim, monogenic,
                           commutative, cocommutative);
  }
};

/// Inequalities that must hold for a commutative-algebra (infinitesimal) Hopf algebra.
inline std::vector<std::string> infinitesimal_inequality_violations(const GroupSchemeInvariants& g) {
  std::vector<std::string> bad;
  if (!g.commutative) return bad;
  if (std::max(g.lie_dim, g.height) > g.order_exponent) bad.push_back("max(lie_dim, height) > order_exponent");
  if (g.order_exponent > g.lie_dim * g.height) bad.push_back("order_exponent > lie_dim * height");
  if ((g.lie_dim == 1) != (g.height == g.order_exponent) && g.order_exponent > 0)
    bad.push_back("lie_dim = 1 and height = order_exponent disagree");
  if (g.cocommutative && g.v_order && *g.v_order > g.order_exponent) bad.push_back("v_order > order_exponent");
  return bad;
}

inline GroupSchemeInvariants invariant_report(const HopfAlgebra& A, bool with_v_order = true) {
  GroupSchemeInvariants g;
  g.order_exponent = order_exponent(A);
  g.height = frobenius_height(A);
  if (with_v_order && A.is_cocommutative()) g.v_order = verschiebung_order(A);
  g.lie_dim = lie_dim(A);
  g.primitive_dim = static_cast<unsigned>(primitive_space(A).size());
  g.primitive_p_nil_dim = primitive_p_nil_dim(A);
  g.monogenic = is_monogenic(A);
  g.commutative = A.is_commutative();
  g.cocommutative = A.is_cocommutative();
  g.violations = infinitesimal_inequality_violations(g);
  return g;
}

/// Group of R-points of a presented Hopf algebra, with its multiplication table.
struct PointGroup {
  std::vector<std::vector<AlgebraElement>> points;  // generator images
  std::vector<std::vector<std::uint32_t>> table;
  std::uint32_t identity = 0;
  std::vector<std::uint32_t> inverse;
  bool closed = true, associative = true, identity_ok = true, inverses_ok = true;
  bool ok() const { return closed && associative && identity_ok && inverses_ok; }
};

namespace detail {

/// Values in R of every basis monomial of A under the given generator images.
inline std::vector<AlgebraElement> evaluate_basis(const TestAlgebra& alg, const std::vector<AlgebraElement>& img,
                                                  const TestAlgebra& R) {
  std::vector<AlgebraElement> out(alg.dim(), R.zero());
  out[0] = R.one();
  for (std::uint32_t idx = 1; idx < alg.dim(); ++idx) {
    auto e = alg.exponents(idx);
    std::size_t v = e.size();
    while (e[--v] == 0) {
    }
    e[v] -= 1;
    out[idx] = out[alg.index(e)] * img[v];
  }
  return out;
}

inline AlgebraElement evaluate_sparse(const SparseVec& x, const std::vector<AlgebraElement>& basis_values,
                                      const TestAlgebra& R) {
  AlgebraElement r = R.zero();
  for (const auto& [c, v] : x) r = r + basis_values[c].scale(v);
  return r;
}

}  // namespace detail

/// Algebra homomorphisms A -> R, found by assigning generator images and checking the relations.
inline std::vector<std::vector<AlgebraElement>> algebra_points(const HopfAlgebra& A, const TestAlgebra& R,
                                                               std::size_t guard = std::size_t(1) << 16) {
  if (!A.presentation) throw std::invalid_argument("points need a presented Hopf algebra");
  const TestAlgebra& alg = *A.presentation->algebra;
  const auto elems = R.all_elements(guard);
  std::uint64_t total = 1;
  for (std::size_t v = 0; v < alg.num_vars(); ++v) {
    total *= elems.size();
    if (total > guard) throw GuardExceeded("too many candidate points");
  }
  std::vector<std::vector<AlgebraElement>> out;
  for (std::uint64_t code = 0; code < total; ++code) {
    std::vector<AlgebraElement> img;
    std::uint64_t t = code;
    for (std::size_t v = 0; v < alg.num_vars(); ++v) {
      img.push_back(elems[t % elems.size()]);
      t /= elems.size();
    }
    bool good = true;
    for (std::size_t v = 0; v < alg.num_vars() && good; ++v) {
      const auto& rule = alg.rules()[v];
      const AlgebraElement lhs = ring_pow(img[v], rule.bound);
      AlgebraElement rhs = R.zero();
      if (rule.rhs) {
        rhs = R.scalar(rule.rhs->first);
        for (std::size_t u = 0; u < v; ++u) rhs = rhs * ring_pow(img[u], rule.rhs->second[u]);
      }
      good = lhs == rhs;
    }
    if (good) out.push_back(std::move(img));
  }
  return out;
}

/// G(R) with the group law induced by Delta, identity from epsilon and inverses from S.
inline PointGroup points(const HopfAlgebra& A, const TestAlgebra& R, std::size_t guard = std::size_t(1) << 16) {
  PointGroup G;
  G.points = algebra_points(A, R, guard);
  const std::size_t N = G.points.size();
  if (N > 256) throw GuardExceeded("point group too large for a full table");
  const HopfPresentation& P = *A.presentation;
  const TestAlgebra& alg = *P.algebra;
  const std::size_t nv = alg.num_vars();
  std::map<std::vector<SparseVec>, std::uint32_t> where;
  auto key_of = [](const std::vector<AlgebraElement>& img) {
    std::vector<SparseVec> k;
    for (const auto& x : img) k.push_back(x.terms);
    return k;
  };
  std::vector<std::vector<AlgebraElement>> values;
  for (std::uint32_t i = 0; i < N; ++i) {
    where[key_of(G.points[i])] = i;
    values.push_back(detail::evaluate_basis(alg, G.points[i], R));
  }
  auto find = [&](const std::vector<AlgebraElement>& img) -> std::optional<std::uint32_t> {
    auto it = where.find(key_of(img));
    if (it == where.end()) return std::nullopt;
    return it->second;
  };
  const std::uint32_t d = A.dim;
  G.table.assign(N, std::vector<std::uint32_t>(N, 0));
  for (std::uint32_t i = 0; i < N && G.closed; ++i)
    for (std::uint32_t j = 0; j < N && G.closed; ++j) {
      std::vector<AlgebraElement> img;
      for (std::size_t v = 0; v < nv; ++v) {
        AlgebraElement r = R.zero();
        for (const auto& [key, c] : P.delta[v].terms) r = r + (values[i][key % d] * values[j][key / d]).scale(c);
        img.push_back(std::move(r));
      }
      const auto k = find(img);
      if (!k) G.closed = false;
      else G.table[i][j] = *k;
    }
  if (!G.closed) {
    G.associative = G.identity_ok = G.inverses_ok = false;
    return G;
  }
  std::vector<AlgebraElement> e;
  for (std::size_t v = 0; v < nv; ++v) e.push_back(R.scalar(P.counit[v]));
  const auto id = find(e);
  if (!id) {
    G.identity_ok = false;
  } else {
    G.identity = *id;
    for (std::uint32_t i = 0; i < N; ++i)
      if (G.table[i][*id] != i || G.table[*id][i] != i) G.identity_ok = false;
  }
  if (N <= 64) {
    for (std::uint32_t a = 0; a < N && G.associative; ++a)
      for (std::uint32_t b = 0; b < N && G.associative; ++b)
        for (std::uint32_t c = 0; c < N; ++c)
          if (G.table[G.table[a][b]][c] != G.table[a][G.table[b][c]]) {
            G.associative = false;
            break;
          }
  }
  for (std::uint32_t i = 0; i < N; ++i) {
    std::vector<AlgebraElement> img;
    for (std::size_t v = 0; v < nv; ++v) img.push_back(detail::evaluate_sparse(P.antipode[v].terms, values[i], R));
    const auto inv = find(img);
    if (!inv || !G.identity_ok || G.table[i][*inv] != G.identity || G.table[*inv][i] != G.identity) {
      G.inverses_ok = false;
      G.inverse.push_back(0);
    } else {
      G.inverse.push_back(*inv);
    }
  }
  return G;
}

}  // namespace wd
