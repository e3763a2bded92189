#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

#include "wd/field.hpp"

namespace wd {

/// Dense vector over F_q, entries are field element indices.
using FqVec = std::vector<std::uint32_t>;

/// Incrementally built echelon basis of a subspace of F_q^n. Each row is normalized at its
/// highest nonzero coordinate; reduce() clears every pivot coordinate and is therefore canonical.
class FqEchelon {
 public:
  FqEchelon() = default;
  FqEchelon(Field k, std::size_t n) : k_(k), n_(n), where_(n, kNone) {}

  std::size_t ambient() const { return n_; }
  std::size_t rank() const { return rows_.size(); }
  bool is_pivot(std::size_t c) const { return where_[c] != kNone; }
  const std::vector<FqVec>& rows() const { return rows_; }

  FqVec reduce(FqVec v) const {
    for (std::size_t c = n_; c-- > 0;) {
      if (v[c] == 0 || where_[c] == kNone) continue;
      axpy(v, k_.neg(v[c]), rows_[where_[c]], c);
    }
    return v;
  }

  bool contains(const FqVec& v) const {
    const FqVec r = reduce(v);
    return std::all_of(r.begin(), r.end(), [](std::uint32_t x) { return x == 0; });
  }

  /// Adds v to the span; false when v was already in it.
  bool insert(FqVec v) {
    v = reduce(std::move(v));
    std::size_t c = n_;
    while (c > 0 && v[c - 1] == 0) --c;
    if (c == 0) return false;
    const std::size_t piv = c - 1;
    const std::uint32_t inv = k_.inv(v[piv]);
    for (std::size_t j = 0; j <= piv; ++j)
      if (v[j]) v[j] = k_.mul(v[j], inv);
    where_[piv] = rows_.size();
    rows_.push_back(std::move(v));
    return true;
  }

 private:
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

  void axpy(FqVec& v, std::uint32_t a, const FqVec& row, std::size_t top) const {
    for (std::size_t j = 0; j <= top; ++j)
      if (row[j]) v[j] = k_.add(v[j], k_.mul(a, row[j]));
  }

  Field k_;
  std::size_t n_ = 0;
  std::vector<FqVec> rows_;
  std::vector<std::size_t> where_;
};

/// Basis of {c : sum_i c_i cols[i] = 0} for vectors cols[i] in F_q^n.
inline std::vector<FqVec> linear_relations(const Field& k, const std::vector<FqVec>& cols, std::size_t n) {
  const std::size_t m = cols.size();
  FqEchelon e(k, m + n);
  for (std::size_t i = 0; i < m; ++i) {
    FqVec v(m + n, 0);
    v[i] = 1;
    std::copy(cols[i].begin(), cols[i].end(), v.begin() + static_cast<long>(m));
    e.insert(std::move(v));
  }
  std::vector<FqVec> out;
  for (const auto& row : e.rows()) {
    const bool tail_zero = std::all_of(row.begin() + static_cast<long>(m), row.end(), [](auto x) { return x == 0; });
    if (tail_zero) out.emplace_back(row.begin(), row.begin() + static_cast<long>(m));
  }
  return out;
}

/// Some x with sum_i x_i cols[i] = target, or nullopt when target is outside the span.
inline std::optional<FqVec> solve_linear(const Field& k, const std::vector<FqVec>& cols, const FqVec& target) {
  const std::size_t m = cols.size(), n = target.size();
  FqEchelon e(k, m + n);
  for (std::size_t i = 0; i < m; ++i) {
    FqVec v(m + n, 0);
    v[i] = 1;
    std::copy(cols[i].begin(), cols[i].end(), v.begin() + static_cast<long>(m));
    e.insert(std::move(v));
  }
  FqVec t(m + n, 0);
  std::copy(target.begin(), target.end(), t.begin() + static_cast<long>(m));
  const FqVec r = e.reduce(std::move(t));
  if (std::any_of(r.begin() + static_cast<long>(m), r.end(), [](auto x) { return x != 0; })) return std::nullopt;
  FqVec x(m);
  for (std::size_t i = 0; i < m; ++i) x[i] = k.neg(r[i]);
  return x;
}

inline std::size_t rank_of(const Field& k, const std::vector<FqVec>& vecs, std::size_t n) {
  FqEchelon e(k, n);
  for (const auto& v : vecs) e.insert(v);
  return e.rank();
}

}  // namespace wd
