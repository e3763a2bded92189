#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "wd/errors.hpp"
#include "wd/field.hpp"

namespace wd {

using ZVec = std::vector<std::uint64_t>;

/// Arithmetic in Z/p^N.
struct ZpN {
  std::uint32_t p = 2;
  unsigned N = 1;
  std::uint64_t mod = 2;

  ZpN() = default;
  ZpN(std::uint32_t p_, unsigned N_) : p(p_), N(N_), mod(ipow(p_, N_)) {}

  std::uint64_t add(std::uint64_t a, std::uint64_t b) const {
    const std::uint64_t s = a + b;
    return s >= mod ? s - mod : s;
  }
  std::uint64_t sub(std::uint64_t a, std::uint64_t b) const { return a >= b ? a - b : a + mod - b; }
  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % mod);
  }
  unsigned valuation(std::uint64_t a) const {
    if (a == 0) return N;
    unsigned v = 0;
    while (a % p == 0) {
      a /= p;
      ++v;
    }
    return v;
  }
  std::uint64_t unit_inverse(std::uint64_t a) const {
    // Newton iteration x <- x(2 - a x), starting from the inverse mod p
    std::uint64_t x = 1;
    for (std::uint64_t t = 1; t < p; ++t)
      if ((a % p) * t % p == 1) x = t;
    for (unsigned k = 1; k < N; k *= 2) x = mul(x, sub(2 % mod, mul(a, x)));
    return x;
  }
};

/// Submodule of (Z/p^N)^cols kept in Howell form, giving canonical coset representatives.
class ZSpan {
 public:
  ZSpan() = default;
  ZSpan(ZpN ring, std::size_t cols) : R_(ring), cols_(cols) {}

  static ZSpan from_rows(ZpN ring, std::size_t cols, std::vector<ZVec> rows) {
    ZSpan s(ring, cols);
    s.build(std::move(rows));
    return s;
  }

  const ZpN& ring() const { return R_; }
  std::size_t cols() const { return cols_; }
  const std::vector<ZVec>& rows() const { return rows_; }
  const std::vector<std::size_t>& pivot_cols() const { return piv_col_; }
  const std::vector<unsigned>& pivot_vals() const { return piv_val_; }

  /// log_p of the number of elements.
  std::uint64_t log_size() const {
    std::uint64_t s = 0;
    for (unsigned v : piv_val_) s += R_.N - v;
    return s;
  }
  /// log_p of |(Z/p^N)^cols / span|.
  std::uint64_t log_quotient_size() const { return R_.N * cols_ - log_size(); }

  ZVec reduce(ZVec x) const {
    for (std::size_t k = 0; k < rows_.size(); ++k) {
      const std::size_t c = piv_col_[k];
      const std::uint64_t pv = ipow(R_.p, piv_val_[k]);
      const std::uint64_t q = x[c] / pv;
      if (q == 0) continue;
      const ZVec& r = rows_[k];
      for (std::size_t j = c; j < cols_; ++j)
        if (r[j]) x[j] = R_.sub(x[j], R_.mul(q, r[j]));
    }
    return x;
  }
  bool contains(const ZVec& x) const {
    const ZVec r = reduce(x);
    return std::all_of(r.begin(), r.end(), [](std::uint64_t v) { return v == 0; });
  }

  /// Largest exclusive bound of each coordinate among canonical representatives.
  std::vector<std::uint64_t> representative_bounds() const {
    std::vector<std::uint64_t> b(cols_, R_.mod);
    for (std::size_t k = 0; k < rows_.size(); ++k) b[piv_col_[k]] = ipow(R_.p, piv_val_[k]);
    return b;
  }

 private:
  void build(std::vector<ZVec> pool) {
    rows_.clear();
    piv_col_.clear();
    piv_val_.clear();
    for (auto& r : pool) {
      if (r.size() != cols_) throw std::invalid_argument("row length mismatch");
      for (auto& v : r) v %= R_.mod;
    }
    for (std::size_t c = 0; c < cols_; ++c) {
      std::size_t best = pool.size();
      unsigned bv = R_.N;
      for (std::size_t i = 0; i < pool.size(); ++i) {
        const unsigned v = R_.valuation(pool[i][c]);
        if (v < bv) {
          bv = v;
          best = i;
        }
      }
      if (best == pool.size()) continue;
      ZVec piv = std::move(pool[best]);
      pool.erase(pool.begin() + static_cast<long>(best));
      const std::uint64_t pv = ipow(R_.p, bv);
      const std::uint64_t u = R_.unit_inverse(piv[c] / pv);
      for (std::size_t j = c; j < cols_; ++j) piv[j] = R_.mul(piv[j], u);
      for (auto& r : pool) {
        if (r[c] == 0) continue;
        const std::uint64_t q = r[c] / pv;
        for (std::size_t j = c; j < cols_; ++j)
          if (piv[j]) r[j] = R_.sub(r[j], R_.mul(q, piv[j]));
      }
      if (bv > 0) {
        ZVec extra(cols_, 0);
        const std::uint64_t s = ipow(R_.p, R_.N - bv);
        bool nz = false;
        for (std::size_t j = c + 1; j < cols_; ++j) {
          extra[j] = R_.mul(piv[j], s);
          nz = nz || extra[j] != 0;
        }
        if (nz) pool.push_back(std::move(extra));
      }
      std::erase_if(pool, [](const ZVec& r) { return std::all_of(r.begin(), r.end(), [](auto v) { return v == 0; }); });
      rows_.push_back(std::move(piv));
      piv_col_.push_back(c);
      piv_val_.push_back(bv);
    }
    for (std::size_t k = 0; k < rows_.size(); ++k) {
      const std::size_t c = piv_col_[k];
      const std::uint64_t pv = ipow(R_.p, piv_val_[k]);
      for (std::size_t i = 0; i < k; ++i) {
        const std::uint64_t q = rows_[i][c] / pv;
        if (q == 0) continue;
        for (std::size_t j = c; j < cols_; ++j)
          if (rows_[k][j]) rows_[i][j] = R_.sub(rows_[i][j], R_.mul(q, rows_[k][j]));
      }
    }
  }

  ZpN R_;
  std::size_t cols_ = 0;
  std::vector<ZVec> rows_;
  std::vector<std::size_t> piv_col_;
  std::vector<unsigned> piv_val_;
};

/// Linear map given by the images of the standard basis vectors.
using ZMap = std::vector<ZVec>;

inline ZVec apply_map(const ZpN& R, const ZMap& A, const ZVec& x, std::size_t out_dim) {
  ZVec y(out_dim, 0);
  for (std::size_t c = 0; c < x.size(); ++c) {
    if (x[c] == 0) continue;
    for (std::size_t j = 0; j < out_dim; ++j)
      if (A[c][j]) y[j] = R.add(y[j], R.mul(x[c], A[c][j]));
  }
  return y;
}

inline ZMap compose_maps(const ZpN& R, const ZMap& second, const ZMap& first, std::size_t out_dim) {
  ZMap out;
  out.reserve(first.size());
  for (const auto& col : first) out.push_back(apply_map(R, second, col, out_dim));
  return out;
}

/// {x : A x in target} for A given by basis images into a space of dimension target.cols().
inline ZSpan preimage(const ZMap& A, const ZSpan& target, std::size_t dom_dim) {
  const ZpN R = target.ring();
  const std::size_t cod = target.cols();
  std::vector<ZVec> rows;
  for (std::size_t i = 0; i < dom_dim; ++i) {
    ZVec r(cod + dom_dim, 0);
    std::copy(A[i].begin(), A[i].end(), r.begin());
    r[cod + i] = 1;
    rows.push_back(std::move(r));
  }
  for (const auto& s : target.rows()) {
    ZVec r(cod + dom_dim, 0);
    std::copy(s.begin(), s.end(), r.begin());
    rows.push_back(std::move(r));
  }
  const ZSpan h = ZSpan::from_rows(R, cod + dom_dim, std::move(rows));
  std::vector<ZVec> ker;
  for (std::size_t k = 0; k < h.rows().size(); ++k)
    if (h.pivot_cols()[k] >= cod) ker.emplace_back(h.rows()[k].begin() + static_cast<long>(cod), h.rows()[k].end());
  return ZSpan::from_rows(R, dom_dim, std::move(ker));
}

}  // namespace wd
