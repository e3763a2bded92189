#pragma once

#include <cstdint>
#include <memory>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "wd/dieudonne.hpp"
#include "wd/zlinear.hpp"

namespace wd {

/// Left ideal families I with E/I a finite-length module.
struct ModulePresentation {
  enum class Family { ThmOne, KernelFV, FullWitt };

  Family family = Family::FullWitt;
  Field base;
  unsigned n = 0, i = 0;  // ThmOne
  FieldElement a{};       // ThmOne deformation parameter
  unsigned r = 0, s = 0;  // KernelFV
  unsigned nV = 1, nF = 1;
  std::vector<unsigned> extra_F_powers;  // quotients M / M F^j

  /// E(V - F^i - [a]F^{n-1}) + E F^n, inside E/(E V^n + E F^n).
  static ModulePresentation thm_one(const Field& k, unsigned n, unsigned i, const FieldElement& a) {
    if (n < 1 || i < 1 || i > n) throw std::invalid_argument("ThmOne needs 1 <= i <= n");
    if (a.f != k.data()) throw std::invalid_argument("deformation parameter from another field");
    if (n == 1 && !a.is_zero()) throw std::invalid_argument("ThmOne(1, 1, a) needs a = 0");
    ModulePresentation p;
    p.family = Family::ThmOne;
    p.base = k;
    p.n = n;
    p.i = i;
    p.a = a;
    p.nV = p.nF = n;
    return p;
  }
  static ModulePresentation thm_one(const Field& k, unsigned n, unsigned i) { return thm_one(k, n, i, k.zero()); }

  /// E(F^r - V^s) + E F^{n'}, inside E/(E V^n + E F^{n'}).
  static ModulePresentation kernel_fv(const Field& k, unsigned r, unsigned s, unsigned n, unsigned np) {
    if (r < 1 || s < 1) throw std::invalid_argument("KernelFV needs r, s >= 1");
    bool consistent = false;
    for (unsigned m = 2; m <= 64 && !consistent; ++m) {
      const auto [n0, n1] = kernel_lengths(r, s, m);
      consistent = n0 == n && n1 == np;
    }
    if (!consistent) throw std::invalid_argument("KernelFV lengths do not come from any m >= 2");
    ModulePresentation p;
    p.family = Family::KernelFV;
    p.base = k;
    p.r = r;
    p.s = s;
    p.nV = n;
    p.nF = np;
    return p;
  }
  static ModulePresentation kernel_fv_m(const Field& k, unsigned r, unsigned s, unsigned m) {
    const auto [n, np] = kernel_lengths(r, s, m);
    return kernel_fv(k, r, s, n, np);
  }
  /// (n, n') = (min(s m d / r, m d), min(r m d / s, m d)) with d = lcm(r, s).
  static std::pair<unsigned, unsigned> kernel_lengths(unsigned r, unsigned s, unsigned m) {
    const unsigned d = std::lcm(r, s);
    return {std::min(s * m * d / r, m * d), std::min(r * m * d / s, m * d)};
  }

  /// E/(E V^nV + E F^nF).
  static ModulePresentation full_witt(const Field& k, unsigned nV, unsigned nF) {
    if (nV < 1 || nF < 1) throw std::invalid_argument("FullWitt needs positive lengths");
    ModulePresentation p;
    p.family = Family::FullWitt;
    p.base = k;
    p.nV = nV;
    p.nF = nF;
    return p;
  }

  unsigned precision() const { return std::min(nV, nF); }

  std::vector<WittDElem> generators(unsigned N) const {
    WittDBuilder B{base, N};
    std::vector<WittDElem> g;
    switch (family) {
      case Family::ThmOne:
        g.push_back(B.V(1) - B.F(static_cast<int>(i)) - B.teich_term(a, static_cast<int>(n) - 1));
        break;
      case Family::KernelFV:
        g.push_back(B.F(static_cast<int>(r)) - B.V(static_cast<int>(s)));
        break;
      case Family::FullWitt:
        break;
    }
    for (unsigned j : extra_F_powers) g.push_back(B.F(static_cast<int>(j)));
    return g;
  }
  /// Generators together with the ambient F^nF and V^nV.
  std::vector<WittDElem> all_generators(unsigned N) const {
    auto g = generators(N);
    WittDBuilder B{base, N};
    g.push_back(B.F(static_cast<int>(nF)));
    g.push_back(B.V(static_cast<int>(nV)));
    return g;
  }

  ModulePresentation rebase(const FieldEmbedding& e) const {
    if (e.from.data() != base.data()) throw std::invalid_argument("embedding source is not the base field");
    ModulePresentation q = *this;
    q.base = e.to;
    if (family == Family::ThmOne) q.a = e(a);
    return q;
  }

  std::string describe() const {
    std::ostringstream os;
    switch (family) {
      case Family::ThmOne:
        os << "ThmOne(n=" << n << ", i=" << i << ", a=" << a << ")";
        break;
      case Family::KernelFV:
        os << "KernelFV(r=" << r << ", s=" << s << ", n=" << nV << ", n'=" << nF << ")";
        break;
      case Family::FullWitt:
        os << "FullWitt(" << nV << ", " << nF << ")";
        break;
    }
    for (unsigned j : extra_F_powers) os << "/F^" << j;
    return os.str();
  }
};

/// Digit normal form sum_j [c_j] F^j with the certificate x - result = e1 g1 + e2 g2.
struct FastReduction {
  std::vector<FieldElement> digits;
  WittDElem e1, e2;
};

using Digits = std::vector<FieldElement>;

/// E/I for a supported presentation: the Z/p^N-linear oracle, plus the digit fast path for ThmOne.
class CyclicEModule {
 public:
  explicit CyclicEModule(ModulePresentation pres) : pres_(std::move(pres)) {
    k_ = pres_.base;
    N_ = pres_.precision();
    gr_ = GaloisRing::get(k_, N_);
    R_ = ZpN(k_.p(), N_);
    m_ = k_.m();
    lo_ = -static_cast<int>(pres_.nV) + 1;
    hi_ = static_cast<int>(pres_.nF) - 1;
    D_ = static_cast<std::size_t>(hi_ - lo_ + 1) * m_;
    if (D_ > dimension_guard()) throw GuardExceeded("ambient dimension exceeds the guard");
    build_ideal();
    build_maps();
  }

  const ModulePresentation& presentation() const { return pres_; }
  const Field& field() const { return k_; }
  unsigned precision() const { return N_; }
  const GaloisRing& galois_ring() const { return *gr_; }
  const ZpN& ring() const { return R_; }
  std::size_t dim() const { return D_; }
  const ZSpan& ideal() const { return S_; }
  int lowest_index() const { return lo_; }
  int highest_index() const { return hi_; }

  /// Exponent of p of the underlying additive group (ambient length in chain a is min(...)).
  unsigned chain_length(int a) const {
    const unsigned nV = pres_.nV, nF = pres_.nF;
    return a < 0 ? std::min(nV - static_cast<unsigned>(-a), nF) : std::min(nF - static_cast<unsigned>(a), nV);
  }

  std::uint64_t log_order() const { return S_.log_quotient_size(); }
  unsigned length() const {
    if (log_order() % m_ != 0) throw InternalError("module order is not a power of q");
    return static_cast<unsigned>(log_order() / m_);
  }

  // ---- coordinates ----
  ZVec embed(const GRDElem& x) const {
    ZVec v(D_, 0);
    for (const auto& [a, c] : x.terms) {
      if (a < lo_ || a > hi_) continue;
      const std::size_t off = static_cast<std::size_t>(a - lo_) * m_;
      for (unsigned j = 0; j < m_; ++j) v[off + j] = c.v.c[j] % R_.mod;
    }
    return v;
  }
  ZVec reduce(const ZVec& v) const { return S_.reduce(v); }
  ZVec element(const GRDElem& x) const { return reduce(embed(x)); }
  ZVec element(const WittDElem& x) const { return element(to_gr(*gr_, x)); }
  GRDElem lift(const ZVec& v) const {
    GRDElem x;
    for (int a = lo_; a <= hi_; ++a) {
      GRCoef c{gr_.get(), gr_->zero()};
      const std::size_t off = static_cast<std::size_t>(a - lo_) * m_;
      for (unsigned j = 0; j < m_; ++j) c.v.c[j] = v[off + j];
      x.add_term(a, c);
    }
    return x;
  }
  GRCoef coef_basis(unsigned j) const { return {gr_.get(), gr_->basis(j)}; }
  GRCoef teich(const FieldElement& c) const { return {gr_.get(), gr_->teichmuller(c)}; }

  bool is_zero(const ZVec& v) const {
    return std::all_of(v.begin(), v.end(), [](std::uint64_t x) { return x == 0; });
  }
  ZVec zero() const { return ZVec(D_, 0); }
  ZVec unit() const { return element(GRDElem::monomial(coef_basis(0), 0)); }

  /// Every element, as canonical representatives.
  std::vector<ZVec> all_elements(std::uint64_t guard = std::uint64_t(1) << 16) const {
    const auto bounds = S_.representative_bounds();
    long double total = 1;
    for (auto b : bounds) total *= static_cast<long double>(b);
    if (total > static_cast<long double>(guard)) throw GuardExceeded("module too large to enumerate");
    std::vector<ZVec> out;
    ZVec cur(D_, 0);
    while (true) {
      out.push_back(cur);
      std::size_t j = 0;
      while (j < D_ && ++cur[j] == bounds[j]) cur[j++] = 0;
      if (j == D_) break;
    }
    return out;
  }

  // ---- oracle operations ----
  const ZMap& F_map() const { return Fm_; }
  const ZMap& V_map() const { return Vm_; }
  const ZMap& p_map() const { return Pm_; }
  ZMap scalar_map(const FieldElement& c) const { return left_mult_map(GRDElem::monomial(teich(c), 0)); }
  ZMap left_mult_map(const GRDElem& x) const {
    ZMap cols;
    for (int a = lo_; a <= hi_; ++a)
      for (unsigned j = 0; j < m_; ++j) cols.push_back(embed(x * GRDElem::monomial(coef_basis(j), a)));
    return cols;
  }
  ZVec apply(const ZMap& A, const ZVec& x) const { return reduce(apply_map(R_, A, x, D_)); }
  ZVec add(const ZVec& x, const ZVec& y) const {
    ZVec r(D_);
    for (std::size_t j = 0; j < D_; ++j) r[j] = R_.add(x[j], y[j]);
    return reduce(r);
  }
  ZVec sub(const ZVec& x, const ZVec& y) const {
    ZVec r(D_);
    for (std::size_t j = 0; j < D_; ++j) r[j] = R_.sub(x[j], y[j]);
    return reduce(r);
  }
  ZVec act_F(const ZVec& x) const { return apply(Fm_, x); }
  ZVec act_V(const ZVec& x) const { return apply(Vm_, x); }
  ZVec act_p(const ZVec& x) const { return apply(Pm_, x); }
  ZVec act_scalar(const FieldElement& c, const ZVec& x) const { return apply(scalar_map(c), x); }

  /// Submodule of elements annihilated by F^r and V^s, measured in k-length.
  unsigned kernel_length(unsigned r, unsigned s) const {
    ZMap Fr = identity_map(), Vs = identity_map();
    for (unsigned t = 0; t < r; ++t) Fr = compose_maps(R_, Fm_, Fr, D_);
    for (unsigned t = 0; t < s; ++t) Vs = compose_maps(R_, Vm_, Vs, D_);
    ZMap both;
    for (std::size_t c = 0; c < D_; ++c) {
      ZVec col(2 * D_);
      std::copy(Fr[c].begin(), Fr[c].end(), col.begin());
      std::copy(Vs[c].begin(), Vs[c].end(), col.begin() + static_cast<long>(D_));
      both.push_back(std::move(col));
    }
    std::vector<ZVec> srows;
    for (const auto& row : S_.rows()) {
      ZVec a(2 * D_, 0), b(2 * D_, 0);
      std::copy(row.begin(), row.end(), a.begin());
      std::copy(row.begin(), row.end(), b.begin() + static_cast<long>(D_));
      srows.push_back(std::move(a));
      srows.push_back(std::move(b));
    }
    const ZSpan target = ZSpan::from_rows(R_, 2 * D_, std::move(srows));
    const ZSpan K = preimage(both, target, D_);
    const std::uint64_t lg = K.log_size() - S_.log_size();
    if (lg % m_ != 0) throw InternalError("kernel order is not a power of q");
    return static_cast<unsigned>(lg / m_);
  }

  ZMap identity_map() const {
    ZMap I(D_, ZVec(D_, 0));
    for (std::size_t c = 0; c < D_; ++c) I[c][c] = 1;
    return I;
  }

  // ---- digit fast path (ThmOne only) ----
  bool has_fast_path() const { return pres_.family == ModulePresentation::Family::ThmOne && pres_.extra_F_powers.empty(); }

  FastReduction reduce_normal_form(const WittDElem& x) const {
    require_fast();
    const unsigned n = pres_.n;
    const int ni = static_cast<int>(n);
    const WittDBuilder B{k_, N_};
    const auto gens = pres_.generators(N_);
    const WittDElem& g1 = gens[0];
    FastReduction out;
    WittDElem cur = x;
    auto kill_high = [&] {
      std::vector<std::pair<int, FieldWitt>> high;
      for (auto it = cur.terms.lower_bound(ni); it != cur.terms.end(); ++it) high.emplace_back(*it);
      for (const auto& [a, c] : high) {
        out.e2.add_term(a - ni, c);  // (c F^{a-n}) F^n = c F^a
        cur.terms.erase(a);
      }
    };
    while (!cur.is_zero() && cur.min_index() < 0) {
      const auto [a, xi] = *cur.terms.begin();
      const WittDElem mlt = WittDElem::monomial(xi, a + 1);
      cur = cur - mlt * g1;
      out.e1 = out.e1 + mlt;
    }
    kill_high();
    for (int j = 0; j < ni; ++j) {
      auto it = cur.terms.find(j);
      if (it == cur.terms.end()) continue;
      const FieldWitt beta = it->second.p_quotient();
      if (beta.is_zero()) continue;
      const WittDElem mlt = WittDElem::monomial(beta, j + 1);
      cur = cur - mlt * g1;
      out.e1 = out.e1 + mlt;
      kill_high();
    }
    out.digits.assign(n, k_.zero());
    for (const auto& [a, c] : cur.terms) {
      if (a < 0 || a >= ni || !c.is_teichmuller()) throw InternalError("fast path left a non-normal term");
      out.digits[static_cast<std::size_t>(a)] = c[0];
    }
    (void)B;
    return out;
  }

  WittDElem digits_element(const Digits& d) const {
    const WittDBuilder B{k_, N_};
    WittDElem x;
    for (std::size_t j = 0; j < d.size(); ++j) x = x + B.teich_term(d[j], static_cast<int>(j));
    return x;
  }

  /// x - sum [c_j] F^j == e1 g1 + e2 g2 exactly in E / p^N.
  bool verify_certificate(const WittDElem& x, const FastReduction& red) const {
    require_fast();
    const auto gens = pres_.generators(N_);
    const WittDBuilder B{k_, N_};
    const WittDElem lhs = x - digits_element(red.digits);
    const WittDElem rhs = red.e1 * gens[0] + red.e2 * B.F(static_cast<int>(pres_.n));
    return lhs == rhs;
  }

  Digits fast_reduce(const WittDElem& x) const { return reduce_normal_form(x).digits; }
  Digits fast_add(const Digits& x, const Digits& y) const { return fast_reduce(digits_element(x) + digits_element(y)); }
  Digits fast_F(const Digits& x) const { return fast_reduce(WittDBuilder{k_, N_}.F(1) * digits_element(x)); }
  Digits fast_V(const Digits& x) const { return fast_reduce(WittDBuilder{k_, N_}.V(1) * digits_element(x)); }
  Digits fast_p(const Digits& x) const { return fast_reduce(WittDBuilder{k_, N_}.p_times(digits_element(x))); }
  Digits fast_scalar(const FieldElement& c, const Digits& x) const {
    return fast_reduce(WittDBuilder{k_, N_}.teich_term(c, 0) * digits_element(x));
  }

  /// Oracle vector of sum_j [c_j] F^j.
  ZVec from_digits(const Digits& d) const {
    GRDElem x;
    for (std::size_t j = 0; j < d.size(); ++j) x.add_term(static_cast<int>(j), teich(d[j]));
    return element(x);
  }

  /// All q^n digit vectors in lexicographic index order.
  std::vector<Digits> all_digit_vectors() const {
    require_fast();
    std::vector<Digits> out;
    const std::uint64_t total = ipow(k_.q(), pres_.n);
    for (std::uint64_t code = 0; code < total; ++code) {
      Digits d;
      std::uint64_t t = code;
      for (unsigned j = 0; j < pres_.n; ++j) {
        d.push_back(k_.elem(static_cast<std::uint32_t>(t % k_.q())));
        t /= k_.q();
      }
      out.push_back(std::move(d));
    }
    return out;
  }

 private:
  void require_fast() const {
    if (!has_fast_path()) throw std::logic_error("module has no digit fast path");
  }

  void build_ideal() {
    std::vector<ZVec> rows;
    for (int a = lo_; a <= hi_; ++a) {
      const std::uint64_t pl = ipow(k_.p(), chain_length(a));
      if (pl % R_.mod == 0) continue;
      const std::size_t off = static_cast<std::size_t>(a - lo_) * m_;
      for (unsigned j = 0; j < m_; ++j) {
        ZVec r(D_, 0);
        r[off + j] = pl;
        rows.push_back(std::move(r));
      }
    }
    for (const auto& g : pres_.generators(N_)) {
      const GRDElem gg = to_gr(*gr_, g);
      for (int a = lo_; a <= hi_; ++a)
        for (unsigned j = 0; j < m_; ++j) rows.push_back(embed(GRDElem::monomial(coef_basis(j), a) * gg));
    }
    S_ = ZSpan::from_rows(R_, D_, std::move(rows));
  }

  void build_maps() {
    const GRCoef one = coef_basis(0);
    Fm_ = left_mult_map(GRDElem::monomial(one, 1));
    Vm_ = left_mult_map(GRDElem::monomial(one, -1));
    Pm_ = left_mult_map(GRDElem::monomial(one.times_p_power(1), 0));
  }

  ModulePresentation pres_;
  Field k_;
  unsigned N_ = 1;
  std::shared_ptr<const GaloisRing> gr_;
  ZpN R_;
  unsigned m_ = 1;
  int lo_ = 0, hi_ = 0;
  std::size_t D_ = 0;
  ZSpan S_;
  ZMap Fm_, Vm_, Pm_;
};

/// Morphism E/I -> M determined by the image e of the class of 1.
struct ModuleMorphism {
  const CyclicEModule* source = nullptr;
  const CyclicEModule* target = nullptr;
  GRDElem unit_image;
  bool well_defined = false;
  std::string rejection;
  ZMap columns;  // images of the source ambient basis, reduced in the target

  ZVec operator()(const ZVec& x) const {
    const ZpN& R = target->ring();
    ZVec y(target->dim(), 0);
    for (std::size_t c = 0; c < x.size(); ++c) {
      if (x[c] == 0) continue;
      const std::uint64_t xc = x[c] % R.mod;
      for (std::size_t j = 0; j < y.size(); ++j)
        if (columns[c][j]) y[j] = R.add(y[j], R.mul(xc, columns[c][j]));
    }
    return target->reduce(y);
  }
};

inline GRDElem rebase_precision(const GaloisRing& gr, const WittDElem& x) {
  GRDElem r;
  for (const auto& [a, c] : x.terms) {
    std::vector<FieldElement> d = c.digits();
    d.resize(gr.precision(), c[0].zero_like());
    r.add_term(a, GRCoef{&gr, gr.from_digits(d)});
  }
  return r;
}

inline ModuleMorphism hom_from_unit_image(const CyclicEModule& src, const CyclicEModule& tgt, const GRDElem& e,
                                          bool build_matrix = true) {
  if (src.field().data() != tgt.field().data()) throw std::invalid_argument("modules over different fields");
  ModuleMorphism phi;
  phi.source = &src;
  phi.target = &tgt;
  phi.unit_image = e;
  const GaloisRing& gr = tgt.galois_ring();
  for (const auto& g : src.presentation().all_generators(src.precision())) {
    const ZVec res = tgt.element(rebase_precision(gr, g) * e);
    if (!tgt.is_zero(res)) {
      std::ostringstream os;
      os << "generator " << to_string(g) << " maps to a nonzero class";
      phi.rejection = os.str();
      return phi;
    }
  }
  phi.well_defined = true;
  if (!build_matrix) return phi;
  for (int a = src.lowest_index(); a <= src.highest_index(); ++a)
    for (unsigned j = 0; j < src.field().m(); ++j)
      phi.columns.push_back(tgt.element(GRDElem::monomial(GRCoef{&gr, gr.basis(j)}, a) * e));
  return phi;
}

inline ModuleMorphism hom_from_unit_image(const CyclicEModule& src, const CyclicEModule& tgt, const WittDElem& e) {
  return hom_from_unit_image(src, tgt, rebase_precision(tgt.galois_ring(), e));
}

/// log_p of the image of a well-defined morphism.
inline std::uint64_t image_log_size(const ModuleMorphism& phi) {
  std::vector<ZVec> rows = phi.columns;
  for (const auto& s : phi.target->ideal().rows()) rows.push_back(s);
  const ZSpan span = ZSpan::from_rows(phi.target->ring(), phi.target->dim(), std::move(rows));
  return span.log_size() - phi.target->ideal().log_size();
}

inline bool is_isomorphism(const ModuleMorphism& phi) {
  if (!phi.well_defined) return false;
  if (phi.source->log_order() != phi.target->log_order()) return false;
  return image_log_size(phi) == phi.target->log_order();
}

/// Exhaustive search over unit images; nullopt when no isomorphism exists over the current field.
inline std::optional<ModuleMorphism> find_isomorphism(const CyclicEModule& src, const CyclicEModule& tgt,
                                                      std::uint64_t guard = std::uint64_t(1) << 16) {
  if (src.log_order() != tgt.log_order()) return std::nullopt;
  for (const auto& v : tgt.all_elements(guard)) {
    const GRDElem e = tgt.lift(v);
    ModuleMorphism phi = hom_from_unit_image(src, tgt, e, false);
    if (!phi.well_defined) continue;
    phi = hom_from_unit_image(src, tgt, e, true);
    if (is_isomorphism(phi)) return phi;
  }
  return std::nullopt;
}

using KernelProfile = std::vector<std::vector<unsigned>>;

inline KernelProfile kernel_profile(const CyclicEModule& M, unsigned bound) {
  KernelProfile t(bound + 1, std::vector<unsigned>(bound + 1, 0));
  for (unsigned r = 0; r <= bound; ++r)
    for (unsigned s = 0; s <= bound; ++s) t[r][s] = M.kernel_length(r, s);
  return t;
}
inline KernelProfile kernel_profile(const CyclicEModule& M) {
  return kernel_profile(M, std::max(M.presentation().nV, M.presentation().nF));
}

inline ModulePresentation quotient_by_F_power(const ModulePresentation& pres, unsigned j) {
  if (j > pres.nF) throw std::invalid_argument("F power out of range");
  ModulePresentation q = pres;
  q.extra_F_powers.push_back(j);
  return q;
}

/// KernelFV(r, s, n, n') -> KernelFV(s, r, n', n), checking that both have length s n' = r n.
inline ModulePresentation dual_presentation(const ModulePresentation& pres) {
  if (pres.family != ModulePresentation::Family::KernelFV) throw std::invalid_argument("dual only for KernelFV");
  ModulePresentation d = ModulePresentation::kernel_fv(pres.base, pres.s, pres.r, pres.nF, pres.nV);
  if (pres.s * pres.nF != pres.r * pres.nV) throw InternalError("order identity s n' = r n fails");
  return d;
}

}  // namespace wd
