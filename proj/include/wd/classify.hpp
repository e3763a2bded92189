#pragma once

#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "wd/emodule.hpp"

namespace wd {

/// A morphism between two rebased modules, owning both modules.
struct IsoConstruction {
  std::shared_ptr<CyclicEModule> source, target;
  ModuleMorphism morphism;
  Field field;                 // field the morphism lives over
  FieldElement witness{};      // c_0 for phi, b for psi
  unsigned extension_factor = 1;
  bool root_check = false;     // gamma_0 = 0 for phi, delta_0 = 0 for psi
  bool surjectivity_witness = true;
  bool bijective = false;

  bool ok() const { return morphism.well_defined && bijective && root_check && surjectivity_witness; }
};

namespace detail {

inline IsoConstruction make_construction(const ModulePresentation& src, const ModulePresentation& tgt,
                                         const RootSearch& rs, const FieldElement& root, int shift) {
  IsoConstruction out;
  out.field = rs.field;
  out.witness = root;
  out.extension_factor = rs.extension_factor;
  out.source = std::make_shared<CyclicEModule>(src.rebase(rs.embedding));
  out.target = std::make_shared<CyclicEModule>(tgt.rebase(rs.embedding));
  const WittDBuilder B{rs.field, out.target->precision()};
  const WittDElem e = shift < 0 ? B.teich_term(root, 0) : B.one() + B.teich_term(root, shift);
  out.morphism = hom_from_unit_image(*out.source, *out.target, e);
  out.bijective = is_isomorphism(out.morphism);
  return out;
}

inline FieldElement pick_root(const RootSearch& rs) {
  for (const auto& r : rs.roots)
    if (!r.is_zero()) return r;
  return rs.roots.front();
}

}  // namespace detail

/// phi: ThmOne(n, i, a) -> ThmOne(n, i, 0), 1 -> 1 + [c]F^{n-1-i}, c a root of X - X^{p^{i+1}} - a^p.
inline IsoConstruction build_phi_iso(const Field& k, unsigned n, unsigned i, const FieldElement& a,
                                     unsigned field_budget = kMaxFieldDegree) {
  if (i < 1 || i + 2 > n) throw std::invalid_argument("phi needs 1 <= i <= n - 2");
  const std::uint64_t e = ipow(k.p(), i + 1);
  UniPoly f;
  if (a.is_zero()) {
    // nonzero roots of X - X^{p^{i+1}}
    f.terms = {{e - 1, k.one()}, {0, -k.one()}};
  } else {
    f.terms = {{e, k.one()}, {1, -k.one()}, {0, a.pow(k.p())}};
  }
  const RootSearch rs = find_roots(f, field_budget);
  const FieldElement c = detail::pick_root(rs);
  IsoConstruction out = detail::make_construction(ModulePresentation::thm_one(k, n, i, a),
                                                  ModulePresentation::thm_one(k, n, i), rs, c,
                                                  static_cast<int>(n - 1 - i));
  const FieldElement aa = rs.embedding(a);
  out.root_check = (-aa + c.frobenius(-1) - c.frobenius(static_cast<std::int64_t>(i))).is_zero();
  return out;
}

/// psi: E/(E(V - [A]F^{n-1}) + E F^n) -> ThmOne(n, n-1, 0), 1 -> [b], b a nonzero root of A^p X^{p^n} - X.
/// The source is given by any presentation whose ideal equals E(V - [A]F^{n-1}) + E F^n.
inline IsoConstruction build_psi_iso(const ModulePresentation& source, const FieldElement& A,
                                     unsigned field_budget = kMaxFieldDegree) {
  const Field k = source.base;
  const unsigned n = source.n;
  if (n < 2) throw std::invalid_argument("psi needs n >= 2");
  if (A.is_zero()) throw std::invalid_argument("psi needs an invertible coefficient");
  const std::uint64_t e = ipow(k.p(), n);
  UniPoly f;
  f.terms = {{e - 1, A.pow(k.p())}, {0, -k.one()}};
  const RootSearch rs = find_roots(f, field_budget);
  const FieldElement b = rs.roots.front();
  IsoConstruction out =
      detail::make_construction(source, ModulePresentation::thm_one(k, n, n - 1), rs, b, -1);
  const FieldElement AA = rs.embedding(A);
  out.root_check = (b - AA.pow(k.p()) * b.pow(static_cast<std::int64_t>(e))).is_zero();
  if (out.morphism.well_defined) {
    const ZVec pre = out.source->element(GRDElem::monomial(out.source->teich(b.inv()), 0));
    out.surjectivity_witness = out.morphism(pre) == out.target->unit();
  } else {
    out.surjectivity_witness = false;
  }
  return out;
}

/// psi on the module V = [a]F^{n-1}, presented as ThmOne(n, n, a).
inline IsoConstruction build_psi_iso(const Field& k, unsigned n, const FieldElement& a,
                                     unsigned field_budget = kMaxFieldDegree) {
  return build_psi_iso(ModulePresentation::thm_one(k, n, n, a), a, field_budget);
}

/// True when V acts as zero on the module.
inline bool verschiebung_vanishes(const CyclicEModule& M) {
  for (const auto& col : M.V_map())
    if (!M.is_zero(M.reduce(col))) return false;
  return true;
}

enum class ReportStatus { Ok, Failed, BudgetExceeded };

inline std::string status_name(ReportStatus s) {
  switch (s) {
    case ReportStatus::Ok:
      return "ok";
    case ReportStatus::Failed:
      return "failed";
    case ReportStatus::BudgetExceeded:
      return "budget-exceeded";
  }
  return "failed";
}

inline int exit_code(ReportStatus s) {
  switch (s) {
    case ReportStatus::Ok:
      return 0;
    case ReportStatus::Failed:
      return 1;
    case ReportStatus::BudgetExceeded:
      return 2;
  }
  return 1;
}

struct ClassInfo {
  unsigned i = 0;
  KernelProfile profile;
  KernelProfile profile_extended;  // over F_{p^{2m}}
  unsigned length = 0;
};

struct DeformationRecord {
  unsigned i = 0;
  FieldElement a{};
  unsigned target_class = 0;
  std::string construction;  // phi, psi, identical, representative
  std::string witness = "1";
  unsigned extension_degree = 0;
  bool iso = false;
  std::string detail;
};

struct SeparationRecord {
  unsigned i = 0, j = 0;
  std::string invariant;
  bool searched = false;
  bool iso_found = false;
};

struct ClassificationReport {
  unsigned p = 0, n = 0;
  Field base;
  std::vector<ClassInfo> classes;
  std::vector<DeformationRecord> deformations;
  std::vector<SeparationRecord> separations;
  bool top_class_has_zero_V = false;
  ReportStatus status = ReportStatus::Failed;
  std::string failure;
};

namespace detail {

inline std::string profile_difference(const KernelProfile& x, const KernelProfile& y) {
  for (std::size_t r = 0; r < x.size(); ++r)
    for (std::size_t s = 0; s < x[r].size(); ++s)
      if (x[r][s] != y[r][s]) {
        std::ostringstream os;
        os << "length ker F^" << r << " cap ker V^" << s << ": " << x[r][s] << " vs " << y[r][s];
        return os.str();
      }
  return {};
}

inline DeformationRecord record_of(unsigned i, const FieldElement& a, unsigned cls, const std::string& kind,
                                   const IsoConstruction& c, unsigned base_m) {
  DeformationRecord d;
  d.i = i;
  d.a = a;
  d.target_class = cls;
  d.construction = kind;
  d.witness = c.field.to_string(c.witness.v);
  d.extension_degree = base_m * c.extension_factor;
  d.iso = c.ok();
  if (!c.morphism.well_defined) d.detail = c.morphism.rejection;
  else if (!c.bijective) d.detail = "morphism is not bijective";
  else if (!c.root_check) d.detail = "root equation check failed";
  else if (!c.surjectivity_witness) d.detail = "surjectivity witness failed";
  return d;
}

}  // namespace detail

/// Verifies that every ThmOne(n, i, a) over F_{p^m} is isomorphic to one of ThmOne(n, i, 0), and that these n
/// representatives are pairwise distinct.
inline ClassificationReport classify(unsigned p, unsigned n, unsigned m, unsigned field_budget = kMaxFieldDegree,
                                     std::uint64_t search_guard = std::uint64_t(1) << 16) {
  ClassificationReport rep;
  rep.p = p;
  rep.n = n;
  try {
    if (n < 1) throw std::invalid_argument("n must be positive");
    const Field k = Field::create(p, m);
    rep.base = k;
    const Field k2 = Field::create(p, 2 * m, std::max(2 * m, kDefaultMaxFieldDegree));
    const FieldEmbedding to_k2 = embed(k, k2);

    std::vector<std::shared_ptr<CyclicEModule>> reps;
    for (unsigned i = 1; i <= n; ++i) {
      const auto pres = ModulePresentation::thm_one(k, n, i);
      reps.push_back(std::make_shared<CyclicEModule>(pres));
      ClassInfo c;
      c.i = i;
      c.length = reps.back()->length();
      c.profile = kernel_profile(*reps.back());
      c.profile_extended = kernel_profile(CyclicEModule(pres.rebase(to_k2)));
      rep.classes.push_back(std::move(c));
    }
    rep.top_class_has_zero_V = verschiebung_vanishes(*reps.back());

    for (unsigned i = 1; i <= n; ++i)
      for (const auto& a : k.elements()) {
        if (n == 1 && !a.is_zero()) continue;
        if (i + 2 <= n) {
          const auto c = build_phi_iso(k, n, i, a, field_budget);
          rep.deformations.push_back(detail::record_of(i, a, i, "phi", c, m));
        } else if (a.is_zero()) {
          DeformationRecord d;
          d.i = i;
          d.a = a;
          d.target_class = i;
          d.construction = "representative";
          d.extension_degree = m;
          d.iso = true;
          rep.deformations.push_back(d);
        } else {
          const FieldElement A = i == n ? a : a + k.one();
          if (A.is_zero()) {
            // V - F^{n-1} + F^{n-1} = V: the same ideal as ThmOne(n, n, 0)
            CyclicEModule src(ModulePresentation::thm_one(k, n, i, a));
            const auto& tgt = *reps.back();
            const auto phi = hom_from_unit_image(src, tgt, WittDBuilder{k, n}.one());
            DeformationRecord d;
            d.i = i;
            d.a = a;
            d.target_class = n;
            d.construction = "identical";
            d.extension_degree = m;
            d.iso = is_isomorphism(phi);
            if (!d.iso) d.detail = phi.well_defined ? "identity is not bijective" : phi.rejection;
            rep.deformations.push_back(d);
          } else {
            const auto c = build_psi_iso(ModulePresentation::thm_one(k, n, i, a), A, field_budget);
            rep.deformations.push_back(detail::record_of(i, a, n - 1, "psi", c, m));
          }
        }
      }

    for (unsigned i = 1; i <= n; ++i)
      for (unsigned j = i + 1; j <= n; ++j) {
        SeparationRecord s;
        s.i = i;
        s.j = j;
        s.invariant = detail::profile_difference(rep.classes[i - 1].profile, rep.classes[j - 1].profile);
        const std::uint64_t size = ipow(k.q(), n);
        if (size <= search_guard) {
          s.searched = true;
          s.iso_found = find_isomorphism(*reps[i - 1], *reps[j - 1], search_guard).has_value();
        }
        rep.separations.push_back(s);
      }

    std::ostringstream why;
    for (const auto& c : rep.classes) {
      if (c.length != n) why << "class " << c.i << " has length " << c.length << "; ";
      if (c.profile != c.profile_extended) why << "class " << c.i << " profile changes under extension; ";
    }
    for (const auto& d : rep.deformations)
      if (!d.iso) why << "deformation (i=" << d.i << ", a=" << d.a << ") failed: " << d.detail << "; ";
    for (const auto& s : rep.separations) {
      if (s.invariant.empty()) why << "classes " << s.i << " and " << s.j << " share a kernel profile; ";
      if (s.iso_found) why << "classes " << s.i << " and " << s.j << " are isomorphic; ";
    }
    if (!rep.top_class_has_zero_V) why << "V does not vanish on class " << n << "; ";
    rep.failure = why.str();
    rep.status = rep.failure.empty() ? ReportStatus::Ok : ReportStatus::Failed;
  } catch (const GuardExceeded& e) {
    rep.status = ReportStatus::BudgetExceeded;
    rep.failure = e.what();
  } catch (const BudgetExhausted& e) {
    rep.status = ReportStatus::BudgetExceeded;
    rep.failure = e.what();
  }
  return rep;
}

inline nlohmann::ordered_json to_json(const ClassificationReport& r) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["p"] = r.p;
  j["n"] = r.n;
  if (r.base.data() != nullptr)
    j["field"] = {{"p", r.base.p()}, {"m", r.base.m()}, {"modulus", r.base.modulus_string()}};
  ordered_json classes = ordered_json::array();
  for (const auto& c : r.classes)
    classes.push_back({{"i", c.i}, {"kernel_profile", c.profile}, {"length", c.length},
                       {"profile_stable_over_quadratic_extension", c.profile == c.profile_extended}});
  j["classes"] = classes;
  ordered_json defs = ordered_json::array();
  for (const auto& d : r.deformations) {
    ordered_json e{{"i", d.i},
                   {"a", r.base.to_string(d.a.v)},
                   {"class", d.target_class},
                   {"construction", d.construction},
                   {"witness_c_or_b", d.witness},
                   {"extension_degree", d.extension_degree},
                   {"iso", d.iso}};
    if (!d.detail.empty()) e["detail"] = d.detail;
    defs.push_back(e);
  }
  j["deformations"] = defs;
  ordered_json sep = ordered_json::array();
  for (const auto& s : r.separations)
    sep.push_back({{"i", s.i},
                   {"j", s.j},
                   {"separating_invariant", s.invariant},
                   {"exhaustive_search", s.searched ? (s.iso_found ? "isomorphism found" : "no isomorphism") : "skipped"}});
  j["nonisomorphism"] = sep;
  j["top_class_V_zero"] = r.top_class_has_zero_V;
  j["status"] = status_name(r.status);
  if (!r.failure.empty()) j["failure"] = r.failure;
  return j;
}

}  // namespace wd
