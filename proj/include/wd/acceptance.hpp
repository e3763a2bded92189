#pragma once

#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "wd/classify.hpp"
#include "wd/emodule.hpp"
#include "wd/hopf.hpp"
#include "wd/hopf_families.hpp"
#include "wd/hopf_invariants.hpp"
#include "wd/witt.hpp"

namespace wd {

struct AcceptanceOptions {
  std::set<unsigned> only;      // empty: every criterion
  bool quick = false;           // smaller enumeration for criteria 4 and 5
  bool mutate_s1_sign = false;  // flips the carry sign in A_1 before the ghost check
};

struct CriterionResult {
  unsigned id = 0;
  std::string title;
  bool pass = false;
  std::string detail;
  double seconds = 0;
};

/// Criteria that cannot pass as stated, with the reason. The check itself is unchanged; the acceptance
/// runner compares the outcome against this list.
inline const std::map<unsigned, std::string>& known_failures() {
  static const std::map<unsigned, std::string> m{
      {9, "the stated map X_0 -> T_0+U_0, ... into ker(F-V)^2 is not a Hopf isomorphism (p=2: not injective; "
          "p=3: does not preserve the comultiplication)"}};
  return m;
}

inline const std::vector<std::pair<unsigned, std::string>>& criterion_titles() {
  static const std::vector<std::pair<unsigned, std::string>> t{
      {1, "Witt ghost identities, p in {2,3,5}, n <= 4"},
      {2, "A_1 = X_1 + Y_1 + S_1, p in {2,3,5}"},
      {3, "FV = VF = p and p x = (0, x_0^p, x_1^p) on W_3(F_4)"},
      {4, "classification into n classes at desk scale"},
      {5, "digit engine agrees with the linear engine"},
      {6, "p = F^{i+1} on ThmOne(n, i, 0)"},
      {7, "presentation and kernel constructions coincide; worked example"},
      {8, "kernel family dimensions and dual invariants"},
      {9, "self-dual example and the map to ker(F-V)^2"},
      {10, "noncommutative example"},
      {11, "infinitesimal inequalities on every constructed algebra"},
      {12, "exactly two extensions of alpha_{p^{n-1}} at (2, 4)"},
      {13, "W_2^2[F-V]: kernel profile and invariants"},
  };
  return t;
}

namespace acceptance_detail {

struct Check {
  bool ok = true;
  std::ostringstream why;
  void fail(const std::string& s) {
    if (ok) why << s;
    ok = false;
  }
};

inline CriterionResult finish(unsigned id, const Check& c, const std::string& pass_detail) {
  CriterionResult r;
  r.id = id;
  r.pass = c.ok;
  r.detail = c.ok ? pass_detail : c.why.str();
  return r;
}

inline std::string witt_str(const FieldWitt& x) {
  std::string s = "(";
  for (unsigned i = 0; i < x.length(); ++i) s += (i ? "," : "") + x[i].field().to_string(x[i].v);
  return s + ")";
}

inline CriterionResult ghost_identities(const AcceptanceOptions& o) {
  Check c;
  int cases = 0;
  for (std::uint32_t p : {2u, 3u, 5u})
    for (unsigned n = 1; n <= 4; ++n) {
      StructurePolynomials s = witt_structure_polys(p, n);
      if (o.mutate_s1_sign && n >= 2)
        s.add[1] = IntPoly::variable(1) + IntPoly::variable(n + 1) - carry_polynomial_s1(p, n);
      const auto g = verify_ghost_identities(s);
      ++cases;
      if (!g.ok) c.fail("p=" + std::to_string(p) + " n=" + std::to_string(n) + ": " + g.failure);
    }
  return finish(1, c, std::to_string(cases) + " (p, n) cases, A, P, N exact");
}

inline CriterionResult carry_match(const AcceptanceOptions& o) {
  Check c;
  for (std::uint32_t p : {2u, 3u, 5u}) {
    IntPoly a1 = witt_structure_polys(p, 2).add[1];
    if (o.mutate_s1_sign) a1 = IntPoly::variable(1) + IntPoly::variable(3) - carry_polynomial_s1(p, 2);
    const IntPoly diff = a1 - (IntPoly::variable(1) + IntPoly::variable(3) + carry_polynomial_s1(p, 2));
    if (!diff.is_zero()) c.fail("p=" + std::to_string(p) + ": difference " + poly_to_string(diff, 2));
  }
  return finish(2, c, "difference is the zero polynomial for p = 2, 3, 5");
}

inline CriterionResult frobenius_verschiebung(const AcceptanceOptions&) {
  Check c;
  const Field k = Field::create(2, 2);
  const auto els = k.elements();
  int count = 0;
  for (const auto& a : els)
    for (const auto& b : els)
      for (const auto& d : els) {
        const FieldWitt x({a, b, d});
        const FieldWitt px = x.times_p();
        ++count;
        if (x.frobenius().verschiebung() != px) c.fail("VF != p at " + witt_str(x));
        if (x.verschiebung().frobenius() != px) c.fail("FV != p at " + witt_str(x));
        if (px != FieldWitt({k.zero(), a.pow(2), b.pow(2)})) c.fail("p x != (0, x_0^p, x_1^p) at " + witt_str(x));
      }
  if (count != 64) c.fail("enumerated " + std::to_string(count) + " vectors");
  return finish(3, c, "all 64 vectors of W_3(F_4)");
}

inline CriterionResult classification(const AcceptanceOptions& o) {
  Check c;
  std::vector<std::array<unsigned, 3>> sets{{2, 2, 2}, {2, 3, 2}, {2, 4, 2}, {3, 2, 1}, {3, 3, 1}};
  if (o.quick) sets = {{2, 2, 2}, {3, 2, 1}};
  std::ostringstream done;
  for (const auto& [p, n, m] : sets) {
    const auto rep = classify(p, n, m);
    std::ostringstream tag;
    tag << "(" << p << "," << n << "," << m << ")";
    if (rep.status != ReportStatus::Ok) c.fail(tag.str() + " " + status_name(rep.status) + ": " + rep.failure);
    else if (rep.classes.size() != n) c.fail(tag.str() + " has " + std::to_string(rep.classes.size()) + " classes");
    done << tag.str() << " ";
  }
  return finish(4, c, done.str() + (o.quick ? "(quick)" : "") + "each with n classes");
}

inline CriterionResult fast_path(const AcceptanceOptions& o) {
  Check c;
  const double cap = o.quick ? 8 : 12;
  std::size_t modules = 0, elements = 0;
  for (unsigned p : {2u, 3u, 5u, 7u, 11u, 13u})
    for (unsigned m = 1; m <= 12; ++m)
      for (unsigned n = 1; n <= 12; ++n) {
        if (m * n * std::log2(static_cast<double>(p)) > cap + 1e-9) continue;
        const Field k = Field::create(p, m);
        const FieldElement s = k.primitive();
        for (unsigned i = 1; i <= n; ++i)
          for (const auto& a : k.elements()) {
            if (n == 1 && !a.is_zero()) continue;
            CyclicEModule M(ModulePresentation::thm_one(k, n, i, a));
            const auto all = M.all_digit_vectors();
            ++modules;
            for (std::size_t t = 0; t < all.size() && c.ok; ++t) {
              const auto& d = all[t];
              const auto& e = all[(7 * t + 1) % all.size()];
              const ZVec v = M.from_digits(d);
              const bool agree = M.from_digits(M.fast_F(d)) == M.act_F(v) && M.from_digits(M.fast_V(d)) == M.act_V(v) &&
                                 M.from_digits(M.fast_p(d)) == M.act_p(v) &&
                                 M.from_digits(M.fast_scalar(s, d)) == M.act_scalar(s, v) &&
                                 M.from_digits(M.fast_add(d, e)) == M.add(v, M.from_digits(e));
              ++elements;
              if (!agree) {
                std::ostringstream w;
                w << "ThmOne(" << n << "," << i << "," << k.to_string(a.v) << ") over F_" << k.q() << " element "
                  << t;
                c.fail(w.str());
              }
            }
          }
      }
  std::ostringstream d;
  d << modules << " modules with p^{mn} <= 2^" << cap << ", " << elements << " elements";
  return finish(5, c, d.str());
}

inline CriterionResult p_is_frobenius_power(const AcceptanceOptions&) {
  Check c;
  int cases = 0;
  for (unsigned p : {2u, 3u, 5u}) {
    const Field k = Field::create(p, 1);
    for (unsigned n = 1; n <= 4; ++n)
      for (unsigned i = 1; i <= n; ++i) {
        CyclicEModule M(ModulePresentation::thm_one(k, n, i));
        ZMap Fi = M.identity_map();
        for (unsigned t = 0; t <= i; ++t) Fi = compose_maps(M.ring(), M.F_map(), Fi, M.dim());
        ++cases;
        for (std::size_t col = 0; col < M.dim(); ++col)
          if (M.reduce(Fi[col]) != M.reduce(M.p_map()[col])) {
            c.fail("p=" + std::to_string(p) + " n=" + std::to_string(n) + " i=" + std::to_string(i) + " column " +
                   std::to_string(col));
            break;
          }
      }
  }
  return finish(6, c, std::to_string(cases) + " modules, p = 2, 3, 5");
}

inline std::string params(unsigned p, unsigned r, unsigned s, unsigned m) {
  std::ostringstream o;
  o << "p=" << p << " (r,s,m)=(" << r << "," << s << "," << m << ")";
  return o.str();
}

inline const std::vector<std::array<unsigned, 3>>& kernel_parameters() {
  static const std::vector<std::array<unsigned, 3>> v{{1, 1, 2}, {2, 1, 2}, {1, 2, 2}};
  return v;
}

inline CriterionResult presentation_vs_kernel(const AcceptanceOptions&) {
  Check c;
  const Field k = Field::create(2, 1);
  for (const auto& [r, s, m] : kernel_parameters()) {
    const auto [n, np] = ModulePresentation::kernel_lengths(r, s, m);
    const auto cmp = compare_structure(build_kernel_hopf_direct(k, r, s, n, np), build_kernel_hopf_presentation(k, r, s, m));
    if (!(cmp.labels_match && cmp.constants_equal && cmp.matching_is_hopf_iso))
      c.fail(params(2, r, s, m) + ": presentation and kernel differ");
  }
  const auto target = build_worked_example_target(k);
  const auto chain = kernel_frobenius_power(build_kernel_hopf_presentation(k, 2, 1, 2), 3);
  const auto via_chain = compare_structure(chain, target);
  if (!(via_chain.labels_match && via_chain.constants_equal)) c.fail("ker F^3 of W_2^4[F^2-V] differs from the target");
  const auto direct = compare_structure(build_kernel_hopf_direct(k, 2, 1, 2, 3), target);
  if (!direct.constants_equal) c.fail("direct kernel on W_2^3 differs from the target");
  return finish(7, c, "3 parameter sets equal; worked example equals k[T0,T1]/(T0^2, T1^4 - T0) by both routes");
}

inline CriterionResult duality_dimensions(const AcceptanceOptions&) {
  Check c;
  int cases = 0;
  for (unsigned p : {2u, 3u}) {
    const Field k = Field::create(p, 1);
    for (const auto& [r, s, m] : kernel_parameters()) {
      const auto A = build_kernel_hopf_presentation(k, r, s, m);
      const auto [n, np] = ModulePresentation::kernel_lengths(r, s, m);
      if (A.dim != ipow(p, s * np) || A.dim != ipow(p, r * n))
        c.fail(params(p, r, s, m) + ": dim " + std::to_string(A.dim));
      const auto dual = invariant_report(dual_hopf(A));
      const auto swapped = invariant_report(build_kernel_hopf_presentation(k, s, r, m));
      if (dual.key() != swapped.key()) c.fail(params(p, r, s, m) + ": dual invariants differ from swapped");
      ++cases;
    }
  }
  return finish(8, c, std::to_string(cases) + " cases at p = 2, 3");
}

inline CriterionResult self_dual_example(const AcceptanceOptions&) {
  Check c;
  std::ostringstream seen;
  for (unsigned p : {2u, 3u}) {
    const Field k = Field::create(p, 1);
    const auto sd = check_selfdual_map(k);
    if (!sd.ok()) c.fail("p=" + std::to_string(p) + " self-dual map: " + sd.detail + "; ");
    const auto ks = check_kernel_square_map(k);
    seen << "p=" << p << " self-dual map " << (sd.ok() ? "ok" : "fails") << ", map to ker(F-V)^2 "
         << (ks.ok() ? "ok" : "fails: " + ks.detail) << "; ";
    if (!ks.ok()) c.ok = false;
  }
  if (!c.ok) {
    const auto tw = check_kernel_square_map_teichmuller(3);
    seen << "twisted map (T,U) -> (T+U, [c](T-U)) over F_81: " << (tw.ok() ? "Hopf iso" : "fails");
    c.why.str("");
    c.why << seen.str();
  }
  return finish(9, c, seen.str());
}

inline CriterionResult noncommutative(const AcceptanceOptions&) {
  Check c;
  const Field k = Field::create(2, 1);
  for (unsigned n : {2u, 3u}) {
    const auto rep = check_noncommutative_example(k, n);
    if (!rep.ok()) {
      std::string why = "n=" + std::to_string(n) + " fails";
      for (const auto& f : rep.failures) why += "; " + f;
      c.fail(why);
    }
  }
  return finish(10, c, "(2,2) and (2,3): axioms, [U_n, U_{n-1}] = U_0, other pairs commute, lie_dim 1");
}

inline std::vector<HopfAlgebra> suite_algebras() {
  std::vector<HopfAlgebra> all;
  for (unsigned p : {2u, 3u}) {
    const Field k = Field::create(p, 1);
    for (unsigned e = 1; e <= 3; ++e) all.push_back(build_alpha(k, e));
    all.push_back(build_witt_hopf(k, 2, 1));
    all.push_back(build_witt_hopf(k, 2, 2));
    for (const auto& [r, s, m] : kernel_parameters()) {
      all.push_back(build_kernel_hopf_presentation(k, r, s, m));
      all.push_back(dual_hopf(all.back()));
    }
    all.push_back(build_selfdual_example(k));
    all.push_back(build_kernel_fv_square(k));
    all.push_back(build_quotient_H(k));
    all.push_back(build_H_dual_model(k));
    all.push_back(build_worked_example_target(k));
    all.push_back(kernel_frobenius_power(build_kernel_hopf_presentation(k, 1, 1, 2), 1));
  }
  const Field k = Field::create(2, 1);
  all.push_back(build_noncommutative_example(k, 2));
  all.push_back(build_noncommutative_example(k, 3));
  return all;
}

inline CriterionResult inequalities(const AcceptanceOptions&) {
  Check c;
  int checked = 0;
  for (const auto& A : suite_algebras()) {
    if (!A.is_commutative()) continue;
    const auto g = invariant_report(A);
    ++checked;
    if (!g.violations.empty()) c.fail(A.name + " over F_" + std::to_string(A.k.q()) + ": " + g.violations.front());
  }
  if (checked < 20) c.fail("only " + std::to_string(checked) + " commutative instances");
  return finish(11, c, std::to_string(checked) + " commutative instances");
}

inline CriterionResult alpha_extensions(const AcceptanceOptions&) {
  Check c;
  const Field k = Field::create(2, 1);
  const unsigned n = 4;
  CyclicEModule alpha(ModulePresentation::thm_one(k, n - 1, n - 1));
  std::vector<unsigned> hits;
  for (unsigned i = 1; i <= n; ++i) {
    CyclicEModule Q(quotient_by_F_power(ModulePresentation::thm_one(k, n, i), n - 1));
    if (find_isomorphism(alpha, Q)) hits.push_back(i);
  }
  std::string got;
  for (unsigned i : hits) got += (got.empty() ? "" : ",") + std::to_string(i);
  if (hits != std::vector<unsigned>{n - 1, n}) c.fail("isomorphic for i in {" + got + "}");
  return finish(12, c, "isomorphic exactly for i in {" + got + "}");
}

inline CriterionResult elliptic_shadow(const AcceptanceOptions&) {
  Check c;
  for (unsigned p : {2u, 3u}) {
    const Field k = Field::create(p, 1);
    const auto pres = ModulePresentation::kernel_fv(k, 1, 1, 2, 2);
    const auto mine = kernel_profile(CyclicEModule(pres));
    const auto dual = kernel_profile(CyclicEModule(dual_presentation(pres)));
    if (mine != dual) c.fail("p=" + std::to_string(p) + ": kernel profiles differ; ");
    const auto g = invariant_report(build_kernel_hopf_presentation(k, 1, 1, 2));
    if (std::make_tuple(g.order_exponent, g.height, g.v_order.value_or(0), g.lie_dim) != std::make_tuple(2u, 2u, 2u, 1u)) {
      std::ostringstream w;
      w << "p=" << p << ": invariants (" << g.order_exponent << "," << g.height << "," << g.v_order.value_or(0) << ","
        << g.lie_dim << ")";
      c.fail(w.str());
    }
  }
  return finish(13, c, "profiles equal, invariants (2, 2, 2, 1) at p = 2, 3");
}

}  // namespace acceptance_detail

/// Runs the selected criteria in order; `report` is called as each one finishes.
inline std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& o,
                                                   const std::function<void(const CriterionResult&)>& report = {}) {
  using namespace acceptance_detail;
  using Fn = CriterionResult (*)(const AcceptanceOptions&);
  static const std::map<unsigned, Fn> fns{
      {1, ghost_identities}, {2, carry_match},   {3, frobenius_verschiebung}, {4, classification},
      {5, fast_path},        {6, p_is_frobenius_power}, {7, presentation_vs_kernel}, {8, duality_dimensions},
      {9, self_dual_example}, {10, noncommutative}, {11, inequalities},        {12, alpha_extensions},
      {13, elliptic_shadow}};
  std::vector<CriterionResult> out;
  for (const auto& [id, title] : criterion_titles()) {
    if (!o.only.empty() && !o.only.count(id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    CriterionResult r;
    try {
      r = fns.at(id)(o);
    } catch (const std::exception& e) {
      r.id = id;
      r.pass = false;
      r.detail = std::string("exception: ") + e.what();
    }
    r.title = title;
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (report) report(r);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace wd
