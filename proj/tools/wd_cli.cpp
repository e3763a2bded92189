// wd: command-line driver for the Witt / Dieudonne / Hopf toolkit.
// Exit codes: 0 ok, 1 failed verification, 2 usage error or guard/budget exceeded.

#include <CLI11.hpp>
#include <algorithm>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "wd/acceptance.hpp"
#include "wd/classify.hpp"
#include "wd/hopf.hpp"
#include "wd/hopf_families.hpp"
#include "wd/hopf_invariants.hpp"
#include "wd/witt.hpp"

using nlohmann::ordered_json;
using namespace wd;

namespace {

constexpr int kExitOk = 0, kExitFailed = 1, kExitGuard = 2;

void emit(const ordered_json& j) { std::cout << j.dump(2) << "\n"; }

// ---- witt-polys

ordered_json poly_json(const IntPoly& f, unsigned n) {
  std::vector<IntPoly::Term> terms(f.terms().begin(), f.terms().end());
  std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  ordered_json out = ordered_json::array();
  for (const auto& [e, c] : terms)
    out.push_back({{"coefficient", c.get_str()}, {"exponents", std::vector<unsigned>(e.begin(), e.begin() + 2 * n)}});
  return out;
}

int cmd_witt_polys(std::uint32_t p, unsigned len, bool json) {
  const Field k = Field::create(p, 1);  // validates p
  (void)k;
  const auto& s = witt_structure_polys(p, len);
  if (json) {
    ordered_json j;
    j["p"] = p;
    j["length"] = len;
    std::vector<std::string> vars;
    for (unsigned i = 0; i < len; ++i) vars.push_back("X" + std::to_string(i));
    for (unsigned i = 0; i < len; ++i) vars.push_back("Y" + std::to_string(i));
    j["variables"] = vars;
    for (const auto& [key, polys] : {std::pair{"add", &s.add}, std::pair{"mul", &s.mul}, std::pair{"neg", &s.neg}}) {
      ordered_json arr = ordered_json::array();
      for (const auto& f : *polys) arr.push_back(poly_json(f, len));
      j[key] = arr;
    }
    emit(j);
  } else {
    std::cout << "Witt structure polynomials, p = " << p << ", length " << len << "\n";
    for (unsigned i = 0; i < len; ++i) std::cout << "A_" << i << " = " << poly_to_string(s.add[i], len) << "\n";
    for (unsigned i = 0; i < len; ++i) std::cout << "P_" << i << " = " << poly_to_string(s.mul[i], len) << "\n";
    for (unsigned i = 0; i < len; ++i) std::cout << "N_" << i << " = " << poly_to_string(s.neg[i], len) << "\n";
  }
  return kExitOk;
}

// ---- hopf

std::string exponent_string(const std::vector<std::string>& names, const std::vector<unsigned>& e, std::size_t from,
                            std::size_t count) {
  std::string s;
  for (std::size_t v = 0; v < count; ++v) {
    if (e[from + v] == 0) continue;
    if (!s.empty()) s += "*";
    s += names[v];
    if (e[from + v] > 1) s += "^" + std::to_string(e[from + v]);
  }
  return s.empty() ? "1" : s;
}

std::string relation_string(const TestAlgebra& A, std::size_t v) {
  const auto& rule = A.rules()[v];
  std::string lhs = A.names()[v] + "^" + std::to_string(rule.bound);
  if (!rule.rhs) return lhs;
  const std::string c = A.base().to_string(rule.rhs->first);
  const std::string mono = exponent_string(A.names(), rule.rhs->second, 0, A.num_vars());
  return lhs + " - " + (c == "1" ? "" : c + "*") + mono;
}

std::string tensor_string(const HopfPresentation& P, const AlgebraElement& x) {
  if (x.terms.empty()) return "0";
  const auto& names = P.algebra->names();
  const std::size_t nv = P.algebra->num_vars();
  std::string s;
  for (const auto& [i, c] : x.terms) {
    if (!s.empty()) s += " + ";
    const auto e = P.square->exponents(i);
    const std::string cs = P.algebra->base().to_string(c);
    if (cs != "1") s += cs + "*";
    s += exponent_string(names, e, 0, nv) + " (x) " + exponent_string(names, e, nv, nv);
  }
  return s;
}

ordered_json invariants_json(const GroupSchemeInvariants& g) {
  ordered_json j;
  j["order_exponent"] = g.order_exponent;
  if (g.commutative) j["height"] = g.height;
  else j["height"] = nullptr;
  if (g.v_order) j["v_order"] = *g.v_order;
  else j["v_order"] = nullptr;
  j["lie_dim"] = g.lie_dim;
  j["primitive_dim"] = g.primitive_dim;
  if (g.primitive_p_nil_dim) j["primitive_p_nil_dim"] = *g.primitive_p_nil_dim;
  else j["primitive_p_nil_dim"] = nullptr;
  j["monogenic"] = g.monogenic;
  j["commutative"] = g.commutative;
  j["cocommutative"] = g.cocommutative;
  j["inequality_violations"] = g.violations;
  return j;
}

GroupSchemeInvariants safe_invariants(const HopfAlgebra& A) {
  return invariant_report(A, A.is_cocommutative());
}

int cmd_hopf(std::uint32_t p, const std::string& family, unsigned r, unsigned s, unsigned m, unsigned n, unsigned i,
             bool json) {
  const Field k = Field::create(p, 1);
  HopfAlgebra A;
  if (family == "witt") A = build_witt_hopf(k, n, i);
  else if (family == "kernel") A = build_kernel_hopf_presentation(k, r, s, m);
  else if (family == "noncomm") A = build_noncommutative_example(k, n);
  else A = build_selfdual_example(k);

  const auto axioms = verify_hopf_axioms(A);
  const auto inv = safe_invariants(A);
  const HopfPresentation& P = *A.presentation;
  const TestAlgebra& alg = *P.algebra;

  ordered_json j;
  j["name"] = A.name;
  j["p"] = p;
  j["dimension"] = A.dim;
  j["generators"] = alg.names();
  ordered_json rel = ordered_json::array();
  for (std::size_t v = 0; v < alg.num_vars(); ++v) rel.push_back(relation_string(alg, v));
  j["relations"] = rel;
  ordered_json co;
  for (std::size_t v = 0; v < alg.num_vars(); ++v) co[alg.names()[v]] = tensor_string(P, P.delta[v]);
  j["comultiplication"] = co;
  ordered_json an;
  for (std::size_t v = 0; v < alg.num_vars(); ++v) an[alg.names()[v]] = alg.to_string(P.antipode[v]);
  j["antipode"] = an;
  j["axioms"] = {{"pass", axioms.all_pass()}, {"failures", axioms.failures}};
  j["invariants"] = invariants_json(inv);
  const bool ok = axioms.all_pass() && inv.violations.empty();
  j["status"] = ok ? "ok" : "failed";

  if (json) {
    emit(j);
  } else {
    std::cout << A.name << " over F_" << p << ", dimension " << A.dim << "\n";
    std::cout << "generators: ";
    for (std::size_t v = 0; v < alg.num_vars(); ++v) std::cout << (v ? ", " : "") << alg.names()[v];
    std::cout << "\nrelations:\n";
    for (const auto& x : rel) std::cout << "  " << x.get<std::string>() << "\n";
    std::cout << "comultiplication:\n";
    for (const auto& [g, d] : co.items()) std::cout << "  Delta(" << g << ") = " << d.get<std::string>() << "\n";
    std::cout << "antipode:\n";
    for (const auto& [g, d] : an.items()) std::cout << "  S(" << g << ") = " << d.get<std::string>() << "\n";
    std::cout << "Hopf axioms: " << (axioms.all_pass() ? "pass" : "FAIL") << "\n";
    for (const auto& f : axioms.failures) std::cout << "  " << f << "\n";
    std::cout << "invariants:\n";
    for (const auto& [key, val] : j["invariants"].items()) std::cout << "  " << key << ": " << val.dump() << "\n";
  }
  return ok ? kExitOk : kExitFailed;
}

// ---- duality

int cmd_duality(std::uint32_t p, unsigned r, unsigned s, unsigned m, bool json) {
  const Field k = Field::create(p, 1);
  const auto [n, np] = ModulePresentation::kernel_lengths(r, s, m);
  const HopfAlgebra A = build_kernel_hopf_presentation(k, r, s, m);
  const HopfAlgebra D = dual_hopf(A);
  const HopfAlgebra W = build_kernel_hopf_presentation(k, s, r, m);
  const auto gi = invariant_report(A), di = invariant_report(D), wi = invariant_report(W);
  const std::uint64_t by_s = ipow(p, s * np), by_r = ipow(p, r * n);
  const bool dims = A.dim == by_s && A.dim == by_r && W.dim == A.dim;
  const bool match = di.key() == wi.key();
  const auto dual_axioms = verify_hopf_axioms(D);

  ordered_json j;
  j["p"] = p;
  j["r"] = r;
  j["s"] = s;
  j["m"] = m;
  j["n"] = n;
  j["n_prime"] = np;
  j["group"] = A.name;
  j["swapped"] = W.name;
  j["dimension"] = A.dim;
  j["dimension_identity"] = {{"p^(s*n')", by_s}, {"p^(r*n)", by_r}, {"holds", dims}};
  j["dual_axioms_pass"] = dual_axioms.all_pass();
  j["invariants"] = {{"group", invariants_json(gi)}, {"dual", invariants_json(di)}, {"swapped", invariants_json(wi)}};
  j["dual_matches_swapped"] = match;
  const bool ok = dims && match && dual_axioms.all_pass();
  j["status"] = ok ? "ok" : "failed";
  if (json) {
    emit(j);
  } else {
    std::cout << "G = " << A.name << " over F_" << p << " (n = " << n << ", n' = " << np << ")\n";
    std::cout << "dim k[G] = " << A.dim << ", p^(s n') = " << by_s << ", p^(r n) = " << by_r
              << (dims ? "  [identity holds]" : "  [identity FAILS]") << "\n";
    std::cout << "dual Hopf axioms: " << (dual_axioms.all_pass() ? "pass" : "FAIL") << "\n";
    for (const auto& [label, g] : {std::pair{"G", &gi}, std::pair{"G dual", &di}, std::pair{W.name.c_str(), &wi}})
      std::cout << "  " << label << ": " << invariants_json(*g).dump() << "\n";
    std::cout << "dual invariants " << (match ? "match" : "DO NOT match") << " the swapped presentation\n";
  }
  return ok ? kExitOk : kExitFailed;
}

// ---- classify

int cmd_classify(std::uint32_t p, unsigned n, unsigned m, unsigned budget, bool json) {
  const auto rep = classify(p, n, m, budget);
  if (json) {
    emit(to_json(rep));
  } else {
    std::cout << "classification of ThmOne(" << n << ", i, a) over F_" << ipow(p, m) << ": " << status_name(rep.status)
              << "\n";
    for (const auto& c : rep.classes)
      std::cout << "  class i=" << c.i << " length " << c.length
                << (c.profile == c.profile_extended ? ", profile stable over F_q^2" : ", profile NOT stable") << "\n";
    std::size_t iso = 0;
    for (const auto& d : rep.deformations) iso += d.iso ? 1 : 0;
    std::cout << "  deformations collapsed: " << iso << " / " << rep.deformations.size() << "\n";
    for (const auto& sep : rep.separations)
      std::cout << "  classes " << sep.i << ", " << sep.j << " separated by " << sep.invariant << "\n";
    if (!rep.failure.empty()) std::cout << "failure: " << rep.failure << "\n";
  }
  return exit_code(rep.status);
}

// ---- selfcheck

int cmd_selfcheck(const std::vector<unsigned>& only, bool quick, bool mutate, bool json) {
  AcceptanceOptions opt;
  opt.only.insert(only.begin(), only.end());
  opt.quick = quick;
  opt.mutate_s1_sign = mutate;
  const auto& known = known_failures();
  std::optional<CriterionResult> first;
  const auto results = run_acceptance(opt, [&](const CriterionResult& r) {
    if (!r.pass && !first) first = r;
    if (json) return;
    std::cout << (r.pass ? "PASS" : "FAIL") << "  " << (r.id < 10 ? " " : "") << r.id << "  " << r.title << ": "
              << r.detail << (!r.pass && known.count(r.id) ? "  [known failure, see README]" : "") << "\n";
    std::cout.flush();
  });
  if (json) {
    ordered_json j;
    j["quick"] = quick;
    j["mutate_s1_sign"] = mutate;
    ordered_json arr = ordered_json::array();
    for (const auto& r : results)
      arr.push_back({{"criterion", r.id}, {"title", r.title}, {"pass", r.pass}, {"known_failure", known.count(r.id) > 0},
                     {"detail", r.detail}});
    j["criteria"] = arr;
    if (first) j["first_failure"] = {{"criterion", first->id}, {"detail", first->detail}};
    j["status"] = first ? "failed" : "ok";
    emit(j);
  } else if (first) {
    std::cout << "first counterexample: "
              << ordered_json({{"criterion", first->id}, {"detail", first->detail}}).dump() << "\n";
  }
  return first ? kExitFailed : kExitOk;
}

bool is_prime(std::uint32_t p) {
  if (p < 2) return false;
  for (std::uint32_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Witt vectors, Dieudonne modules and finite Hopf algebras"};
  app.require_subcommand(1);
  const auto prime = CLI::Validator(
      [](std::string& s) { return is_prime(static_cast<std::uint32_t>(std::stoul(s))) ? "" : "p must be prime"; },
      "PRIME");

  std::uint32_t p = 2;
  unsigned len = 2, r = 1, s = 1, m = 2, n = 2, i = 1, field_deg = 1, budget = kMaxFieldDegree;
  bool json = false, quick = false, mutate = false;
  std::string family;
  std::vector<unsigned> only;

  auto* wp = app.add_subcommand("witt-polys", "universal Witt addition, multiplication and negation polynomials");
  wp->add_option("--p", p, "prime")->required()->check(prime);
  wp->add_option("--len", len, "Witt vector length")->required()->check(CLI::Range(1u, 6u));
  wp->add_flag("--json", json);

  auto* hp = app.add_subcommand("hopf", "presentation and invariants of a finite Hopf algebra");
  hp->add_option("--p", p, "prime")->required()->check(prime);
  hp->add_option("--family", family, "witt | kernel | noncomm | selfdual-example")
      ->required()
      ->check(CLI::IsMember({"witt", "kernel", "noncomm", "selfdual-example"}));
  hp->add_option("--r", r, "Frobenius exponent (kernel)")->check(CLI::Range(1u, 8u));
  hp->add_option("--s", s, "Verschiebung exponent (kernel)")->check(CLI::Range(1u, 8u));
  hp->add_option("--m", m, "kernel parameter, at least 2")->check(CLI::Range(2u, 8u));
  hp->add_option("--n", n, "Witt length (witt, noncomm)")->check(CLI::Range(1u, 8u));
  hp->add_option("--i", i, "Frobenius kernel exponent (witt)")->check(CLI::Range(1u, 8u));
  hp->add_flag("--json", json);

  auto* du = app.add_subcommand("duality", "dual-pair report for W_n^{n'}[F^r - V^s]");
  du->add_option("--p", p, "prime")->required()->check(prime);
  du->add_option("--r", r)->required()->check(CLI::Range(1u, 8u));
  du->add_option("--s", s)->required()->check(CLI::Range(1u, 8u));
  du->add_option("--m", m)->required()->check(CLI::Range(2u, 8u));
  du->add_flag("--json", json);

  auto* cl = app.add_subcommand("classify", "classify the deformations ThmOne(n, i, a)");
  cl->add_option("--p", p, "prime")->required()->check(prime);
  cl->add_option("--n", n, "module length")->required()->check(CLI::Range(1u, 8u));
  cl->add_option("--field-deg", field_deg, "base field F_{p^m}")->check(CLI::Range(1u, 12u));
  cl->add_option("--budget", budget, "largest extension degree searched for roots")->check(CLI::Range(1u, 64u));
  cl->add_flag("--json", json);

  auto* sc = app.add_subcommand("selfcheck", "run the acceptance criteria");
  sc->add_option("--only", only, "criterion number (repeatable)")->check(CLI::Range(1u, 13u));
  sc->add_flag("--quick", quick, "smaller enumerations for the slow criteria");
  sc->add_flag("--mutate-s1", mutate, "flip the sign of S_1 first (mutation fixture)");
  sc->add_flag("--json", json);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e) == 0 ? kExitOk : kExitGuard;
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitGuard;
  }

  try {
    if (*wp) return cmd_witt_polys(p, len, json);
    if (*hp) {
      if (family == "noncomm" && n < 2) throw std::invalid_argument("noncomm needs --n >= 2");
      return cmd_hopf(p, family, r, s, m, n, i, json);
    }
    if (*du) return cmd_duality(p, r, s, m, json);
    if (*cl) return cmd_classify(p, n, field_deg, budget, json);
    if (*sc) return cmd_selfcheck(only, quick, mutate, json);
  } catch (const GuardExceeded& e) {
    std::cerr << "guard exceeded: " << e.what() << "\n";
    return kExitGuard;
  } catch (const BudgetExhausted& e) {
    std::cerr << "budget exhausted: " << e.what() << "\n";
    return kExitGuard;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid arguments: " << e.what() << "\n";
    return kExitGuard;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailed;
  }
  return kExitGuard;
}
