#include <gtest/gtest.h>

#include <random>
#include <set>

#include "wd/classify.hpp"

using namespace wd;

namespace {

FieldElement random_elem(const Field& k, std::mt19937_64& rng) {
  return k.elem(static_cast<std::uint32_t>(rng() % k.q()));
}

WittDElem random_delem(const Field& k, unsigned N, int spread, std::mt19937_64& rng) {
  WittDElem x;
  for (int a = -spread; a <= spread; ++a) {
    if (rng() % 3 == 0) continue;
    std::vector<FieldElement> c;
    for (unsigned t = 0; t < N; ++t) c.push_back(random_elem(k, rng));
    x.add_term(a, FieldWitt(c));
  }
  return x;
}

// All Z/mod-combinations of the rows, by brute force.
std::set<ZVec> brute_span(const std::vector<ZVec>& rows, std::uint64_t mod, std::size_t cols) {
  std::set<ZVec> out;
  std::vector<std::uint64_t> coef(rows.size(), 0);
  while (true) {
    ZVec v(cols, 0);
    for (std::size_t r = 0; r < rows.size(); ++r)
      for (std::size_t j = 0; j < cols; ++j) v[j] = (v[j] + coef[r] * rows[r][j]) % mod;
    out.insert(v);
    std::size_t r = 0;
    while (r < rows.size() && ++coef[r] == mod) coef[r++] = 0;
    if (r == rows.size()) break;
  }
  return out;
}

}  // namespace

TEST(Howell, MatchesBruteForceSpans) {
  std::mt19937_64 rng(7);
  for (auto [p, N] : std::vector<std::pair<unsigned, unsigned>>{{2, 2}, {2, 3}, {3, 2}}) {
    const ZpN R(p, N);
    for (int trial = 0; trial < 40; ++trial) {
      const std::size_t cols = 3;
      std::vector<ZVec> rows;
      const std::size_t nrows = 1 + rng() % 3;
      for (std::size_t r = 0; r < nrows; ++r) {
        ZVec v(cols);
        for (auto& x : v) x = rng() % R.mod;
        // bias towards non-units so the Howell extra rows matter
        if (rng() % 2) for (auto& x : v) x = (x * p) % R.mod;
        rows.push_back(v);
      }
      const auto span = brute_span(rows, R.mod, cols);
      const ZSpan h = ZSpan::from_rows(R, cols, rows);
      EXPECT_EQ(ipow(p, static_cast<unsigned>(h.log_size())), span.size());
      ZVec v(cols, 0);
      std::set<ZVec> reps;
      for (std::uint64_t code = 0; code < ipow(R.mod, cols); ++code) {
        std::uint64_t t = code;
        for (auto& x : v) {
          x = t % R.mod;
          t /= R.mod;
        }
        EXPECT_EQ(h.contains(v), span.count(v) == 1);
        reps.insert(h.reduce(v));
      }
      EXPECT_EQ(reps.size() * span.size(), ipow(R.mod, cols));
    }
  }
}

TEST(Howell, PreimageOfZero) {
  // x -> 2x on Z/4: kernel {0, 2}
  const ZpN R(2, 2);
  const ZSpan zero(R, 1);
  const ZSpan K = preimage(ZMap{ZVec{2}}, zero, 1);
  EXPECT_EQ(K.log_size(), 1u);
  EXPECT_TRUE(K.contains({2}));
  EXPECT_FALSE(K.contains({1}));
}

TEST(RingE, DefiningRelations) {
  const Field k = Field::create(2, 2);
  const unsigned N = 3;
  const WittDBuilder B{k, N};
  EXPECT_EQ(B.F(1) * B.V(1), B.p_times(B.one()));
  EXPECT_EQ(B.V(1) * B.F(1), B.p_times(B.one()));
  for (const auto& xi : k.elements()) {
    EXPECT_EQ(B.F(1) * B.teich_term(xi, 0), B.teich_term(xi.pow(2), 1));
    EXPECT_EQ(B.teich_term(xi, 0) * B.V(1), B.V(1) * B.teich_term(xi.pow(2), 0));
  }
  EXPECT_EQ(B.F(2) * B.V(3), B.p_times(B.p_times(B.V(1))));
}

TEST(RingE, AssociativeAndDistributive) {
  std::mt19937_64 rng(11);
  for (auto [p, m] : std::vector<std::pair<unsigned, unsigned>>{{2, 2}, {3, 1}}) {
    const Field k = Field::create(p, m);
    for (int t = 0; t < 1000; ++t) {
      const auto x = random_delem(k, 3, 2, rng), y = random_delem(k, 3, 2, rng), z = random_delem(k, 3, 2, rng);
      ASSERT_EQ((x * y) * z, x * (y * z));
      ASSERT_EQ(x * (y + z), x * y + x * z);
      ASSERT_EQ((x + y) * z, x * z + y * z);
    }
  }
}

TEST(RingE, GaloisRingCoefficientsAgree) {
  std::mt19937_64 rng(5);
  const Field k = Field::create(3, 2);
  const auto gr = GaloisRing::get(k, 3);
  for (int t = 0; t < 200; ++t) {
    const auto x = random_delem(k, 3, 2, rng), y = random_delem(k, 3, 2, rng);
    EXPECT_EQ(to_gr(*gr, x * y), to_gr(*gr, x) * to_gr(*gr, y));
    EXPECT_EQ(to_witt(*gr, to_gr(*gr, x)), x);
  }
}

TEST(Modules, LengthsOfPresentedModules) {
  std::mt19937_64 rng(3);
  for (auto [p, m] : std::vector<std::pair<unsigned, unsigned>>{{2, 1}, {2, 2}, {3, 1}}) {
    const Field k = Field::create(p, m);
    for (unsigned n = 1; n <= 4; ++n)
      for (unsigned i = 1; i <= n; ++i) {
        const FieldElement a = n == 1 ? k.zero() : random_elem(k, rng);
        CyclicEModule M(ModulePresentation::thm_one(k, n, i, a));
        EXPECT_EQ(M.length(), n) << M.presentation().describe();
      }
  }
  const Field k = Field::create(2, 1);
  for (unsigned n = 1; n <= 3; ++n)
    for (unsigned np = 1; np <= 3; ++np) EXPECT_EQ(CyclicEModule(ModulePresentation::full_witt(k, n, np)).length(), n * np);
}

TEST(Modules, VerschiebungAndFrobeniusNilpotent) {
  const Field k = Field::create(2, 2);
  for (unsigned n = 1; n <= 4; ++n)
    for (unsigned i = 1; i <= n; ++i) {
      CyclicEModule M(ModulePresentation::thm_one(k, n, i, n == 1 ? k.zero() : k.gen()));
      for (const auto& x : M.all_elements()) {
        ZVec f = x, v = x;
        for (unsigned t = 0; t < n; ++t) {
          f = M.act_F(f);
          v = M.act_V(v);
        }
        ASSERT_TRUE(M.is_zero(f));
        ASSERT_TRUE(M.is_zero(v));
      }
    }
}

TEST(Modules, SmallRelationsByHand) {
  const Field k = Field::create(2, 1);
  CyclicEModule M(ModulePresentation::thm_one(k, 3, 1));
  const ZVec one = M.unit();
  EXPECT_EQ(M.act_V(one), M.act_F(one));
  EXPECT_EQ(M.act_p(one), M.act_F(M.act_F(one)));
  EXPECT_FALSE(M.is_zero(M.act_p(one)));
}

TEST(Modules, PEqualsFrobeniusPower) {
  for (unsigned p : {2u, 3u}) {
    const Field k = Field::create(p, 1);
    for (unsigned n = 1; n <= 4; ++n)
      for (unsigned i = 1; i <= n; ++i) {
        CyclicEModule M(ModulePresentation::thm_one(k, n, i));
        ZMap Fi = M.identity_map();
        for (unsigned t = 0; t <= i; ++t) Fi = compose_maps(M.ring(), M.F_map(), Fi, M.dim());
        for (std::size_t c = 0; c < M.dim(); ++c) EXPECT_EQ(M.reduce(Fi[c]), M.reduce(M.p_map()[c]));
      }
  }
}

TEST(FastPath, AgreesWithOracleExhaustively) {
  for (auto [p, m, n] : std::vector<std::array<unsigned, 3>>{{2, 1, 5}, {2, 2, 3}, {3, 1, 3}, {5, 1, 2}}) {
    const Field k = Field::create(p, m);
    for (unsigned i = 1; i <= n; ++i)
      for (const auto& a : k.elements()) {
        if (n == 1 && !a.is_zero()) continue;
        CyclicEModule M(ModulePresentation::thm_one(k, n, i, a));
        const auto all = M.all_digit_vectors();
        std::set<ZVec> seen;
        const FieldElement c = k.primitive();
        for (std::size_t t = 0; t < all.size(); ++t) {
          const auto& d = all[t];
          const ZVec v = M.from_digits(d);
          seen.insert(v);
          ASSERT_EQ(M.from_digits(M.fast_F(d)), M.act_F(v));
          ASSERT_EQ(M.from_digits(M.fast_V(d)), M.act_V(v));
          ASSERT_EQ(M.from_digits(M.fast_p(d)), M.act_p(v));
          ASSERT_EQ(M.from_digits(M.fast_scalar(c, d)), M.act_scalar(c, v));
          const auto& e = all[(7 * t + 1) % all.size()];
          ASSERT_EQ(M.from_digits(M.fast_add(d, e)), M.add(v, M.from_digits(e)));
        }
        EXPECT_EQ(seen.size(), all.size());  // digit vectors are a transversal
      }
  }
}

TEST(FastPath, CertificatesReverify) {
  std::mt19937_64 rng(17);
  for (auto [p, m, n] : std::vector<std::array<unsigned, 3>>{{2, 2, 3}, {3, 1, 4}, {2, 1, 4}}) {
    const Field k = Field::create(p, m);
    for (unsigned i = 1; i <= n; ++i) {
      CyclicEModule M(ModulePresentation::thm_one(k, n, i, random_elem(k, rng)));
      for (int t = 0; t < 60; ++t) {
        const auto x = random_delem(k, n, static_cast<int>(n), rng);
        const auto red = M.reduce_normal_form(x);
        ASSERT_TRUE(M.verify_certificate(x, red));
        ASSERT_EQ(M.from_digits(red.digits), M.element(x));
      }
    }
  }
}

TEST(Morphisms, IdentityAndZero) {
  const Field k = Field::create(2, 1);
  CyclicEModule M(ModulePresentation::thm_one(k, 3, 2));
  const WittDBuilder B{k, 3};
  const auto id = hom_from_unit_image(M, M, B.one());
  EXPECT_TRUE(id.well_defined);
  EXPECT_TRUE(is_isomorphism(id));
  for (const auto& x : M.all_elements()) EXPECT_EQ(id(x), x);
  const auto zero = hom_from_unit_image(M, M, WittDElem{});
  EXPECT_TRUE(zero.well_defined);
  EXPECT_FALSE(is_isomorphism(zero));
}

TEST(Morphisms, RejectsMapIntoAlphaModule) {
  const Field k = Field::create(2, 1);
  CyclicEModule src(ModulePresentation::thm_one(k, 2, 1));
  CyclicEModule tgt(ModulePresentation::thm_one(k, 2, 2));
  const auto phi = hom_from_unit_image(src, tgt, WittDBuilder{k, 2}.one());
  EXPECT_FALSE(phi.well_defined);
  EXPECT_NE(phi.rejection.find("V"), std::string::npos);
  // (V - F) 1 = -F 1 != 0 in the target
  EXPECT_FALSE(tgt.is_zero(tgt.element(WittDBuilder{k, 2}.V(1) - WittDBuilder{k, 2}.F(1))));
}

TEST(Morphisms, PhiForThreeOneOne) {
  const Field k = Field::create(2, 1);
  const auto c = build_phi_iso(k, 3, 1, k.one());
  // X + X^4 = 1 has no root in F_2 or F_4 other than via F_16
  EXPECT_TRUE(c.ok());
  EXPECT_EQ(c.field.m(), 4u);
  EXPECT_TRUE((c.witness + c.witness.pow(4) + c.field.one()).is_zero());
}

TEST(Morphisms, PhiWithZeroDeformationUsesNonzeroRoot) {
  const Field k = Field::create(3, 1);
  const auto c = build_phi_iso(k, 3, 1, k.zero());
  EXPECT_TRUE(c.ok());
  EXPECT_FALSE(c.witness.is_zero());
}

TEST(Morphisms, PsiOverFourElements) {
  const Field k = Field::create(2, 2);
  const auto g = k.gen();
  const auto c = build_psi_iso(k, 2, g);
  EXPECT_TRUE(c.ok());
  EXPECT_FALSE(c.witness.is_zero());
  EXPECT_TRUE(c.surjectivity_witness);
  const auto trivial = build_psi_iso(k, 2, k.one());
  EXPECT_TRUE(trivial.ok());
  EXPECT_EQ(trivial.witness, k.one());
}

TEST(Morphisms, WrongUnitImageIsRejected) {
  // 1 -> 1 + F in ThmOne(3,1,0) from ThmOne(3,1,1): gamma_0 = -1 + 1 - 1 != 0
  const Field k = Field::create(2, 1);
  CyclicEModule src(ModulePresentation::thm_one(k, 3, 1, k.one()));
  CyclicEModule tgt(ModulePresentation::thm_one(k, 3, 1));
  const WittDBuilder B{k, 3};
  EXPECT_FALSE(hom_from_unit_image(src, tgt, B.one() + B.F(1)).well_defined);
}

TEST(KernelProfile, VerschiebungKernelHasLengthI) {
  for (unsigned p : {2u, 3u}) {
    const Field k = Field::create(p, 1);
    for (unsigned i = 1; i <= 3; ++i) {
      CyclicEModule M(ModulePresentation::thm_one(k, 3, i));
      const auto t = kernel_profile(M);
      EXPECT_EQ(t[3][1], i);  // V^3 = 0 leaves ker V
      EXPECT_EQ(t[1][3], 1u);
      EXPECT_EQ(t[0][0], 0u);
      EXPECT_EQ(t[3][3], 3u);
    }
  }
  const Field k = Field::create(2, 1);
  CyclicEModule M(ModulePresentation::thm_one(k, 3, 1));
  const ZVec f2 = M.act_F(M.act_F(M.unit()));
  EXPECT_TRUE(M.is_zero(M.act_V(f2)));
  EXPECT_FALSE(M.is_zero(f2));
}

TEST(KernelProfile, StableUnderQuadraticExtension) {
  for (auto [p, m] : std::vector<std::pair<unsigned, unsigned>>{{2, 1}, {2, 2}, {3, 1}}) {
    const Field k = Field::create(p, m);
    const Field k2 = Field::create(p, 2 * m);
    const auto e = embed(k, k2);
    for (unsigned n = 1; n <= 4; ++n)
      for (unsigned i = 1; i <= n; ++i) {
        const auto pres = ModulePresentation::thm_one(k, n, i);
        EXPECT_EQ(kernel_profile(CyclicEModule(pres)), kernel_profile(CyclicEModule(pres.rebase(e))));
      }
  }
}

TEST(Quotients, LowerFrobeniusQuotient) {
  const Field k = Field::create(2, 1);
  for (unsigned n = 3; n <= 4; ++n)
    for (unsigned i = 1; i + 2 <= n; ++i) {
      CyclicEModule Q(quotient_by_F_power(ModulePresentation::thm_one(k, n, i), n - 1));
      CyclicEModule T(ModulePresentation::thm_one(k, n - 1, i));
      EXPECT_EQ(Q.length(), n - 1);
      EXPECT_TRUE(find_isomorphism(T, Q).has_value());
    }
  CyclicEModule M(ModulePresentation::thm_one(k, 1, 1));
  EXPECT_EQ(CyclicEModule(quotient_by_F_power(M.presentation(), 0)).length(), 0u);
}

TEST(Quotients, ExactlyTwoExtensionsOfAlpha) {
  const Field k = Field::create(2, 1);
  const unsigned n = 3;
  CyclicEModule alpha(ModulePresentation::thm_one(k, n - 1, n - 1));
  std::vector<unsigned> hits;
  for (unsigned i = 1; i <= n; ++i) {
    CyclicEModule Q(quotient_by_F_power(ModulePresentation::thm_one(k, n, i), n - 1));
    if (find_isomorphism(alpha, Q)) hits.push_back(i);
  }
  EXPECT_EQ(hits, (std::vector<unsigned>{n - 1, n}));
}

TEST(Duality, PresentationSwap) {
  const Field k = Field::create(2, 1);
  const auto self = ModulePresentation::kernel_fv(k, 1, 1, 2, 2);
  const auto d = dual_presentation(self);
  EXPECT_EQ(d.r, 1u);
  EXPECT_EQ(d.nV, 2u);
  EXPECT_EQ(d.nF, 2u);
  const auto [n, np] = ModulePresentation::kernel_lengths(2, 1, 2);
  EXPECT_EQ(n, 2u);
  EXPECT_EQ(np, 4u);
  const auto pres = ModulePresentation::kernel_fv(k, 2, 1, n, np);
  const auto dual = dual_presentation(pres);
  EXPECT_EQ(dual.r, 1u);
  EXPECT_EQ(dual.s, 2u);
  EXPECT_EQ(dual.nV, 4u);
  EXPECT_EQ(dual.nF, 2u);
  EXPECT_EQ(CyclicEModule(pres).length(), 4u);
  EXPECT_EQ(CyclicEModule(dual).length(), 4u);
  EXPECT_THROW(ModulePresentation::kernel_fv(k, 2, 1, 3, 3), std::invalid_argument);
}

TEST(Classify, SmallCasesSucceed) {
  for (auto [p, n, m] : std::vector<std::array<unsigned, 3>>{{2, 1, 1}, {2, 2, 2}, {2, 3, 2}, {3, 2, 1}}) {
    const auto rep = classify(p, n, m);
    EXPECT_EQ(rep.status, ReportStatus::Ok) << rep.failure;
    EXPECT_EQ(rep.classes.size(), n);
    EXPECT_TRUE(rep.top_class_has_zero_V);
  }
}

TEST(Classify, JsonIsStable) {
  const auto a = to_json(classify(2, 3, 2)).dump(2);
  const auto b = to_json(classify(2, 3, 2)).dump(2);
  EXPECT_EQ(a, b);
  EXPECT_NE(a.find("\"status\": \"ok\""), std::string::npos);
}

TEST(Classify, BudgetExhaustionIsReported) {
  // the needed roots live beyond F_4
  const auto rep = classify(2, 3, 1, 2);
  EXPECT_EQ(rep.status, ReportStatus::BudgetExceeded);
  EXPECT_EQ(exit_code(rep.status), 2);
}
