#include <gtest/gtest.h>

#include <random>

#include "wd/test_algebra.hpp"
#include "wd/witt.hpp"

using namespace wd;

namespace {

IntPoly X(unsigned j) { return IntPoly::variable(j); }
IntPoly Y(unsigned j, unsigned n) { return IntPoly::variable(n + j); }
IntPoly mono(unsigned vx, std::uint16_t ex, unsigned vy, std::uint16_t ey) {
  return IntPoly::variable(vx, ex) * IntPoly::variable(vy, ey);
}

FieldElement random_elem(const Field& k, std::mt19937_64& rng) {
  return k.elem(static_cast<std::uint32_t>(rng() % k.q()));
}

FieldWitt random_witt(const Field& k, unsigned n, std::mt19937_64& rng) {
  std::vector<FieldElement> c;
  for (unsigned i = 0; i < n; ++i) c.push_back(random_elem(k, rng));
  return FieldWitt(c);
}

// W_n(F_p) -> Z/p^n, x |-> sum_t p^t omega(x_t), with omega the p-adic Teichmuller character.
std::uint64_t to_integer(const FieldWitt& w) {
  const std::uint64_t p = w.p();
  const std::uint64_t mod = ipow(p, w.length());
  auto powmod = [&](std::uint64_t b, std::uint64_t e) {
    std::uint64_t r = 1 % mod;
    while (e) {
      if (e & 1) r = static_cast<std::uint64_t>(static_cast<unsigned __int128>(r) * b % mod);
      b = static_cast<std::uint64_t>(static_cast<unsigned __int128>(b) * b % mod);
      e >>= 1;
    }
    return r;
  };
  std::uint64_t acc = 0, pt = 1;
  for (unsigned t = 0; t < w.length(); ++t) {
    acc = (acc + pt * powmod(w[t].v, ipow(p, w.length() - 1))) % mod;
    pt *= p;
  }
  return acc;
}

std::vector<FieldWitt> all_witt(const Field& k, unsigned n) {
  std::vector<FieldWitt> out;
  std::uint64_t total = ipow(k.q(), n);
  for (std::uint64_t code = 0; code < total; ++code) {
    std::vector<FieldElement> c;
    std::uint64_t t = code;
    for (unsigned i = 0; i < n; ++i) {
      c.push_back(k.elem(static_cast<std::uint32_t>(t % k.q())));
      t /= k.q();
    }
    out.emplace_back(c);
  }
  return out;
}

}  // namespace

TEST(StructurePolys, FirstCoordinateIsPlainSum) {
  for (std::uint32_t p : {2u, 3u, 5u, 7u})
    for (unsigned n = 1; n <= 3; ++n) EXPECT_EQ(witt_structure_polys(p, n).add[0], X(0) + Y(0, n));
}

TEST(StructurePolys, LengthTwoAdditionAtTwo) {
  // w_1 = X0^2 + 2 X1; solve by hand.
  const IntPoly expected = X(1) + Y(1, 2) - X(0) * Y(0, 2);
  EXPECT_EQ(witt_structure_polys(2, 2).add[1], expected);
}

TEST(StructurePolys, LengthTwoAdditionAtThree) {
  const IntPoly expected = X(1) + Y(1, 2) - mono(0, 2, 2, 1) - mono(0, 1, 2, 2);
  EXPECT_EQ(witt_structure_polys(3, 2).add[1], expected);
}

TEST(StructurePolys, CarryPolynomialMatches) {
  for (std::uint32_t p : {2u, 3u, 5u, 7u}) {
    const auto& s = witt_structure_polys(p, 2);
    EXPECT_TRUE((s.add[1] - (X(1) + Y(1, 2) + carry_polynomial_s1(p, 2))).is_zero()) << "p=" << p;
  }
}

TEST(StructurePolys, CarryAtFiveHandExpanded) {
  // binom(5,k)/5 = 1, 2, 2, 1
  const IntPoly expected = -(mono(0, 1, 2, 4) + mono(0, 2, 2, 3) * mpz_class(2) + mono(0, 3, 2, 2) * mpz_class(2) +
                             mono(0, 4, 2, 1));
  EXPECT_EQ(carry_polynomial_s1(5, 2), expected);
}

TEST(StructurePolys, MultiplicationLengthTwoAtTwo) {
  // w_1(P) = (X0^2 + 2X1)(Y0^2 + 2Y1) => P_1 = X0^2 Y1 + X1 Y0^2 + 2 X1 Y1
  const auto& s = witt_structure_polys(2, 2);
  EXPECT_EQ(s.mul[0], X(0) * Y(0, 2));
  EXPECT_EQ(s.mul[1], mono(0, 2, 3, 1) + mono(1, 1, 2, 2) + X(1) * Y(1, 2) * mpz_class(2));
}

TEST(StructurePolys, NegationAtTwo) {
  // -(x0, x1) = (x0, x1 + x0^2) over Z for p = 2: w_1 = x0^2 + 2(x1 + x0^2) = -(x0^2 + 2 x1) with N_0 = -x0.
  const auto& s = witt_structure_polys(2, 2);
  EXPECT_EQ(s.neg[0], -X(0));
  EXPECT_EQ(s.neg[1], -X(1) - IntPoly::variable(0, 2));
}

TEST(StructurePolys, GhostIdentitiesHold) {
  for (std::uint32_t p : {2u, 3u, 5u})
    for (unsigned n = 1; n <= 4; ++n) {
      const auto check = verify_ghost_identities(witt_structure_polys(p, n));
      EXPECT_TRUE(check.ok) << "p=" << p << " n=" << n << ": " << check.failure;
    }
}

TEST(StructurePolys, MutatedCarryIsCaught) {
  for (std::uint32_t p : {2u, 3u}) {
    StructurePolynomials s = witt_structure_polys(p, 3);
    s.add[1] = X(1) + Y(1, 3) - carry_polynomial_s1(p, 3);
    const auto check = verify_ghost_identities(s);
    EXPECT_FALSE(check.ok);
    EXPECT_NE(check.failure.find("addition"), std::string::npos);
  }
}

TEST(StructurePolys, Isobaric) {
  for (std::uint32_t p : {2u, 3u, 5u})
    for (unsigned n = 1; n <= 4; ++n) {
      if (p == 5 && n == 4) continue;
      const auto& s = witt_structure_polys(p, n);
      for (unsigned i = 0; i < n; ++i) {
        EXPECT_TRUE(is_isobaric(s.add[i], p, n, ipow(p, i), false)) << p << " " << n << " " << i;
        EXPECT_TRUE(is_isobaric(s.mul[i], p, n, ipow(p, i), true)) << p << " " << n << " " << i;
        EXPECT_TRUE(is_isobaric(s.neg[i], p, n, ipow(p, i), false)) << p << " " << n << " " << i;
        for (const auto& [e, c] : s.add[i].terms())
          for (unsigned j = i + 1; j < n; ++j) EXPECT_EQ(e[j] + e[n + j], 0);
      }
    }
}

TEST(StructurePolys, PrettyPrint) {
  EXPECT_EQ(poly_to_string(witt_structure_polys(2, 2).add[1], 2), "Y1 + X1 - X0*Y0");
}

TEST(WittField, DoublingOneOverTwo) {
  const Field k = Field::create(2, 1);
  const FieldWitt one({k.one(), k.zero()});
  EXPECT_EQ(one + one, FieldWitt({k.zero(), k.one()}));
  EXPECT_EQ(one.structure_add(one), FieldWitt({k.zero(), k.one()}));
  EXPECT_EQ((one + one).digits(), (std::vector<FieldElement>{k.zero(), k.one()}));
}

TEST(WittField, OnePlusTwoOverThree) {
  const Field k = Field::create(3, 1);
  const FieldWitt a({k.one(), k.zero()}), b({k.scalar(2), k.zero()});
  EXPECT_TRUE((a + b).is_zero());
}

TEST(WittField, PrimeFieldMatchesIntegersModPn) {
  for (std::uint32_t p : {2u, 3u, 5u}) {
    const Field k = Field::create(p, 1);
    for (unsigned n = 1; n <= 3; ++n) {
      const auto all = all_witt(k, n);
      const std::uint64_t mod = ipow(p, n);
      std::vector<bool> seen(mod, false);
      for (const auto& x : all) seen[to_integer(x)] = true;
      EXPECT_EQ(std::count(seen.begin(), seen.end(), true), static_cast<long>(mod));
      for (const auto& x : all)
        for (const auto& y : all) {
          ASSERT_EQ(to_integer(x + y), (to_integer(x) + to_integer(y)) % mod);
          ASSERT_EQ(to_integer(x * y), to_integer(x) * to_integer(y) % mod);
        }
      for (const auto& x : all) ASSERT_EQ(to_integer(-x), (mod - to_integer(x)) % mod);
    }
  }
}

TEST(WittField, GhostLiftAgreesWithStructurePolynomials) {
  std::mt19937_64 rng(7);
  for (auto [p, m] : std::vector<std::pair<std::uint32_t, unsigned>>{{2, 1}, {2, 2}, {2, 3}, {3, 1}, {3, 2}, {5, 1}})
    for (unsigned n = 1; n <= 4; ++n) {
      const Field k = Field::create(p, m);
      for (int t = 0; t < 60; ++t) {
        const FieldWitt x = random_witt(k, n, rng), y = random_witt(k, n, rng);
        ASSERT_EQ(x + y, x.structure_add(y));
        ASSERT_EQ(x * y, x.structure_mul(y));
        ASSERT_EQ(-x, x.structure_neg());
      }
    }
}

template <class W, class Gen>
void check_ring_axioms(Gen gen, int samples) {
  for (int t = 0; t < samples; ++t) {
    const W a = gen(), b = gen(), c = gen();
    ASSERT_EQ((a + b) + c, a + (b + c));
    ASSERT_EQ(a + b, b + a);
    ASSERT_EQ((a * b) * c, a * (b * c));
    ASSERT_EQ(a * b, b * a);
    ASSERT_EQ(a * (b + c), a * b + a * c);
    ASSERT_TRUE((a - a).is_zero());
    ASSERT_EQ(a * W::one(a[0], a.length()), a);
  }
}

TEST(WittField, RingAxiomsOverSmallFields) {
  std::mt19937_64 rng(11);
  for (auto [p, m] : std::vector<std::pair<std::uint32_t, unsigned>>{{2, 1}, {2, 2}, {3, 2}}) {
    const Field k = Field::create(p, m);
    for (unsigned n = 2; n <= 3; ++n)
      check_ring_axioms<FieldWitt>([&] { return random_witt(k, n, rng); }, 1000);
  }
}

TEST(WittTestAlgebra, RingAxiomsOverTruncatedPolynomials) {
  const Field k = Field::create(2, 1);
  const auto R = TestAlgebra::truncated(k, 4);
  const auto elems = R->all_elements();
  std::mt19937_64 rng(13);
  auto gen = [&] {
    std::vector<AlgebraElement> c;
    for (int i = 0; i < 3; ++i) c.push_back(elems[rng() % elems.size()]);
    return WittVector<AlgebraElement>(c);
  };
  check_ring_axioms<WittVector<AlgebraElement>>(gen, 1000);
}

TEST(WittField, FrobeniusVerschiebungRelations) {
  const Field k = Field::create(2, 2);
  for (unsigned n = 1; n <= 3; ++n)
    for (const auto& u : all_witt(k, n)) {
      ASSERT_EQ(u.frobenius().verschiebung(), u.times_p());
      ASSERT_EQ(u.verschiebung().frobenius(), u.times_p());
      ASSERT_EQ(u.times_p(), u.times_int(2));
    }
}

TEST(WittField, FrobeniusIsRingMapAndProjectionFormula) {
  std::mt19937_64 rng(17);
  for (auto [p, m] : std::vector<std::pair<std::uint32_t, unsigned>>{{2, 2}, {3, 2}, {5, 1}}) {
    const Field k = Field::create(p, m);
    for (int t = 0; t < 300; ++t) {
      const FieldWitt u = random_witt(k, 3, rng), v = random_witt(k, 3, rng);
      ASSERT_EQ((u + v).frobenius(), u.frobenius() + v.frobenius());
      ASSERT_EQ((u * v).frobenius(), u.frobenius() * v.frobenius());
      ASSERT_EQ((u + v).verschiebung(), u.verschiebung() + v.verschiebung());
      ASSERT_EQ((u.frobenius() * v).verschiebung(), u * v.verschiebung());
      ASSERT_EQ(u.times_p(), u.times_int(p));
    }
  }
}

TEST(WittField, TeichmullerIsMultiplicative) {
  const Field k = Field::create(2, 2);
  const FieldElement g = k.gen();
  EXPECT_EQ(FieldWitt::teichmuller(g, 3) * FieldWitt::teichmuller(g, 3), FieldWitt::teichmuller(g * g, 3));
  const Field k9 = Field::create(3, 2);
  for (const auto& a : k9.elements())
    for (const auto& b : k9.elements()) {
      const FieldWitt ta = FieldWitt::teichmuller(a, 3), tb = FieldWitt::teichmuller(b, 3);
      ASSERT_EQ(ta.structure_mul(tb), FieldWitt::teichmuller(a * b, 3));
    }
  EXPECT_TRUE(FieldWitt::teichmuller(k.zero(), 3).is_zero());
  EXPECT_EQ(FieldWitt::teichmuller(k.one(), 3), FieldWitt::one(k.one(), 3));
}

TEST(WittField, DigitsRoundTripExhaustively) {
  const Field k = Field::create(2, 2);
  for (unsigned n = 1; n <= 3; ++n) {
    for (const auto& u : all_witt(k, n)) ASSERT_EQ(FieldWitt::assemble(u.digits()), u);
    for (const auto& u : all_witt(k, n)) {
      const auto d = u.coords();
      ASSERT_EQ(FieldWitt::assemble(d).digits(), d);
    }
  }
}

TEST(WittField, DigitsOfShiftedCoordinate) {
  const Field k = Field::create(2, 2);
  for (const auto& b : k.elements()) {
    const FieldWitt u({k.zero(), b});
    EXPECT_EQ(u.digits(), (std::vector<FieldElement>{k.zero(), b.frobenius(-1)}));
    EXPECT_EQ(FieldWitt::teichmuller(b.frobenius(-1), 2).times_p(), u);
  }
  const FieldElement a = k.gen();
  EXPECT_EQ(FieldWitt({a, k.zero(), k.zero()}).digits(), (std::vector<FieldElement>{a, k.zero(), k.zero()}));
}

TEST(WittField, PQuotientSplitsTeichmullerPart) {
  const Field k = Field::create(3, 2);
  std::mt19937_64 rng(19);
  for (int t = 0; t < 200; ++t) {
    const FieldWitt xi = random_witt(k, 3, rng);
    ASSERT_EQ(FieldWitt::teichmuller(xi[0], 3) + xi.p_quotient().times_p(), xi);
  }
}

TEST(WittField, TeichmullerScaleMatchesProduct) {
  std::mt19937_64 rng(23);
  const Field k = Field::create(2, 3);
  for (int t = 0; t < 200; ++t) {
    const FieldWitt x = random_witt(k, 4, rng);
    const FieldElement a = random_elem(k, rng);
    ASSERT_EQ(x.teichmuller_scale(a), FieldWitt::teichmuller(a, 4).structure_mul(x));
  }
}

TEST(WittField, MismatchedLengthsRejected) {
  const Field k = Field::create(2, 1);
  EXPECT_THROW(FieldWitt::zero(k.one(), 2) + FieldWitt::zero(k.one(), 3), std::invalid_argument);
  EXPECT_THROW(FieldWitt(std::vector<FieldElement>{}), std::invalid_argument);
}

TEST(TestAlgebraBasics, TruncationAndRewriting) {
  const Field k = Field::create(2, 1);
  const auto R = TestAlgebra::truncated(k, 4);
  const AlgebraElement x = R->var(0);
  EXPECT_EQ(R->dim(), 4u);
  EXPECT_FALSE((x * x * x).is_zero());
  EXPECT_TRUE((x * x * x * x).is_zero());
  EXPECT_TRUE((x + x).is_zero());

  // k[a, b]/(a^2, b^2 - a): b^3 = a b, b^4 = 0
  std::vector<TruncationRule> rules{{2, std::nullopt}, {2, std::make_pair(1u, std::vector<unsigned>{1, 0})}};
  TestAlgebra S(k, {"a", "b"}, rules);
  const AlgebraElement a = S.var(0), b = S.var(1);
  EXPECT_EQ(b * b, a);
  EXPECT_EQ(b * b * b, a * b);
  EXPECT_TRUE((b * b * b * b).is_zero());
  EXPECT_EQ(S.to_string(a * b + S.one()), "1 + a*b");
}

TEST(TestAlgebraBasics, RejectsNonTriangularRules) {
  const Field k = Field::create(3, 1);
  std::vector<TruncationRule> rules{{3, std::make_pair(1u, std::vector<unsigned>{0, 1})}, {3, std::nullopt}};
  EXPECT_THROW(TestAlgebra(k, {"a", "b"}, rules), std::invalid_argument);
}

TEST(TestAlgebraBasics, TensorSquareIndexing) {
  const Field k = Field::create(3, 1);
  std::vector<TruncationRule> rules{{3, std::nullopt}, {3, std::make_pair(2u, std::vector<unsigned>{1, 0})}};
  TestAlgebra A(k, {"t0", "t1"}, rules);
  const auto T = A.tensor_square();
  EXPECT_EQ(T->dim(), A.dim() * A.dim());
  for (std::uint32_t i = 0; i < A.dim(); ++i)
    for (std::uint32_t j = 0; j < A.dim(); ++j) {
      auto ei = A.exponents(i), ej = A.exponents(j);
      ei.insert(ei.end(), ej.begin(), ej.end());
      ASSERT_EQ(T->index(ei), i + A.dim() * j);
    }
  // (1 (x) t1)^3 = 2 (1 (x) t0)
  const AlgebraElement u = T->var(3);
  EXPECT_EQ(u * u * u, T->var(2).scale(2));
}
