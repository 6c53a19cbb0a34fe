#include <gtest/gtest.h>

#include <sstream>

#include "rslab/langlands.hpp"
#include "rslab/sampling.hpp"

using namespace rslab;
using Q = Rational;
using PolyQ = EulerFactorPoly<Q>;

namespace {

LocalData<Q> local(u64 p, std::vector<Q> params, int m = 0) {
  return LocalData<Q>{p, std::move(params), m, Q(1), std::nullopt};
}

// Product of (1 - c X) over an explicit list, expanded independently.
PolyQ from_roots(const std::vector<Q>& cs) {
  std::vector<Q> c{Q(1)};
  for (const auto& r : cs) {
    std::vector<Q> next(c.size() + 1, Q(0));
    for (std::size_t i = 0; i < c.size(); ++i) {
      next[i] += c[i];
      next[i + 1] -= r * c[i];
    }
    c = next;
  }
  return PolyQ(c);
}

Q inv_pow(u64 p, int c) { return Q(1) / Q(mpz_class(ipow(p, c))); }

}  // namespace

TEST(LocalLInverse, Examples) {
  EXPECT_TRUE(local_L_inverse(local(2, {0, 0, 0}, 1)).is_one());
  EXPECT_EQ(local_L_inverse(local(2, {1, 0, 0}, 1)), (PolyQ{1, -1}));
  EXPECT_EQ(local_L_inverse(local(2, {1, 2, 3})), (PolyQ{1, -6, 11, -6}));
}

TEST(RsNaiveLocal, Examples) {
  EXPECT_EQ(rs_naive_local(local(3, {1, 0, 0}, 1), local(3, {1, 0}, 1)), (PolyQ{1, -1}));
  EXPECT_EQ(rs_naive_local(local(3, {1, 1, 1}), local(3, {1, 1})), from_roots({1, 1, 1, 1, 1, 1}));
  EXPECT_EQ(rs_naive_local(local(3, {1, 2, 3}), local(3, {1, 2})), from_roots({1, 2, 2, 4, 3, 6}));
  EXPECT_THROW(rs_naive_local(local(3, {1}), local(5, {1})), std::invalid_argument);
}

TEST(RsNaiveLocal, DegreeBound) {
  Rng rng(21);
  for (int t = 0; t < 20; ++t) {
    auto a = local(5, {random_nonzero_rational(rng, 5), random_nonzero_rational(rng, 5), Q(0)}, 1);
    auto b = local(5, {random_nonzero_rational(rng, 5), random_nonzero_rational(rng, 5)});
    EXPECT_LE(rs_naive_local(a, b).degree(), 6);
    EXPECT_EQ(rs_naive_local(a, b).constant(), Q(1));
  }
}

TEST(GlobalRep, Validation) {
  std::map<u64, LocalData<Q>> locals{{2, local(2, {1, 2})}};
  EXPECT_THROW(GlobalRep<Q>(2, 3, locals), std::invalid_argument);
  locals[3] = local(3, {1});
  EXPECT_THROW(GlobalRep<Q>(2, 3, locals), std::invalid_argument);
  locals[3] = local(3, {1, 0});
  EXPECT_THROW(GlobalRep<Q>(2, 3, locals), std::invalid_argument);
  locals[3] = local(3, {1, 0}, 1);
  EXPECT_NO_THROW(GlobalRep<Q>(2, 3, locals));
  EXPECT_THROW(GlobalRep<Q>(2, 3, locals).local(5), UncoveredPrime);
}

TEST(IsobaricSum, Examples) {
  const auto a = constant_rep<Q>({1}, 7);
  const auto b = constant_rep<Q>({2}, 7);
  const auto empty = GlobalRep<Q>::empty(7);
  const auto ae = isobaric_sum(a, empty);
  for (const auto& [p, d] : a.locals()) EXPECT_EQ(ae.local(p).params, d.params);
  const auto ab = isobaric_sum(a, b);
  EXPECT_EQ(ab.degree(), 2);
  EXPECT_EQ(ab.local(5).params, (std::vector<Q>{1, 2}));
  EXPECT_EQ(local_L_inverse(ab.local(5)), poly_mul(PolyQ{1, -1}, PolyQ{1, -2}));
}

TEST(IsobaricSum, BiAdditivity) {
  Rng rng(22);
  for (int t = 0; t < 30; ++t) {
    const auto a = random_unramified_rep<Q>(rng, 1 + t % 3, 13);
    const auto a2 = random_unramified_rep<Q>(rng, 1 + (t / 3) % 2, 13);
    const auto b = random_unramified_rep<Q>(rng, 2, 13);
    const auto sum = isobaric_sum(a, a2);
    for (u64 p : primes_up_to(13)) {
      EXPECT_EQ(rs_naive_local(sum.local(p), b.local(p)),
                poly_mul(rs_naive_local(a.local(p), b.local(p)), rs_naive_local(a2.local(p), b.local(p))));
      EXPECT_EQ(local_L_inverse(sum.local(p)), poly_mul(local_L_inverse(a.local(p)), local_L_inverse(a2.local(p))));
    }
  }
}

TEST(Jpss, SteinbergAnchor) {
  const u64 p = 5;
  EssSqIntSpec<Q> st3{1, 3, GL1Char<Q>::unramified(1), Q(1)};
  EssSqIntSpec<Q> st2{1, 2, GL1Char<Q>::unramified(1), Q(1)};
  const auto box = jpss_local(st3, st2, p);
  EXPECT_EQ(box, poly_mul(PolyQ::linear(inv_pow(p, 2)), PolyQ::linear(inv_pow(p, 3))));
  const auto times = rs_naive_local(ess_sq_int_local(st3, p), ess_sq_int_local(st2, p));
  EXPECT_EQ(times, PolyQ::linear(inv_pow(p, 3)));
  const auto P = lemma_aux_quotient(ess_sq_int_local(st3, p), ess_sq_int_local(st2, p), box);
  ASSERT_TRUE(P.divisible());
  EXPECT_EQ(*P.quotient, PolyQ::linear(inv_pow(p, 2)));
  EXPECT_TRUE(degenerate_check(ess_sq_int_local(st3, p), ess_sq_int_local(st2, p), box));
}

TEST(Jpss, RamifiedAndTrivialCases) {
  EssSqIntSpec<Q> ram{1, 2, GL1Char<Q>::ramified(1), Q(1)};
  EssSqIntSpec<Q> unr{1, 3, GL1Char<Q>::unramified(2), Q(1)};
  EXPECT_TRUE(jpss_local(ram, unr, 3).is_one());
  EssSqIntSpec<Q> triv{1, 1, GL1Char<Q>::unramified(1), Q(1)};
  EXPECT_EQ(jpss_local(triv, triv, 3), (PolyQ{1, -1}));
  EssSqIntSpec<Q> bad{2, 1, GL1Char<Q>::unramified(1), Q(1)};
  EXPECT_THROW(jpss_local(bad, triv, 3), UnsupportedShape);
}

TEST(Jpss, MutuallyInverseRamifiedCharactersGiveUnramifiedProduct) {
  EssSqIntSpec<Q> a{1, 2, GL1Char<Q>::ramified(1, 1, Q(3)), Q(1)};
  EssSqIntSpec<Q> b{1, 1, GL1Char<Q>::ramified(1, -1, Q(1, 3)), Q(1)};
  EXPECT_EQ(jpss_local(a, b, 7), PolyQ::linear(inv_pow(7, 1)));
}

TEST(LocalQuotient, SupportedGrid) {
  const u64 p = 3;
  const Q u(2, 3), w(-5, 2);
  for (int b = 1; b <= 4; ++b)
    for (int m = 1; m <= 4; ++m)
      for (int ep = 0; ep < 2; ++ep)
        for (int et = 0; et < 3; ++et) {
          EssSqIntSpec<Q> pi{1, b, ep ? GL1Char<Q>::ramified(1, 1, u) : GL1Char<Q>::unramified(u), Q(7, 4)};
          GL1Char<Q> eta_tau = et == 0 ? GL1Char<Q>::unramified(w)
                               : et == 1 ? GL1Char<Q>::ramified(2, -1, w)
                                         : GL1Char<Q>::ramified(1, 1, w);
          EssSqIntSpec<Q> tau{1, m, eta_tau, Q(-1, 3)};
          const auto box = jpss_local(pi, tau, p);
          const auto lp = ess_sq_int_local(pi, p), lt = ess_sq_int_local(tau, p);
          const auto P = lemma_aux_quotient(lp, lt, box);
          ASSERT_TRUE(P.divisible()) << "b=" << b << " m=" << m << " residual " << P.residual.str();
          EXPECT_EQ(poly_mul(*P.quotient, rs_naive_local(lp, lt)), box);
          EXPECT_TRUE(degenerate_check(lp, lt, box));
        }
}

TEST(LocalQuotient, UnramifiedPrincipalSeriesGivesOne) {
  Rng rng(23);
  for (int t = 0; t < 10; ++t) {
    const auto pi = local(7, {random_nonzero_rational(rng, 5), random_nonzero_rational(rng, 5), random_nonzero_rational(rng, 5)});
    const auto tau = local(7, {random_nonzero_rational(rng, 5), random_nonzero_rational(rng, 5)});
    const auto box = rs_naive_local(pi, tau);
    const auto P = lemma_aux_quotient(pi, tau, box);
    ASSERT_TRUE(P.divisible());
    EXPECT_TRUE(P.quotient->is_one());
  }
}

TEST(LocalQuotient, RamifiedCharacterAgainstUnramified) {
  const auto pi = local(7, {Q(2), Q(3), Q(5)});
  const auto tau = local(7, {Q(0)}, 1);
  const PolyQ box = from_roots({Q(1, 2)});
  const auto P = lemma_aux_quotient(pi, tau, box);
  ASSERT_TRUE(P.divisible());
  EXPECT_EQ(*P.quotient, box);
}

TEST(DegenerateCheck, Probes) {
  EXPECT_TRUE(degenerate_check(local(2, {0, 0, 0}, 2), local(2, {1, 2}), PolyQ{}));
  EXPECT_FALSE(degenerate_check(local(2, {1, 2, 3}), local(2, {1, 2}), PolyQ{}));
}

TEST(EpsilonGlobal, UnramifiedAndProducts) {
  const auto a = constant_rep<Q>({1, 2}, 11);
  auto e = epsilon_global(a);
  EXPECT_EQ(e.root_number, Q(1));
  EXPECT_EQ(e.conductor, 1);
  auto locals = a.locals();
  locals[3].conductor_exp = 2;
  locals[3].root_number = Q(-1);
  locals[3].params[1] = Q(0);
  const GlobalRep<Q> b(2, 11, locals);
  locals = a.locals();
  locals[5].conductor_exp = 1;
  locals[5].root_number = Q(-1);
  locals[5].params[0] = Q(0);
  const GlobalRep<Q> c(2, 11, locals);
  const auto eb = epsilon_global(b), ec = epsilon_global(c), ebc = epsilon_global(isobaric_sum(b, c));
  EXPECT_EQ(eb.conductor, 9);
  EXPECT_EQ(ebc.root_number, eb.root_number * ec.root_number);
  EXPECT_EQ(ebc.conductor, eb.conductor * ec.conductor);
}

TEST(Twist, ExamplesAndInverse) {
  Rng rng(24);
  const auto rep = random_unramified_rep<Q>(rng, 3, 17);
  const auto same = twist_unramified<Q>(rep, [](u64) { return Q(1); });
  for (const auto& [p, d] : rep.locals()) EXPECT_EQ(same.local(p).params, d.params);
  auto chi = [](u64 p) { return Q(static_cast<long>(p), 2); };
  const auto back = twist_unramified<Q>(twist_unramified<Q>(rep, chi), [&](u64 p) { return Q(1) / chi(p); });
  for (const auto& [p, d] : rep.locals()) EXPECT_EQ(back.local(p).params, d.params);
  EXPECT_THROW(twist_unramified<Q>(rep, [](u64) { return Q(0); }), std::invalid_argument);
}

TEST(Twist, RealExponentScalesByPrimePower) {
  const auto rep = constant_rep<Complex>({Complex(1.0), Complex(0.5, 0.5)}, 7);
  const auto tw = twist_unramified(rep, 0.7);
  for (u64 p : primes_up_to(7)) {
    const Complex f = std::pow(Complex(double(p)), Complex(0.0, -0.7));
    EXPECT_LT(std::abs(tw.local(p).params[1] - f * Complex(0.5, 0.5)), 1e-14);
  }
}

TEST(Contragredient, Examples) {
  EXPECT_EQ(contragredient_unramified(constant_rep<Q>({1, 1, 1}, 5)).local(3).params, (std::vector<Q>{1, 1, 1}));
  EXPECT_EQ(contragredient_unramified(constant_rep<Q>({2}, 5)).local(5).params, (std::vector<Q>{Q(1, 2)}));
  const Complex z = std::polar(1.0, 0.3);
  const auto c = contragredient_unramified(constant_rep<Complex>({z}, 5));
  EXPECT_LT(std::abs(c.local(2).params[0] - std::conj(z)), 1e-15);
  auto locals = constant_rep<Q>({2}, 5).locals();
  locals[3].conductor_exp = 1;
  EXPECT_THROW(contragredient_unramified(GlobalRep<Q>(1, 5, locals)), std::invalid_argument);
}

TEST(RepFile, ParsesRecordsAndDefaults) {
  std::istringstream in(
      "# comment\n"
      "pmax 11\n"
      "* 0 1 1 1 1\n"
      "2 0 1 1 2 3\n"
      "3 1 -1 1/2 -1 0\n");
  const auto rep = parse_rep<Q>(in);
  EXPECT_EQ(rep.degree(), 3);
  EXPECT_EQ(rep.pmax(), 11u);
  EXPECT_EQ(rep.local(2).params, (std::vector<Q>{1, 2, 3}));
  EXPECT_EQ(rep.local(3).params[0], Q(1, 2));
  EXPECT_EQ(rep.local(3).root_number, Q(-1));
  EXPECT_EQ(rep.local(11).params, (std::vector<Q>{1, 1, 1}));
}

TEST(RepFile, CentralValueToken) {
  std::istringstream in("pmax 7\n* 0 1 1 2\n5 1 1 1/5 0 w=-1/5\n");
  const auto rep = parse_rep<Q>(in);
  EXPECT_EQ(rep.degree(), 2);
  EXPECT_EQ(rep.local(5).params, (std::vector<Q>{Q(1, 5), Q(0)}));
  ASSERT_TRUE(rep.local(5).central_value.has_value());
  EXPECT_EQ(*rep.local(5).central_value, Q(-1, 5));
  EXPECT_FALSE(rep.local(7).central_value.has_value());
  std::istringstream misplaced("5 1 1 w=2 1 0\n");
  EXPECT_THROW(parse_rep<Q>(misplaced), std::invalid_argument);
}

TEST(RepFile, ComplexRecords) {
  std::istringstream in("2 0 1 0.5,0.5 1,0\n");
  const auto rep = parse_rep<Complex>(in);
  EXPECT_EQ(rep.local(2).params[0], Complex(0.5, 0.5));
}

TEST(RepFile, Errors) {
  std::istringstream bad1("4 0 1 1 1\n");
  EXPECT_THROW(parse_rep<Q>(bad1), std::invalid_argument);
  std::istringstream bad2("2 0 1 1 1\n3 0 1 1\n");
  EXPECT_THROW(parse_rep<Q>(bad2), std::invalid_argument);
  std::istringstream bad3("pmax 5\n2 0 1 1\n");
  EXPECT_THROW(parse_rep<Q>(bad3), std::invalid_argument);
  std::istringstream bad4("2 0 1 x\n");
  EXPECT_THROW(parse_rep<Q>(bad4), std::invalid_argument);
}
