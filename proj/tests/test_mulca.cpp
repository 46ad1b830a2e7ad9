#include <gtest/gtest.h>

#include <random>

#include "calab/mulca.hpp"
#include "oracles.hpp"

using namespace calab;

namespace {

std::vector<Symbol> syms(std::initializer_list<int> v) { return {v.begin(), v.end()}; }

// Checks V(value) against an oracle fraction, both reduced mod 1.
void expect_value(const TorusRational& got, const oracle::Big& num, const oracle::Big& den) {
  EXPECT_TRUE(oracle::same_mod1(got.num(), got.den(), num, den)) << got.to_string();
}

}  // namespace

TEST(Torus, ReducesModOne) {
  EXPECT_EQ(TorusRational(7, 4).to_string(), "3/4");
  EXPECT_EQ(TorusRational(-1, 3).to_string(), "2/3");
  EXPECT_EQ(TorusRational(4, 2).to_string(), "0/1");
  EXPECT_EQ(TorusRational::parse("6/8"), TorusRational(3, 4));
  EXPECT_THROW(TorusRational(1, 0), Error);
  EXPECT_THROW(TorusRational::parse("1"), Error);
}

TEST(Torus, DistanceWrapsAround) {
  const auto d = TorusRational(1, 10).distance(TorusRational(9, 10));
  EXPECT_EQ(d.first, 1);
  EXPECT_EQ(d.second, 5);
}

TEST(MuP, FourTwoDisplayedTable) {
  const BlockMap mu = mu_p(Alphabet(4), 2);
  auto f = [&](int a, int b) { return mu(syms({a, b})); };
  EXPECT_EQ(f(0, 0), 0);
  EXPECT_EQ(f(0, 1), 0);
  EXPECT_EQ(f(1, 0), 2);
  EXPECT_EQ(f(1, 1), 2);
  EXPECT_EQ(f(0, 2), 1);
  EXPECT_EQ(f(2, 0), 0);
  EXPECT_EQ(f(2, 2), 1);
}

TEST(MuP, SixThreeFormula) {
  EXPECT_EQ(mu_p(Alphabet(6), 3)(syms({5, 4})), 5);
  for (unsigned s : {4u, 6u, 10u, 12u}) {
    for (unsigned p : prime_factors(s)) {
      const BlockMap mu = mu_p(Alphabet(s), p);
      for (std::size_t i = 0; i < mu.table().size(); ++i) {
        EXPECT_EQ(mu.table()[i], oracle::mu(p, s, static_cast<Symbol>(i / s), static_cast<Symbol>(i % s)));
      }
    }
  }
}

TEST(MuP, RejectsBadPrimes) {
  EXPECT_THROW(mu_p(Alphabet(6), 5), Error);
  EXPECT_THROW(mu_p(Alphabet(8), 4), Error);
}

TEST(MuConst, Mirror) {
  const BlockMap mirror = mu_const(Alphabet(10), ConstMap::mirror);
  EXPECT_EQ(mirror(syms({0})), 9);
  EXPECT_EQ(mirror(syms({1})), 8);
  EXPECT_EQ(mu_const(Alphabet(2), ConstMap::mirror).table(), syms({1, 0}));
  const auto third = EventuallyPeriodicSeq(Alphabet(10), {}, syms({3}));
  EXPECT_EQ(evaluate(apply_seq(mirror, third)).to_string(), "2/3");
}

TEST(MuU, Composites) {
  const Alphabet ten(10);
  EXPECT_EQ(mu_u(MulSpec(ten, 1)), BlockMap::identity(ten));
  EXPECT_EQ(mu_u(MulSpec(ten, 4)).radius(), 2u);
  EXPECT_TRUE(equal(mu_u(MulSpec(ten, 4)), compose(mu_p(ten, 2), mu_p(ten, 2))));
  EXPECT_TRUE(equal(mu_u(MulSpec(ten, 10)), BlockMap::shift(ten)));
  EXPECT_EQ(mu_u(MulSpec(ten, 0)), BlockMap::constant(ten, 0));
  EXPECT_THROW(MulSpec(ten, 3), Error);
  EXPECT_EQ(MulSpec(Alphabet(12), -24).factors(), (std::vector<std::pair<unsigned, unsigned>>{{2, 3}, {3, 1}}));
}

TEST(MuU, RepresentsMultiplication) {
  for (std::int64_t u : {4, 8, 25, 20, -1, -2, -5, 100}) {
    const Alphabet ten(10);
    const BlockMap m = mu_u(MulSpec(ten, u));
    std::mt19937_64 rng(static_cast<std::uint64_t>(u + 1000));
    for (int t = 0; t < 100; ++t) {
      const auto a = random_eventually_periodic(ten, rng);
      const auto image = apply_seq(m, a);
      const auto [n, d] = oracle::value(a.prefix(), a.cycle(), 10);
      const auto [ni, di] = oracle::value(image.prefix(), image.cycle(), 10);
      EXPECT_TRUE(oracle::same_mod1(ni, di, u * n, d)) << "u=" << u << " a=" << a.to_string();
    }
  }
}

TEST(Evaluate, Examples) {
  EXPECT_EQ(evaluate(EventuallyPeriodicSeq::constant(Alphabet(7), 0)).to_string(), "0/1");
  EXPECT_EQ(evaluate(EventuallyPeriodicSeq(Alphabet(15), {}, syms({7}))).to_string(), "1/2");
  EXPECT_EQ(evaluate(EventuallyPeriodicSeq(Alphabet(10), {}, syms({3}))).to_string(), "1/3");
  EXPECT_EQ(evaluate(EventuallyPeriodicSeq(Alphabet(10), {}, syms({9}))).to_string(), "0/1");
}

TEST(Evaluate, DigitsOfValueReproduceSequence) {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 300; ++t) {
    const unsigned s = 2 + rng() % 11;
    const auto a = random_eventually_periodic(Alphabet(s), rng);
    const auto canon = canonicalize(a);
    if (canon.cycle() == std::vector<Symbol>{static_cast<Symbol>(s - 1)}) continue;  // lower expansion
    const TorusRational v = evaluate(a);
    EXPECT_EQ(oracle::digits(v.num(), v.den(), s, 30), a.take(30).vec());
  }
}

TEST(Preimages, Examples) {
  const Alphabet ten(10);
  EXPECT_EQ(preimages(TorusRational(), ten).size(), 1u);
  EXPECT_EQ(preimages(TorusRational(), ten, true).size(), 2u);

  const auto half = preimages(TorusRational(1, 2), ten);
  ASSERT_EQ(half.size(), 2u);
  EXPECT_EQ(half[0], EventuallyPeriodicSeq(ten, syms({5}), syms({0})));
  EXPECT_EQ(half[1], EventuallyPeriodicSeq(ten, syms({4}), syms({9})));

  const auto third = preimages(TorusRational(1, 3), ten);
  ASSERT_EQ(third.size(), 1u);
  EXPECT_EQ(third[0].cycle(), syms({3}));
}

TEST(Preimages, CountFollowsDenominatorPrimes) {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 200; ++t) {
    const unsigned s = 2 + rng() % 11;
    const long den = 1 + static_cast<long>(rng() % 60);
    const long num = static_cast<long>(rng() % den);
    const TorusRational x(num, den);
    bool terminating = true;
    BigInt d = x.den();
    for (unsigned p = 2; p <= 60; ++p) {
      if (is_prime(p) && d % p == 0 && s % p != 0) terminating = false;
    }
    const auto pre = preimages(x, Alphabet(s));
    EXPECT_EQ(pre.size(), (terminating && !x.is_zero()) ? 2u : 1u) << x.to_string() << " s=" << s;
    for (const auto& e : pre) EXPECT_EQ(evaluate(e), x);
  }
}

TEST(Represents, Mu2OverTen) {
  const auto r = represents_check(mu_p(Alphabet(10), 2), 2, 200, 1);
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.checked, 200u);
}

TEST(Represents, ShiftIsMultiplicationByS) {
  EXPECT_TRUE(represents_check(BlockMap::shift(Alphabet(6)), 6, 200, 2).pass);
}

TEST(Represents, IdentityFailsForTwo) {
  const auto r = represents_check(BlockMap::identity(Alphabet(10)), 2, 200, 3);
  EXPECT_FALSE(r.pass);
  ASSERT_TRUE(r.counterexample && r.expected && r.actual);
  EXPECT_NE(*r.expected, *r.actual);
  EXPECT_EQ(evaluate(*r.counterexample).times(2), *r.expected);
}

TEST(Represents, OneThirdCounterexample) {
  // The specific witness: cycle 3 has V = 1/3 and 2/3 after doubling.
  const EventuallyPeriodicSeq third(Alphabet(10), {}, syms({3}));
  EXPECT_NE(evaluate(apply_seq(BlockMap::identity(Alphabet(10)), third)), evaluate(third).times(2));
}

TEST(PowerPrime, FourTwoFiftySteps) {
  const auto r = power_prime_witness({});
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.steps, 50u);
  ASSERT_EQ(r.digits_per_step.size(), 51u);
  for (std::size_t k = 1; k <= 50; ++k) {
    for (Symbol x : r.digits_per_step[k]) {
      EXPECT_NE(x, 3);
      EXPECT_TRUE(x == 0 || x == (k % 2 == 0 ? 1 : 2)) << "step " << k;
    }
  }
}

TEST(PowerPrime, NineThreeThirtySteps) {
  PowerPrimeOptions o;
  o.p = 3;
  o.m = 2;
  o.steps = 30;
  const auto r = power_prime_witness(o);
  EXPECT_TRUE(r.pass);
  for (const auto& digits : r.digits_per_step) {
    for (Symbol x : digits) EXPECT_NE(x, 4);
  }
}

TEST(PowerPrime, PrefixExhausted) {
  PowerPrimeOptions o;
  o.steps = 10;
  o.prefix_len = 11;
  try {
    (void)power_prime_witness(o);
    FAIL();
  } catch (const Error& e) {
    EXPECT_STREQ(e.what(), "prefix exhausted");
  }
}

TEST(PowerPrime, SabotagedTableFailsWithCertificate) {
  const Alphabet four(4);
  PowerPrimeOptions o;
  // Thue-Morse starts 0 1; table index 1 is read first.
  o.map = mu_p(four, 2).with_entry(1, 3);
  const auto r = power_prime_witness(o);
  EXPECT_FALSE(r.pass);
  ASSERT_TRUE(r.certificate);
  EXPECT_EQ(r.certificate->step, 1u);
  EXPECT_EQ(r.certificate->position, 0u);
  EXPECT_EQ(r.certificate->digit, 3);
}

TEST(Phi, Examples) {
  const Alphabet two(2);
  EXPECT_EQ(conjugacy_phi(2, 2, Word::parse(two, "0,0,0,1,1,0,1,1")).to_string(), "0,1,2,3");
  EXPECT_EQ(conjugacy_phi(2, 3, Word::parse(two, "1,0,1")).to_string(), "5");
  EXPECT_EQ(conjugacy_phi(3, 2, Word(Alphabet(3), std::vector<Symbol>(6, 0))).to_string(), "0,0,0");
  try {
    (void)conjugacy_phi(2, 2, Word::parse(two, "0,1,1"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_STREQ(e.what(), "length not divisible by m");
  }
}

TEST(Phi, Intertwines) {
  // mu_p over base p is sigma, so phi(sigma a) = mu_p(phi a).
  std::mt19937_64 rng(6);
  for (auto [p, m] : {std::pair{2u, 2u}, {2u, 3u}, {3u, 2u}}) {
    unsigned s = 1;
    for (unsigned i = 0; i < m; ++i) s *= p;
    for (std::size_t k = 2; k <= 50; ++k) {
      std::vector<Symbol> a(m * k);
      for (auto& x : a) x = static_cast<Symbol>(rng() % p);
      const Word w(Alphabet(p), a);
      const Word lhs = conjugacy_phi(p, m, w.slice(1, m * (k - 1)));
      const Word rhs = apply(mu_p(Alphabet(s), p), conjugacy_phi(p, m, w));
      EXPECT_EQ(lhs, rhs) << "p=" << p << " m=" << m << " k=" << k;
      EXPECT_EQ(apply(mu_p(Alphabet(p), p), w).slice(0, m * (k - 1)), w.slice(1, m * (k - 1)));
    }
  }
}

TEST(FixedPoint, SevenBarFixedByThreeAndFive) {
  const Alphabet fifteen(15);
  const auto seven = EventuallyPeriodicSeq::constant(fifteen, 7);
  EXPECT_EQ(apply_seq(mu_p(fifteen, 3), seven), seven);
  EXPECT_EQ(apply_seq(mu_p(fifteen, 5), seven), seven);
}

TEST(Commutation, PrimeMultiplicationsCommute) {
  for (unsigned s : {6u, 10u, 12u, 30u}) {
    const auto primes = prime_factors(s);
    for (unsigned p : primes) {
      for (unsigned q : primes) EXPECT_TRUE(commutes(mu_p(Alphabet(s), p), mu_p(Alphabet(s), q)).commutes);
    }
  }
}
