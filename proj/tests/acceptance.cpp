// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Time limits are wall-clock and pinned below.

#include <array>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <string>
#include <sys/wait.h>

#include "calab/ca2d.hpp"
#include "calab/lab.hpp"
#include "calab/linca.hpp"
#include "calab/mulca.hpp"
#include "oracles.hpp"

using namespace calab;

namespace {

struct Verdict {
  bool pass = true;
  std::string note;

  void fail(const std::string& why) {
    if (pass) note = why;
    pass = false;
  }
};

using Clock = std::chrono::steady_clock;

bool run(int number, const std::string& title, double limit_seconds, const std::function<Verdict()>& body) {
  const auto start = Clock::now();
  Verdict v;
  try {
    v = body();
  } catch (const std::exception& e) {
    v.fail(std::string("threw: ") + e.what());
  }
  const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
  if (v.pass && seconds > limit_seconds) v.fail("took " + std::to_string(seconds) + " s");
  char timing[64];
  std::snprintf(timing, sizeof timing, "%.2fs/%.0fs", seconds, limit_seconds);
  std::cout << (v.pass ? "PASS" : "FAIL") << "  " << number << ". " << title << " [" << timing << "]";
  if (!v.note.empty()) std::cout << ": " << v.note;
  std::cout << std::endl;
  return v.pass;
}

struct CliRun {
  int code;
  std::string out;
};

CliRun cli(const std::string& args) {
  const std::string command = std::string(CALAB_CLI) + " " + args + " 2>&1";
  FILE* pipe = popen(command.c_str(), "r");
  if (!pipe) return {-1, ""};
  std::string out;
  std::array<char, 4096> buf{};
  while (const std::size_t n = std::fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

// 1. V(mu_p a) = p V(a) on random eventually periodic a.
Verdict representation() {
  Verdict v;
  const std::vector<std::pair<unsigned, unsigned>> cases = {{4, 2}, {6, 2}, {6, 3}, {10, 2},
                                                            {10, 5}, {12, 2}, {12, 3}};
  for (auto [s, p] : cases) {
    std::mt19937_64 rng(1000 + s * 10 + p);
    const BlockMap mu = mu_p(Alphabet(s), p);
    for (int t = 0; t < 500; ++t) {
      const auto a = random_eventually_periodic(Alphabet(s), rng);
      const auto image = apply_seq(mu, a);
      const auto [n0, d0] = oracle::value(a.prefix(), a.cycle(), s);
      const auto [n1, d1] = oracle::value(image.prefix(), image.cycle(), s);
      if (!oracle::same_mod1(n1, d1, n0 * p, d0)) {
        v.fail("s=" + std::to_string(s) + " p=" + std::to_string(p) + " a=" + a.to_string());
      }
      if (evaluate(image) != evaluate(a).times(p)) v.fail("evaluate disagrees with oracle on " + a.to_string());
    }
  }
  return v;
}

// 2. Products of the prime multiplications equal the shift.
Verdict products_are_shift() {
  Verdict v;
  for (auto [s, p, q] : {std::array<unsigned, 3>{6, 3, 2}, {10, 5, 2}}) {
    const Alphabet alphabet(s);
    const BlockMap product = compose(mu_p(alphabet, p), mu_p(alphabet, q));
    // exhaustive over all s^3 blocks, against the digit formula
    for (std::size_t i = 0; i < product.table().size(); ++i) {
      const auto b = block_at(i, 3, s);
      const Symbol inner0 = oracle::mu(q, s, b[0], b[1]);
      const Symbol inner1 = oracle::mu(q, s, b[1], b[2]);
      if (oracle::mu(p, s, inner0, inner1) != b[1] || product.table()[i] != b[1]) {
        v.fail("s=" + std::to_string(s) + " block " + std::to_string(i));
      }
    }
    if (!equal(product, BlockMap::shift(alphabet))) v.fail("s=" + std::to_string(s) + " not sigma");
  }
  return v;
}

// 3. sigma^{-k} mu_v inverts mu_u when u v = s^k.
Verdict inverse_law() {
  Verdict v;
  const std::vector<std::pair<unsigned, std::int64_t>> pairs = {{6, 2},  {6, 3},  {10, 2}, {10, 5},
                                                                {12, 2}, {12, 3}, {12, 4}, {12, 6}};
  for (auto [s, u] : pairs) {
    const Alphabet alphabet(s);
    const auto inv = mu_inverse_candidate(alphabet, u);
    std::int64_t sk = 1;
    for (unsigned i = 0; i < inv.k; ++i) sk *= s;
    if (sk != u * inv.v) v.fail("u v != s^k");
    const auto mu = embed_one_sided(mu_u(MulSpec(alphabet, u)));
    const auto left = normalize2(compose2(inv.map, mu));
    const auto right = normalize2(compose2(mu, inv.map));
    if (!is_identity2(left) || !is_identity2(right) || left.window() != 1 || right.window() != 1) {
      v.fail("s=" + std::to_string(s) + " u=" + std::to_string(u));
    }
  }
  return v;
}

// 4. Over s=2 at radius <= 3 the linear maps are their own commutant.
Verdict bounded_mc() {
  Verdict v;
  const RingSpec z2 = RingSpec::modular(2);
  std::vector<BlockMap> linear;
  std::set<std::vector<Symbol>> linear_tables;
  for (unsigned c = 0; c < 16; ++c) {
    std::vector<Symbol> coeffs{Symbol(c & 1), Symbol(c >> 1 & 1), Symbol(c >> 2 & 1), Symbol(c >> 3 & 1)};
    linear.push_back(poly_to_blockmap(ShiftPolynomial(z2, coeffs)));
    linear_tables.insert(linear.back().padded(3).table());
  }
  EnumerationOptions options;
  options.threads = 1;
  options.cap = std::uint64_t{1} << 16;
  const auto members = enumerate_commutant(linear, Alphabet(2), 3, options);
  std::set<std::vector<Symbol>> found;
  for (const auto& m : members) found.insert(m.padded(3).table());
  if (commutant_candidate_count(Alphabet(2), 3) != "65536") v.fail("candidate count");
  if (members.size() != 16) v.fail(std::to_string(members.size()) + " members");
  if (found != linear_tables) v.fail("members differ from the linear maps");
  return v;
}

// 5. The three non-ID witnesses pass on unmodified inputs.
Verdict witnesses() {
  Verdict v;
  const auto pm = power_prime_witness({});
  if (!pm.pass || pm.steps != 50) v.fail("power-prime");
  for (std::size_t k = 1; k < pm.digits_per_step.size(); ++k) {
    const std::set<Symbol> allowed = k % 2 == 0 ? std::set<Symbol>{0, 1} : std::set<Symbol>{0, 2};
    for (Symbol x : pm.digits_per_step[k]) {
      if (!allowed.contains(x)) v.fail("step " + std::to_string(k) + " digit " + std::to_string(x));
    }
  }
  PLambdaOptions pl;
  pl.s = 6;
  pl.trials = 100;
  pl.inputs = 100;
  const auto plr = p_lambda_witness(pl);
  if (!plr.pass || plr.p != 2 || plr.maps_checked != 100) v.fail("p-lambda");
  const auto chr = chr_invariant_check(chr_product_map({0, 0}, 2).map, 20);
  if (!chr.pass || chr.checked != 42) v.fail("product map invariants");
  return v;
}

// 6. Hitting constructions reach seeded random targets.
Verdict constructive_id() {
  Verdict v;
  std::mt19937_64 rng(6);
  const auto champ = LazySequence::champernowne(Alphabet(6));
  for (int t = 0; t < 100; ++t) {
    std::vector<Symbol> w(8);
    for (auto& x : w) x = static_cast<Symbol>(rng() % 6);
    const Word target(Alphabet(6), w);
    const BlockMap m = construct_table_hitting(SequenceSource(champ), target);
    if (apply(m, champ.take(8 + m.radius())) != target) v.fail("table target " + target.to_string());
  }
  const RingSpec gf2 = RingSpec::field(2, 1);
  const auto tm = LazySequence::thue_morse(Alphabet(2));
  for (int t = 0; t < 50; ++t) {
    std::vector<Symbol> w(6);
    for (auto& x : w) x = static_cast<Symbol>(rng() % 2);
    const Word target(Alphabet(2), w);
    const BlockMap m = construct_linear_hitting(SequenceSource(tm), target, gf2);
    if (!is_linear(m, gf2)) v.fail("not linear for " + target.to_string());
    if (apply(m, tm.take(6 + m.radius())) != target) v.fail("linear target " + target.to_string());
  }
  return v;
}

// 7. compose matches polynomial multiplication, and linear maps commute.
Verdict polynomial_isomorphism() {
  Verdict v;
  const std::vector<std::pair<RingSpec, unsigned>> rings = {{RingSpec::modular(2), 4},
                                                            {RingSpec::modular(4), 3},
                                                            {RingSpec::modular(6), 2},
                                                            {RingSpec::field(2, 2), 3},
                                                            {RingSpec::field(2, 3), 2}};
  std::mt19937_64 rng(7);
  for (const auto& [ring, max_degree] : rings) {
    auto random_poly = [&, &ring = ring, max_degree = max_degree] {
      std::vector<Symbol> c(1 + rng() % (max_degree + 1));
      for (auto& x : c) x = static_cast<Symbol>(rng() % ring.size());
      return ShiftPolynomial(ring, c);
    };
    for (int t = 0; t < 200; ++t) {
      const auto p = random_poly();
      const auto q = random_poly();
      const BlockMap a = poly_to_blockmap(p);
      const BlockMap b = poly_to_blockmap(q);
      if (!equal(compose(a, b), poly_to_blockmap(compose_as_poly(p, q)))) {
        v.fail(ring.to_string() + " " + p.to_string() + " * " + q.to_string());
      }
      if (!commutes(a, b).commutes) v.fail(ring.to_string() + " noncommuting pair");
    }
  }
  return v;
}

// 8. phi(sigma a) = mu_p(phi a) on 50-block prefixes.
Verdict conjugacy() {
  Verdict v;
  std::mt19937_64 rng(8);
  for (auto [p, m] : {std::pair{2u, 2u}, {2u, 3u}, {3u, 2u}}) {
    unsigned s = 1;
    for (unsigned i = 0; i < m; ++i) s *= p;
    for (int t = 0; t < 20; ++t) {
      std::vector<Symbol> a(m * 51);
      for (auto& x : a) x = static_cast<Symbol>(rng() % p);
      const Word w(Alphabet(p), a);
      const Word lhs = conjugacy_phi(p, m, w.slice(1, m * 50));
      const Word rhs = apply(mu_p(Alphabet(s), p), conjugacy_phi(p, m, w));
      if (lhs != rhs || lhs.size() != 50) v.fail("p=" + std::to_string(p) + " m=" + std::to_string(m));
    }
  }
  return v;
}

// 9. Radius-0 commutant of {mu_2, mu_3, mu_0} over s=6.
Verdict radius_zero_commutant() {
  Verdict v;
  ExperimentConfig config = ExperimentConfig::parse("experiment=commutant\ns=6\ngens=mu:2;mu:3;zero\nradius=0\n");
  const Outcome first = run_experiment(config, "json");
  const Outcome second = run_experiment(config, "json");
  if (first.text != second.text) v.fail("reports differ between runs");
  const auto report = commutant_campaign(config);
  if (report.candidates != "46656") v.fail("candidates " + report.candidates);
  auto contains = [&](const BlockMap& m) {
    for (const auto& member : report.members) {
      if (equal(member.map, m)) return true;
    }
    return false;
  };
  const Alphabet six(6);
  if (!contains(BlockMap::identity(six))) v.fail("identity missing");
  if (!contains(mu_const(six, ConstMap::mirror))) {
    v.fail("mirror missing: mirror(mu_0(x)) is the constant 5 while mu_0(mirror(x)) is 0, so the mirror "
           "does not commute with mu_0; members found: " + std::to_string(report.members.size()));
  }
  return v;
}

// 10. Each sabotaged witness exits 1 with a certificate.
Verdict negative_controls() {
  Verdict v;
  const std::vector<std::string> invocations = {
      "witness --sabotage power-prime", "witness --sabotage p-lambda", "witness --sabotage chr",
      "witness-pm --sabotage",          "witness-plambda --sabotage"};
  for (const auto& args : invocations) {
    const CliRun r = cli(args);
    if (r.code != 1) v.fail("'" + args + "' exited " + std::to_string(r.code));
    if (r.out.find("certificate") == std::string::npos) v.fail("'" + args + "' printed no certificate");
  }
  const CliRun clean = cli("witness");
  if (clean.code != 0) v.fail("unsabotaged witness exited " + std::to_string(clean.code));
  return v;
}

}  // namespace

int main() {
  bool all = true;
  all &= run(1, "representation exactness", 10, representation);
  all &= run(2, "mu_3 mu_2 and mu_5 mu_2 equal sigma", 1, products_are_shift);
  all &= run(3, "inverse law", 5, inverse_law);
  all &= run(4, "bounded-radius maximal commutativity", 60, bounded_mc);
  all &= run(5, "non-ID witnesses", 5, witnesses);
  all &= run(6, "constructive hitting", 10, constructive_id);
  all &= run(7, "polynomial isomorphism", 10, polynomial_isomorphism);
  all &= run(8, "conjugacy phi", 1, conjugacy);
  all &= run(9, "radius-0 commutant campaign", 120, radius_zero_commutant);
  all &= run(10, "negative controls", 30, negative_controls);
  return all ? 0 : 1;
}
