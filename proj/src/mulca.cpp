#include "calab/mulca.hpp"

#include <map>
#include <random>
#include <set>

#include "text.hpp"

namespace calab {

TorusRational::TorusRational(BigInt num, BigInt den) : num_(std::move(num)), den_(std::move(den)) {
  if (den_ == 0) throw Error("zero denominator");
  if (den_ < 0) {
    num_ = -num_;
    den_ = -den_;
  }
  num_ %= den_;
  if (num_ < 0) num_ += den_;
  const BigInt g = boost::multiprecision::gcd(num_, den_);
  if (g > 1) {
    num_ /= g;
    den_ /= g;
  }
  if (num_ == 0) den_ = 1;
}

TorusRational TorusRational::parse(std::string_view text) {
  const auto parts = text::split(text::trim(text), '/');
  if (parts.size() != 2) throw Error("rational must be written num/den");
  try {
    return {BigInt(std::string(text::trim(parts[0]))), BigInt(std::string(text::trim(parts[1])))};
  } catch (const std::runtime_error&) {
    throw Error("invalid rational '" + std::string(text) + "'");
  }
}

TorusRational TorusRational::operator+(const TorusRational& o) const {
  return {num_ * o.den_ + o.num_ * den_, den_ * o.den_};
}

TorusRational TorusRational::operator-(const TorusRational& o) const {
  return {num_ * o.den_ - o.num_ * den_, den_ * o.den_};
}

std::pair<BigInt, BigInt> TorusRational::distance(const TorusRational& o) const {
  const TorusRational d = *this - o;
  if (2 * d.num_ <= d.den_) return {d.num_, d.den_};
  return {d.den_ - d.num_, d.den_};
}

std::string TorusRational::to_string() const { return num_.str() + "/" + den_.str(); }

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

std::vector<unsigned> prime_factors(unsigned n) {
  std::vector<unsigned> out;
  for (unsigned d = 2; d * d <= n; ++d) {
    if (n % d == 0) out.push_back(d);
    while (n % d == 0) n /= d;
  }
  if (n > 1) out.push_back(n);
  return out;
}

MulSpec::MulSpec(Alphabet alphabet, std::int64_t u) : alphabet_(alphabet), u_(u) {
  if (u == 0) return;
  std::uint64_t rest = u < 0 ? static_cast<std::uint64_t>(-(u + 1)) + 1 : static_cast<std::uint64_t>(u);
  for (unsigned p : prime_factors(alphabet.size())) {
    unsigned e = 0;
    while (rest % p == 0) {
      rest /= p;
      ++e;
    }
    if (e > 0) factors_.emplace_back(p, e);
  }
  if (rest != 1) {
    throw Error("invalid factorization: u=" + std::to_string(u) +
                " has a prime factor not dividing s=" + std::to_string(alphabet.size()));
  }
}

BlockMap mu_p(Alphabet alphabet, unsigned p) {
  const unsigned s = alphabet.size();
  if (!is_prime(p)) throw Error(std::to_string(p) + " is not prime");
  if (s % p != 0) throw Error(std::to_string(p) + " does not divide s=" + std::to_string(s));
  return BlockMap::from_rule(alphabet, 1, [p, s](std::span<const Symbol> a) {
    return static_cast<Symbol>((p * a[0] + p * a[1] / s) % s);
  });
}

BlockMap mu_const(Alphabet alphabet, ConstMap which) {
  switch (which) {
    case ConstMap::zero:
      return BlockMap::constant(alphabet, 0);
    case ConstMap::identity:
      return BlockMap::identity(alphabet);
    case ConstMap::mirror:
      return BlockMap::from_rule(alphabet, 0, [s = alphabet.size()](std::span<const Symbol> a) {
        return static_cast<Symbol>(s - 1 - a[0]);
      });
  }
  throw Error("unknown constant map");
}

BlockMap mu_u(const MulSpec& spec) {
  const Alphabet alphabet = spec.alphabet();
  if (spec.u() == 0) return mu_const(alphabet, ConstMap::zero);
  BlockMap result = BlockMap::identity(alphabet);
  for (const auto& [p, e] : spec.factors()) {
    const BlockMap step = mu_p(alphabet, p);
    for (unsigned i = 0; i < e; ++i) result = compose(step, result);
  }
  if (spec.negative()) result = compose(mu_const(alphabet, ConstMap::mirror), result);
  return normalize(result);
}

TorusRational evaluate(const EventuallyPeriodicSeq& seq) {
  const BigInt s = seq.alphabet().size();
  BigInt prefix_value = 0;
  for (Symbol x : seq.prefix()) prefix_value = prefix_value * s + x;
  BigInt cycle_value = 0;
  for (Symbol x : seq.cycle()) cycle_value = cycle_value * s + x;
  const BigInt sb = boost::multiprecision::pow(s, static_cast<unsigned>(seq.b()));
  const BigInt sc1 = boost::multiprecision::pow(s, static_cast<unsigned>(seq.c())) - 1;
  return {prefix_value * sc1 + cycle_value, sb * sc1};
}

std::vector<EventuallyPeriodicSeq> preimages(const TorusRational& x, Alphabet alphabet,
                                             bool include_improper) {
  const unsigned s = alphabet.size();
  if (x.is_zero()) {
    std::vector<EventuallyPeriodicSeq> out{EventuallyPeriodicSeq::constant(alphabet, 0)};
    if (include_improper) out.push_back(EventuallyPeriodicSeq::constant(alphabet, static_cast<Symbol>(s - 1)));
    return out;
  }
  // Long division; the first repeated remainder closes the cycle.
  std::map<BigInt, std::size_t> seen;
  std::vector<Symbol> digits;
  BigInt r = x.num();
  while (!seen.contains(r)) {
    seen.emplace(r, digits.size());
    r *= s;
    digits.push_back(static_cast<Symbol>(static_cast<unsigned>(r / x.den())));
    r %= x.den();
  }
  const std::size_t start = seen.at(r);
  EventuallyPeriodicSeq upper = canonicalize(EventuallyPeriodicSeq(
      alphabet, std::vector<Symbol>(digits.begin(), digits.begin() + start),
      std::vector<Symbol>(digits.begin() + start, digits.end())));
  if (upper.cycle() != std::vector<Symbol>{0}) return {upper};
  std::vector<Symbol> prefix = upper.prefix();
  --prefix.back();  // nonzero: canonical prefix cannot end in the cycle symbol
  EventuallyPeriodicSeq lower(alphabet, std::move(prefix), {static_cast<Symbol>(s - 1)});
  return {upper, canonicalize(lower)};
}

RepresentsReport represents_check(const BlockMap& map, std::int64_t u, std::size_t trials,
                                  std::uint64_t seed) {
  RepresentsReport report;
  report.trials = trials;
  std::mt19937_64 rng(seed);
  for (std::size_t t = 0; t < trials; ++t) {
    const auto a = random_eventually_periodic(map.alphabet(), rng);
    const TorusRational expected = evaluate(a).times(u);
    const TorusRational actual = evaluate(apply_seq(map, a));
    ++report.checked;
    if (expected != actual) {
      report.pass = false;
      report.counterexample = canonicalize(a);
      report.expected = expected;
      report.actual = actual;
      break;
    }
  }
  return report;
}

PowerPrimeReport power_prime_witness(const PowerPrimeOptions& options) {
  const unsigned p = options.p;
  const unsigned m = options.m;
  if (!is_prime(p)) throw Error(std::to_string(p) + " is not prime");
  if (m < 2) throw Error("m must be at least 2");
  unsigned s = 1;
  for (unsigned i = 0; i < m; ++i) {
    if (s > 256 / p) throw Error("p^m exceeds the largest alphabet");
    s *= p;
  }
  if (options.prefix_len <= options.steps + 1) throw Error("prefix exhausted");
  const Alphabet alphabet(s);
  const LazySequence source =
      options.source ? *options.source
                     : (p == 2 ? LazySequence::thue_morse(alphabet) : LazySequence::champernowne(alphabet, 2));
  if (source.alphabet() != alphabet) throw Error("source alphabet must be p^m");
  const BlockMap map = options.map ? *options.map : mu_p(alphabet, p);
  if (map.alphabet() != alphabet) throw Error("map alphabet must be p^m");

  Word current = source.take(options.prefix_len);
  for (Symbol x : current.symbols()) {
    if (x > 1) throw Error("source must be {0,1}-valued");
  }

  PowerPrimeReport report;
  auto digit_set = [](const Word& w) {
    std::set<Symbol> seen(w.symbols().begin(), w.symbols().end());
    return std::vector<Symbol>(seen.begin(), seen.end());
  };
  report.digits_per_step.push_back(digit_set(current));
  for (std::size_t k = 1; k <= options.steps; ++k) {
    if (current.size() < map.window()) throw Error("prefix exhausted");
    current = apply(map, current);
    report.steps = k;
    report.digits_per_step.push_back(digit_set(current));
    for (std::size_t i = 0; i < current.size(); ++i) {
      const Symbol x = current[i];
      if (x == p + 1) {
        report.pass = false;
        report.certificate = PowerPrimeCertificate{k, i, x, "digit p+1 appears"};
        return report;
      }
      if (m == 2) {
        const bool allowed = x == 0 || x == (k % 2 == 0 ? 1u : p);
        if (!allowed) {
          report.pass = false;
          report.certificate = PowerPrimeCertificate{
              k, i, x, k % 2 == 0 ? "even step left {0,1}" : "odd step left {0,p}"};
          return report;
        }
      }
    }
  }
  return report;
}

Word conjugacy_phi(unsigned p, unsigned m, const Word& prefix) {
  if (!is_prime(p)) throw Error(std::to_string(p) + " is not prime");
  if (m == 0) throw Error("m must be positive");
  if (prefix.alphabet().size() != p) throw Error("input must be over Lambda_p");
  if (prefix.size() % m != 0) throw Error("length not divisible by m");
  unsigned s = 1;
  for (unsigned i = 0; i < m; ++i) s *= p;
  std::vector<Symbol> out(prefix.size() / m);
  for (std::size_t k = 0; k < out.size(); ++k) {
    unsigned v = 0;
    for (unsigned j = 0; j < m; ++j) v = v * p + prefix[m * k + j];
    out[k] = static_cast<Symbol>(v);
  }
  return Word(Alphabet(s), std::move(out));
}

}  // namespace calab
