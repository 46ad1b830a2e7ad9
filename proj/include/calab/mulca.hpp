#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "calab/ca1d.hpp"
#include "calab/symcore.hpp"

namespace calab {

using BigInt = boost::multiprecision::cpp_int;

/// A rational point of R/Z, kept reduced with 0 <= num < den.
class TorusRational {
 public:
  TorusRational() : num_(0), den_(1) {}
  /// Any integer fraction; reduced mod 1.
  TorusRational(BigInt num, BigInt den);

  /// `num/den`
  static TorusRational parse(std::string_view text);

  const BigInt& num() const { return num_; }
  const BigInt& den() const { return den_; }
  bool is_zero() const { return num_ == 0; }

  TorusRational times(const BigInt& u) const { return {num_ * u, den_}; }
  TorusRational operator+(const TorusRational& o) const;
  TorusRational operator-(const TorusRational& o) const;
  TorusRational operator-() const { return {-num_, den_}; }

  /// Distance on the circle, as a fraction in [0, 1/2].
  std::pair<BigInt, BigInt> distance(const TorusRational& o) const;

  std::string to_string() const;

  friend bool operator==(const TorusRational&, const TorusRational&) = default;

 private:
  BigInt num_;
  BigInt den_;
};

bool is_prime(std::uint64_t n);
std::vector<unsigned> prime_factors(unsigned n);

/// u = ±prod p_i^{e_i} with every p_i dividing s, or u = 0.
class MulSpec {
 public:
  MulSpec(Alphabet alphabet, std::int64_t u);

  Alphabet alphabet() const { return alphabet_; }
  std::int64_t u() const { return u_; }
  bool negative() const { return u_ < 0; }
  /// (p_i, e_i) in increasing p.
  const std::vector<std::pair<unsigned, unsigned>>& factors() const { return factors_; }

 private:
  Alphabet alphabet_;
  std::int64_t u_;
  std::vector<std::pair<unsigned, unsigned>> factors_;
};

/// mu_p(a)_k = (p a_k + floor(p a_{k+1} / s)) mod s.
BlockMap mu_p(Alphabet alphabet, unsigned p);

enum class ConstMap { zero, identity, mirror };
/// Radius-0 maps; mirror is a -> s-1-a.
BlockMap mu_const(Alphabet alphabet, ConstMap which);

/// mu_{-1}^{e_0} ∘ mu_{p_1}^{e_1} ∘ ... , normalized. u = 0 gives the zero map.
BlockMap mu_u(const MulSpec& spec);

/// V(a) = sum a_n / s^{n+1}, reduced mod 1.
TorusRational evaluate(const EventuallyPeriodicSeq& seq);

/// Base-s expansions of x. Two (upper first, then lower) exactly when x != 0
/// and every prime of the denominator divides s. x = 0 yields only 0-bar
/// unless include_improper adds (s-1)-bar.
std::vector<EventuallyPeriodicSeq> preimages(const TorusRational& x, Alphabet alphabet,
                                             bool include_improper = false);

/// Prefix length uniform in [0,6], cycle length uniform in [1,6], symbols
/// uniform.
template <typename Rng>
EventuallyPeriodicSeq random_eventually_periodic(Alphabet alphabet, Rng& rng);

struct RepresentsReport {
  bool pass = true;
  std::size_t trials = 0;
  std::size_t checked = 0;
  std::optional<EventuallyPeriodicSeq> counterexample;
  std::optional<TorusRational> expected;
  std::optional<TorusRational> actual;
};

/// Checks V(tau(a)) = u V(a) mod 1 on seeded random eventually periodic a.
RepresentsReport represents_check(const BlockMap& map, std::int64_t u, std::size_t trials,
                                  std::uint64_t seed);

struct PowerPrimeCertificate {
  std::size_t step = 0;
  std::size_t position = 0;
  Symbol digit = 0;
  std::string reason;
};

struct PowerPrimeOptions {
  unsigned p = 2;
  unsigned m = 2;
  std::size_t steps = 50;
  std::size_t prefix_len = 2000;
  /// {0,1}-valued source; default Thue-Morse for p=2, binary Champernowne
  /// otherwise.
  std::optional<LazySequence> source;
  /// Replaces mu_p (used to sabotage the table).
  std::optional<BlockMap> map;
};

struct PowerPrimeReport {
  bool pass = true;
  std::size_t steps = 0;
  /// Digits seen in each image, index 0 being the source.
  std::vector<std::vector<Symbol>> digits_per_step;
  std::optional<PowerPrimeCertificate> certificate;
};

/// Iterates mu_p over Lambda_{p^m} on a {0,1}-valued prefix and verifies the
/// digit p+1 never appears; for m = 2 also that even steps use {0,1} and odd
/// steps {0,p}.
PowerPrimeReport power_prime_witness(const PowerPrimeOptions& options);

/// phi(a)_k = sum_j p^{m-1-j} a_{mk+j}: reads base-p m-words as base-p^m
/// symbols.
Word conjugacy_phi(unsigned p, unsigned m, const Word& prefix);

// ---------------------------------------------------------------------------

template <typename Rng>
EventuallyPeriodicSeq random_eventually_periodic(Alphabet alphabet, Rng& rng) {
  auto uniform = [&rng](std::uint64_t lo, std::uint64_t hi) {
    return lo + static_cast<std::uint64_t>(rng() % (hi - lo + 1));
  };
  std::vector<Symbol> prefix(uniform(0, 6));
  std::vector<Symbol> cycle(uniform(1, 6));
  for (auto& x : prefix) x = static_cast<Symbol>(uniform(0, alphabet.size() - 1));
  for (auto& x : cycle) x = static_cast<Symbol>(uniform(0, alphabet.size() - 1));
  return {alphabet, std::move(prefix), std::move(cycle)};
}

}  // namespace calab
