// Independent reference implementations used as test oracles. Nothing here
// calls into the library's algorithms; only plain types are shared.
#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace oracle {

using Sym = std::uint8_t;
using Big = boost::multiprecision::cpp_int;

inline Sym at(const std::vector<Sym>& pre, const std::vector<Sym>& cyc, std::size_t n) {
  return n < pre.size() ? pre[n] : cyc[(n - pre.size()) % cyc.size()];
}

inline std::vector<Sym> take(const std::vector<Sym>& pre, const std::vector<Sym>& cyc, std::size_t n) {
  std::vector<Sym> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = at(pre, cyc, i);
  return out;
}

/// Digits d_1 d_2 ... of num/den in base s by long division (upper expansion).
inline std::vector<Sym> digits(Big num, const Big& den, unsigned s, std::size_t n) {
  num %= den;
  if (num < 0) num += den;
  std::vector<Sym> out;
  for (std::size_t i = 0; i < n; ++i) {
    num *= s;
    out.push_back(static_cast<Sym>(static_cast<unsigned>(num / den)));
    num %= den;
  }
  return out;
}

/// V of an eventually periodic digit sequence, summed term by term as a
/// geometric series over the cycle: sum_{n<b} a_n s^{-n-1} + s^{-b} sum_j
/// cyc_j s^{-j-1} / (1 - s^{-c}). Returned unreduced as (num, den) in [0, 1].
inline std::pair<Big, Big> value(const std::vector<Sym>& pre, const std::vector<Sym>& cyc, unsigned s) {
  Big num = 0;
  Big den = 1;
  for (std::size_t i = 0; i < pre.size(); ++i) {
    num = num * s + pre[i];
    den *= s;
  }
  // num/den + (1/den) * C/(s^c - 1)
  Big c = 0;
  Big sc = 1;
  for (Sym x : cyc) {
    c = c * s + x;
    sc *= s;
  }
  return {num * (sc - 1) + c, den * (sc - 1)};
}

/// True when num1/den1 == num2/den2 mod 1.
inline bool same_mod1(const Big& n1, const Big& d1, const Big& n2, const Big& d2) {
  Big diff = n1 * d2 - n2 * d1;
  Big den = d1 * d2;
  diff %= den;
  return diff == 0;
}

/// Applies a local rule position by position (no tables).
inline std::vector<Sym> apply_rule(const std::function<Sym(const Sym*)>& rule, std::size_t window,
                                   const std::vector<Sym>& w) {
  std::vector<Sym> out;
  for (std::size_t k = 0; k + window <= w.size(); ++k) out.push_back(rule(&w[k]));
  return out;
}

/// mu_p straight from its defining formula.
inline Sym mu(unsigned p, unsigned s, Sym a0, Sym a1) { return static_cast<Sym>((p * a0 + p * a1 / s) % s); }

/// Brute-force (b, c): smallest b + c, then smallest c, with positions b..L-1
/// c-periodic and 3(b + c) <= L.
inline std::optional<std::pair<std::size_t, std::size_t>> period(const std::vector<Sym>& w) {
  const std::size_t L = w.size();
  for (std::size_t total = 1; 3 * total <= L; ++total) {
    for (std::size_t c = 1; c <= total; ++c) {
      const std::size_t b = total - c;
      bool ok = true;
      for (std::size_t i = b; i + c < L; ++i) ok = ok && w[i] == w[i + c];
      if (ok) return std::make_pair(b, c);
    }
  }
  return std::nullopt;
}

/// GF(4) multiplication through a discrete log table; symbols 0,1,2,3 are
/// 0, 1, w, w+1 and w^2 = w + 1.
inline Sym gf4_mul(Sym a, Sym b) {
  if (a == 0 || b == 0) return 0;
  static const int log[4] = {-1, 0, 1, 2};
  static const Sym exp[3] = {1, 2, 3};
  return exp[(log[a] + log[b]) % 3];
}

/// Linear independence over GF(q) (q prime) by trying every nonzero
/// coefficient vector.
inline bool independent_prime_field(const std::vector<std::vector<Sym>>& rows, unsigned q) {
  const std::size_t n = rows.size();
  if (n == 0) return true;
  const std::size_t k = rows.front().size();
  std::vector<unsigned> coeff(n, 0);
  while (true) {
    std::size_t i = 0;
    while (i < n && ++coeff[i] == q) coeff[i++] = 0;
    if (i == n) return true;  // wrapped around: every nonzero vector tried
    bool zero = true;
    for (std::size_t j = 0; j < k && zero; ++j) {
      unsigned sum = 0;
      for (std::size_t r = 0; r < n; ++r) sum += coeff[r] * rows[r][j];
      zero = sum % q == 0;
    }
    if (zero) return false;
  }
}

}  // namespace oracle
