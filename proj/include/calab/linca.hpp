#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "calab/ca1d.hpp"
#include "calab/symcore.hpp"

namespace calab {

/// The symbol set viewed as Z/sZ (identity encoding) or as GF(p^m), where a
/// field element c_0 + c_1 x + ... + c_{m-1} x^{m-1} is the symbol
/// sum c_i p^i (coefficient vector packed base p, top coefficient most
/// significant).
class RingSpec {
 public:
  static RingSpec modular(unsigned s);
  /// Uses the smallest monic irreducible of degree m (by packed value).
  static RingSpec field(unsigned p, unsigned m);
  /// modulus lists c_0..c_m with c_m = 1; checked irreducible.
  static RingSpec field(unsigned p, unsigned m, std::vector<unsigned> modulus);

  /// `mod:<s>` or `gf:<p>^<m>`
  static RingSpec parse(std::string_view text);

  unsigned size() const { return size_; }
  Alphabet alphabet() const { return Alphabet(size_); }
  bool is_field() const { return field_; }
  unsigned characteristic() const { return p_; }
  unsigned degree() const { return m_; }
  const std::vector<unsigned>& modulus() const { return modulus_; }

  Symbol add(Symbol a, Symbol b) const { return add_[a * size_ + b]; }
  Symbol mul(Symbol a, Symbol b) const { return mul_[a * size_ + b]; }
  Symbol neg(Symbol a) const { return neg_[a]; }
  Symbol sub(Symbol a, Symbol b) const { return add(a, neg(b)); }
  /// Multiplicative inverse; throws for non-units.
  Symbol inv(Symbol a) const;

  std::string to_string() const;

  friend bool operator==(const RingSpec& a, const RingSpec& b) {
    return a.size_ == b.size_ && a.field_ == b.field_ && a.modulus_ == b.modulus_;
  }

 private:
  RingSpec(unsigned size, bool field, unsigned p, unsigned m, std::vector<unsigned> modulus);

  unsigned size_;
  bool field_;
  unsigned p_;
  unsigned m_;
  std::vector<unsigned> modulus_;
  std::vector<Symbol> add_;
  std::vector<Symbol> mul_;
  std::vector<Symbol> neg_;
};

/// Monic irreducibility over GF(p) by trial division up to degree m/2.
bool is_irreducible(unsigned p, const std::vector<unsigned>& poly);

/// c_0 + c_1 x + ... + c_r x^r with trailing zeros trimmed; x stands for
/// the shift.
class ShiftPolynomial {
 public:
  ShiftPolynomial(RingSpec ring, std::vector<Symbol> coeffs);

  /// `ring=mod:<s>|gf:<p>^<m> coeffs=<c_0,...,c_r>`
  static ShiftPolynomial parse(std::string_view literal);

  const RingSpec& ring() const { return ring_; }
  const std::vector<Symbol>& coeffs() const { return coeffs_; }
  bool is_zero() const { return coeffs_.empty(); }
  /// 0 for the zero polynomial.
  unsigned degree() const { return coeffs_.empty() ? 0 : static_cast<unsigned>(coeffs_.size() - 1); }

  ShiftPolynomial operator+(const ShiftPolynomial& o) const;
  ShiftPolynomial operator*(const ShiftPolynomial& o) const;

  std::string to_string() const;

  friend bool operator==(const ShiftPolynomial&, const ShiftPolynomial&) = default;

 private:
  RingSpec ring_;
  std::vector<Symbol> coeffs_;
};

/// f(a_0..a_r) = sum c_i a_i.
BlockMap poly_to_blockmap(const ShiftPolynomial& poly);
std::optional<ShiftPolynomial> blockmap_to_poly(const BlockMap& map, const RingSpec& ring);
/// f(w) = sum_i w_i f(e^i) on every block.
bool is_linear(const BlockMap& map, const RingSpec& ring);
ShiftPolynomial compose_as_poly(const ShiftPolynomial& p, const ShiftPolynomial& q);

/// Pointwise sum of two block maps over the ring, at the larger radius.
BlockMap add_maps(const BlockMap& a, const BlockMap& b, const RingSpec& ring);

/// Rank of the given vectors over a field (row reduction).
std::size_t rank_over(const RingSpec& field, std::vector<std::vector<Symbol>> rows);

/// Smallest k <= k_max making the n windows a[i, i+k), i < n, linearly
/// independent over the field.
std::optional<std::size_t> window_independence(const SequenceSource& source, std::size_t n,
                                               std::size_t k_max, const RingSpec& field);

/// A linear map sending the first |target| windows to the target symbols;
/// free coefficients are 0.
BlockMap construct_linear_hitting(const SequenceSource& source, const Word& target,
                                  const RingSpec& field, std::size_t k_max = 64);

struct PLambdaOptions {
  unsigned s = 6;
  unsigned p = 0;  ///< 0 picks the smallest prime divisor
  std::size_t trials = 100;
  std::size_t inputs = 100;
  std::size_t input_len = 64;
  unsigned max_degree = 3;
  std::uint64_t seed = 1;
  /// Flip the table entry read first, turning a pass into a fail.
  bool sabotage = false;
};

struct PLambdaReport {
  bool pass = true;
  unsigned p = 0;
  std::size_t maps_checked = 0;
  std::optional<std::string> failing_map;  ///< block-map file text
  std::optional<Word> failing_input;
  std::optional<std::size_t> failing_position;
};

/// Random linear maps over Z/sZ send sequences with every symbol divisible
/// by p to sequences with the same property.
PLambdaReport p_lambda_witness(const PLambdaOptions& options);

}  // namespace calab
