#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "calab/ca1d.hpp"
#include "calab/symcore.hpp"

namespace calab {

/// A cellular automaton on the two-sided shift:
/// tau(a)_k = table[index(a_{k-memory} ... a_{k+anticipation})],
/// leftmost coordinate most significant.
class TwoSidedBlockMap {
 public:
  TwoSidedBlockMap(Alphabet alphabet, unsigned memory, unsigned anticipation, std::vector<Symbol> table);

  static TwoSidedBlockMap identity(Alphabet alphabet);
  /// sigma^k for any integer k; negative k reads to the left.
  static TwoSidedBlockMap shift(Alphabet alphabet, int k);

  Alphabet alphabet() const { return alphabet_; }
  unsigned memory() const { return memory_; }
  unsigned anticipation() const { return anticipation_; }
  std::size_t window() const { return memory_ + anticipation_ + 1; }
  const std::vector<Symbol>& table() const { return table_; }

  Symbol operator()(std::span<const Symbol> block) const {
    return table_[block_index(block, alphabet_.size())];
  }

  /// Same transformation read through a wider window.
  TwoSidedBlockMap padded(unsigned memory, unsigned anticipation) const;

  friend bool operator==(const TwoSidedBlockMap&, const TwoSidedBlockMap&) = default;

 private:
  Alphabet alphabet_;
  unsigned memory_;
  unsigned anticipation_;
  std::vector<Symbol> table_;
};

/// `CA2 s=<s> m=<memory> a=<anticipation>` line, then the table.
std::string to_file(const TwoSidedBlockMap& map);
TwoSidedBlockMap parse_two_sided_map(std::string_view text);

/// memory 0, anticipation r, same table.
TwoSidedBlockMap embed_one_sided(const BlockMap& map);
/// f(a_{-1}, a_0) = a_{-1}.
TwoSidedBlockMap sigma_inverse(Alphabet alphabet);

/// outer after inner; memories add, anticipations add.
TwoSidedBlockMap compose2(const TwoSidedBlockMap& outer, const TwoSidedBlockMap& inner);
/// Drops ignored coordinates at both ends.
TwoSidedBlockMap normalize2(const TwoSidedBlockMap& map);
bool equal2(const TwoSidedBlockMap& a, const TwoSidedBlockMap& b);
bool is_identity2(const TwoSidedBlockMap& map);

/// The one-sided map when the normal form has memory 0.
std::optional<BlockMap> sigma_plus(const TwoSidedBlockMap& map);
/// (k, sigma^k ∘ map as a one-sided map), k the normalized memory.
std::pair<unsigned, BlockMap> shift_into_plus(const TwoSidedBlockMap& map);

struct CommuteResult2 {
  bool commutes = true;
  /// First block (table order) on which the two compositions disagree.
  std::optional<Word> counterexample;
  explicit operator bool() const { return commutes; }
};
CommuteResult2 commutes2(const TwoSidedBlockMap& a, const TwoSidedBlockMap& b);

/// sigma^{-k} ∘ mu_v with u v = s^k and k minimal, for u whose primes all
/// divide s.
struct MulInverse {
  unsigned k;
  std::int64_t v;
  TwoSidedBlockMap map;
};
MulInverse mu_inverse_candidate(Alphabet alphabet, std::int64_t u);

/// ...LLL core RRR... with core[0] at index `offset`. Left cycle symbols
/// sit so that L.back() is at offset-1.
class BiSeq {
 public:
  BiSeq(Alphabet alphabet, std::vector<Symbol> left, std::vector<Symbol> core,
        std::vector<Symbol> right, std::int64_t offset = 0);

  /// `s=<s> left=<cycle> core=<word> right=<cycle> [at=<offset>]`
  static BiSeq parse(std::string_view literal);
  static BiSeq constant(Alphabet alphabet, Symbol symbol) { return {alphabet, {symbol}, {}, {symbol}}; }
  /// Single 1 at index i over 0s.
  static BiSeq unit(Alphabet alphabet, std::int64_t i) { return {alphabet, {0}, {1}, {0}, i}; }

  Alphabet alphabet() const { return alphabet_; }
  const std::vector<Symbol>& left() const { return left_; }
  const std::vector<Symbol>& core() const { return core_; }
  const std::vector<Symbol>& right() const { return right_; }
  std::int64_t offset() const { return offset_; }

  Symbol at(std::int64_t n) const;
  /// Symbols at indices [lo, hi).
  Word window(std::int64_t lo, std::int64_t hi) const;

  std::string to_string() const;

  /// Sequence equality.
  friend bool operator==(const BiSeq& a, const BiSeq& b);

 private:
  Alphabet alphabet_;
  std::vector<Symbol> left_;
  std::vector<Symbol> core_;
  std::vector<Symbol> right_;
  std::int64_t offset_;
};

/// Unique representation: primitive cycles, shortest core, right cycle
/// reaching as far left as it can; a fully periodic sequence has an empty
/// core, equal cycles and offset 0.
BiSeq canonicalize(const BiSeq& seq);

BiSeq apply2(const TwoSidedBlockMap& map, const BiSeq& seq);

/// A finite stretch of a two-sided sequence starting at index `origin`.
struct BiWindow {
  std::int64_t origin;
  Word symbols;
};
/// Image on the indices the window fully determines.
BiWindow apply_window(const TwoSidedBlockMap& map, const BiWindow& window);

}  // namespace calab
