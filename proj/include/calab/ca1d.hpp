#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "calab/symcore.hpp"

namespace calab {

/// Table index of a block over s symbols, first symbol most significant.
std::size_t block_index(std::span<const Symbol> block, unsigned s);

/// Inverse of block_index for blocks of the given length.
std::vector<Symbol> block_at(std::size_t index, std::size_t length, unsigned s);

/// Largest table a BlockMap may hold.
inline constexpr std::size_t kMaxTableSize = std::size_t{1} << 26;

/// A one-sided cellular automaton given by its local rule on r+1 symbols:
/// tau(a)_k = table[index(a_k ... a_{k+r})].
class BlockMap {
 public:
  BlockMap(Alphabet alphabet, unsigned radius, std::vector<Symbol> table);

  static BlockMap identity(Alphabet alphabet);
  /// sigma^k, radius k.
  static BlockMap shift(Alphabet alphabet, unsigned k = 1);
  static BlockMap constant(Alphabet alphabet, Symbol value);
  static BlockMap from_rule(Alphabet alphabet, unsigned radius,
                            const std::function<Symbol(std::span<const Symbol>)>& rule);

  Alphabet alphabet() const { return alphabet_; }
  unsigned radius() const { return radius_; }
  std::size_t window() const { return radius_ + 1; }
  const std::vector<Symbol>& table() const { return table_; }

  Symbol operator()(std::span<const Symbol> block) const {
    return table_[block_index(block, alphabet_.size())];
  }

  /// Same transformation with extra ignored trailing coordinates.
  BlockMap padded(unsigned radius) const;
  /// Copy with table[index] replaced.
  BlockMap with_entry(std::size_t index, Symbol value) const;

  /// Representation equality (same radius and table). Use equal() for
  /// equality of transformations.
  friend bool operator==(const BlockMap&, const BlockMap&) = default;

 private:
  Alphabet alphabet_;
  unsigned radius_;
  std::vector<Symbol> table_;
};

std::size_t table_size(unsigned s, unsigned radius);

/// `CA1 s=<s> r=<r>` line, then the table as space-separated integers.
std::string to_file(const BlockMap& map);
BlockMap parse_block_map(std::string_view text);

Word apply(const BlockMap& map, const Word& prefix);
EventuallyPeriodicSeq apply_seq(const BlockMap& map, const EventuallyPeriodicSeq& seq);

/// outer after inner, radius r_outer + r_inner.
BlockMap compose(const BlockMap& outer, const BlockMap& inner);
/// Trailing coordinates the rule ignores are dropped; leading ones never are.
BlockMap normalize(const BlockMap& map);
bool equal(const BlockMap& a, const BlockMap& b);

struct CommuteResult {
  bool commutes = true;
  /// Lexicographically smallest block of length r_a + r_b + 1 on which
  /// a∘b and b∘a disagree.
  std::optional<Word> counterexample;
  explicit operator bool() const { return commutes; }
};
CommuteResult commutes(const BlockMap& a, const BlockMap& b);

struct EnumerationOptions {
  std::uint64_t cap = enumeration_cap();
  unsigned threads = 0;  ///< 0 picks std::thread::hardware_concurrency()
};

/// Every map of radius <= max_radius commuting with all generators,
/// normalized, in candidate (table-lex) order.
std::vector<BlockMap> enumerate_commutant(std::span<const BlockMap> generators, Alphabet alphabet,
                                          unsigned max_radius, const EnumerationOptions& options = {});

/// Candidate count s^(s^(r+1)) as a decimal string.
std::string commutant_candidate_count(Alphabet alphabet, unsigned max_radius);

/// tau(a)_k = a_k + prod_{i=1..r}(a_{k+i} + delta_i) over GF(2).
struct ProductMap {
  BlockMap map;
  unsigned least_period;
};
ProductMap chr_product_map(const std::vector<unsigned>& deltas, unsigned radius);

/// Maps window a[i, i+k) of the source to target_i, everything else to 0.
/// k is the smallest window length separating the first |target| windows.
BlockMap construct_table_hitting(const SequenceSource& source, const Word& target,
                                 std::size_t k_max = 64);

/// Generators sharing one alphabet, explored up to closure_bound letters.
struct SemigroupPresentation {
  SemigroupPresentation(std::vector<std::pair<std::string, BlockMap>> generators,
                        unsigned closure_bound);

  Alphabet alphabet() const { return generators.front().second.alphabet(); }

  std::vector<std::pair<std::string, BlockMap>> generators;
  unsigned closure_bound;
};

}  // namespace calab
