#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "calab/common.hpp"

namespace calab {

/// The symbol set {0, ..., s-1}. Sizes above 256 are rejected because
/// symbols are stored as bytes.
class Alphabet {
 public:
  explicit Alphabet(unsigned size);

  unsigned size() const { return size_; }
  bool contains(unsigned symbol) const { return symbol < size_; }

  friend bool operator==(Alphabet, Alphabet) = default;

 private:
  unsigned size_;
};

/// A finite word over an alphabet.
class Word {
 public:
  explicit Word(Alphabet alphabet) : alphabet_(alphabet) {}
  Word(Alphabet alphabet, std::vector<Symbol> symbols);

  /// Parses comma-separated integers ("0,1,1"). The empty string is the
  /// empty word.
  static Word parse(Alphabet alphabet, std::string_view text);

  Alphabet alphabet() const { return alphabet_; }
  std::span<const Symbol> symbols() const { return symbols_; }
  const std::vector<Symbol>& vec() const { return symbols_; }
  std::size_t size() const { return symbols_.size(); }
  bool empty() const { return symbols_.empty(); }
  Symbol operator[](std::size_t i) const { return symbols_[i]; }

  Word slice(std::size_t pos, std::size_t len) const;
  std::string to_string() const;

  friend bool operator==(const Word& a, const Word& b) {
    return a.alphabet_ == b.alphabet_ && a.symbols_ == b.symbols_;
  }
  friend std::strong_ordering operator<=>(const Word& a, const Word& b) {
    return a.symbols_ <=> b.symbols_;
  }

 private:
  Alphabet alphabet_;
  std::vector<Symbol> symbols_;
};

/// prefix followed by cycle repeated forever. Any (prefix, cycle) pair is a
/// valid representation; canonicalize() yields the minimal one, and equality
/// compares the sequences, not the representations.
class EventuallyPeriodicSeq {
 public:
  EventuallyPeriodicSeq(Alphabet alphabet, std::vector<Symbol> prefix,
                        std::vector<Symbol> cycle);

  /// `s=<s> pre=<c,s,v> cyc=<c,s,v>`
  static EventuallyPeriodicSeq parse(std::string_view literal);
  static EventuallyPeriodicSeq constant(Alphabet alphabet, Symbol symbol) {
    return {alphabet, {}, {symbol}};
  }

  Alphabet alphabet() const { return alphabet_; }
  const std::vector<Symbol>& prefix() const { return prefix_; }
  const std::vector<Symbol>& cycle() const { return cycle_; }
  std::size_t b() const { return prefix_.size(); }
  std::size_t c() const { return cycle_.size(); }

  Symbol at(std::size_t n) const {
    return n < prefix_.size() ? prefix_[n] : cycle_[(n - prefix_.size()) % cycle_.size()];
  }
  Word take(std::size_t n) const;

  bool is_canonical() const;
  std::string to_string() const;

  /// Sequence equality.
  friend bool operator==(const EventuallyPeriodicSeq& a, const EventuallyPeriodicSeq& b);

 private:
  Alphabet alphabet_;
  std::vector<Symbol> prefix_;
  std::vector<Symbol> cycle_;
};

/// Minimal prefix length first, then minimal cycle length.
EventuallyPeriodicSeq canonicalize(const EventuallyPeriodicSeq& seq);

/// Canonical-form lexicographic order on (prefix, cycle).
bool canonical_less(const EventuallyPeriodicSeq& a, const EventuallyPeriodicSeq& b);

/// An index -> symbol rule. Built-ins are not eventually periodic.
class LazySequence {
 public:
  using Generator = std::function<Symbol(std::uint64_t)>;

  LazySequence(Alphabet alphabet, std::string name, Generator generator, bool rich);

  /// Concatenation of all base-`base` words in length-then-lex order,
  /// embedded in an alphabet of size s >= base.
  static LazySequence champernowne(Alphabet alphabet, unsigned base);
  static LazySequence champernowne(Alphabet alphabet) {
    return champernowne(alphabet, alphabet.size());
  }
  /// popcount(n) mod 2, embedded as {0,1} in any alphabet.
  static LazySequence thue_morse(Alphabet alphabet);
  /// Fixed point of a substitution starting at symbol 0. rules[a] is the
  /// image of a; rules[0] must start with 0 and have length >= 2.
  static LazySequence substitution(Alphabet alphabet, std::vector<std::vector<Symbol>> rules);

  /// `s=<s> gen=champernowne[:base]|thue-morse|subst:0->01,1->10`
  static LazySequence parse(std::string_view literal);

  Alphabet alphabet() const { return alphabet_; }
  const std::string& name() const { return name_; }
  bool rich() const { return rich_; }
  Symbol at(std::uint64_t n) const { return generator_(n); }
  Word take(std::size_t n) const;
  std::string to_string() const;

 private:
  Alphabet alphabet_;
  std::string name_;
  Generator generator_;
  bool rich_;
};

/// Any of the sequence representations, read by index. A finite Word has a
/// limit; reading past it throws "prefix too short".
class SequenceSource {
 public:
  SequenceSource(EventuallyPeriodicSeq seq) : source_(std::move(seq)) {}
  SequenceSource(LazySequence seq) : source_(std::move(seq)) {}
  SequenceSource(Word prefix) : source_(std::move(prefix)) {}

  Alphabet alphabet() const;
  Symbol at(std::size_t n) const;
  std::optional<std::size_t> limit() const;
  const EventuallyPeriodicSeq* eventually_periodic() const {
    return std::get_if<EventuallyPeriodicSeq>(&source_);
  }

 private:
  std::variant<EventuallyPeriodicSeq, LazySequence, Word> source_;
};

struct Period {
  std::size_t b = 0;
  std::size_t c = 1;
  friend bool operator==(const Period&, const Period&) = default;
};

/// Smallest (b, c), ordered by b+c then c, with positions b..L-1 c-periodic
/// and b + c <= L/3. Heuristic on finite prefixes.
std::optional<Period> detect_eventual_period(const Word& prefix);

/// Minimal k such that the b+c-1 windows a[i, i+k), i < b+c-1, are pairwise
/// distinct. Returns 1 when there are no windows.
std::size_t word_variety_length(const EventuallyPeriodicSeq& seq);

/// All sequences with a representation of prefix length b and cycle length c,
/// as canonical forms in canonical order.
std::vector<EventuallyPeriodicSeq> enumerate_B(std::size_t b, std::size_t c, Alphabet alphabet,
                                               std::uint64_t cap = enumeration_cap());

/// Left shift.
EventuallyPeriodicSeq shift_left(const EventuallyPeriodicSeq& seq);

}  // namespace calab
