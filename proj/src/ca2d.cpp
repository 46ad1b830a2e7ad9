#include "calab/ca2d.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>

#include "calab/mulca.hpp"
#include "text.hpp"

namespace calab {

namespace {

BlockMap as_one_sided(const TwoSidedBlockMap& map) {
  return {map.alphabet(), static_cast<unsigned>(map.window() - 1), map.table()};
}

std::size_t power(unsigned s, std::size_t e) {
  std::size_t out = 1;
  for (std::size_t i = 0; i < e; ++i) out *= s;
  return out;
}

void rotate_right(std::vector<Symbol>& v) { std::rotate(v.rbegin(), v.rbegin() + 1, v.rend()); }
void rotate_left(std::vector<Symbol>& v) { std::rotate(v.begin(), v.begin() + 1, v.end()); }

std::vector<Symbol> primitive_root(const std::vector<Symbol>& cycle) {
  const std::size_t n = cycle.size();
  for (std::size_t d = 1; d < n; ++d) {
    if (n % d != 0) continue;
    bool ok = true;
    for (std::size_t i = d; i < n && ok; ++i) ok = cycle[i] == cycle[i - d];
    if (ok) return {cycle.begin(), cycle.begin() + static_cast<std::ptrdiff_t>(d)};
  }
  return cycle;
}

std::int64_t floor_mod(std::int64_t a, std::int64_t n) {
  const std::int64_t r = a % n;
  return r < 0 ? r + n : r;
}

}  // namespace

TwoSidedBlockMap::TwoSidedBlockMap(Alphabet alphabet, unsigned memory, unsigned anticipation,
                                   std::vector<Symbol> table)
    : alphabet_(alphabet), memory_(memory), anticipation_(anticipation), table_(std::move(table)) {
  if (table_.size() != table_size(alphabet_.size(), memory_ + anticipation_)) {
    throw Error("table must have s^(m+a+1) entries");
  }
  for (Symbol x : table_) {
    if (!alphabet_.contains(x)) throw Error("table entry out of range");
  }
}

TwoSidedBlockMap TwoSidedBlockMap::identity(Alphabet alphabet) { return embed_one_sided(BlockMap::identity(alphabet)); }

TwoSidedBlockMap TwoSidedBlockMap::shift(Alphabet alphabet, int k) {
  if (k >= 0) return embed_one_sided(BlockMap::shift(alphabet, static_cast<unsigned>(k)));
  const unsigned back = static_cast<unsigned>(-k);
  const std::size_t n = table_size(alphabet.size(), back);
  const std::size_t tail = n / alphabet.size();  // s^back
  std::vector<Symbol> table(n);
  for (std::size_t i = 0; i < n; ++i) table[i] = static_cast<Symbol>(i / tail);
  return {alphabet, back, 0, std::move(table)};
}

TwoSidedBlockMap TwoSidedBlockMap::padded(unsigned memory, unsigned anticipation) const {
  if (memory < memory_ || anticipation < anticipation_) throw Error("cannot pad to a smaller window");
  const unsigned s = alphabet_.size();
  const std::size_t n = table_size(s, memory + anticipation);
  const std::size_t low = power(s, anticipation - anticipation_);
  std::vector<Symbol> table(n);
  for (std::size_t i = 0; i < n; ++i) table[i] = table_[(i / low) % table_.size()];
  return {alphabet_, memory, anticipation, std::move(table)};
}

std::string to_file(const TwoSidedBlockMap& map) {
  return "CA2 s=" + std::to_string(map.alphabet().size()) + " m=" + std::to_string(map.memory()) +
         " a=" + std::to_string(map.anticipation()) + "\n" + text::join_symbols(map.table(), ' ') + "\n";
}

TwoSidedBlockMap parse_two_sided_map(std::string_view file) {
  const auto newline = file.find('\n');
  if (newline == std::string_view::npos) throw Error("block map file needs two lines");
  const auto header = text::split_ws(file.substr(0, newline));
  if (header.size() != 4 || header[0] != "CA2" || !header[1].starts_with("s=") || !header[2].starts_with("m=") ||
      !header[3].starts_with("a=")) {
    throw Error("two-sided map header must be 'CA2 s=<s> m=<m> a=<a>'");
  }
  const Alphabet alphabet(text::parse_int<unsigned>(header[1].substr(2), "alphabet size"));
  const auto memory = text::parse_int<unsigned>(header[2].substr(2), "memory");
  const auto anticipation = text::parse_int<unsigned>(header[3].substr(2), "anticipation");
  std::vector<Symbol> table;
  for (auto token : text::split_ws(file.substr(newline + 1))) {
    const auto v = text::parse_int<unsigned>(token, "table entry");
    if (!alphabet.contains(v)) throw Error("block map entry out of range");
    table.push_back(static_cast<Symbol>(v));
  }
  return {alphabet, memory, anticipation, std::move(table)};
}

TwoSidedBlockMap embed_one_sided(const BlockMap& map) {
  return {map.alphabet(), 0, map.radius(), map.table()};
}

TwoSidedBlockMap sigma_inverse(Alphabet alphabet) { return TwoSidedBlockMap::shift(alphabet, -1); }

TwoSidedBlockMap compose2(const TwoSidedBlockMap& outer, const TwoSidedBlockMap& inner) {
  if (outer.alphabet() != inner.alphabet()) throw Error("alphabet mismatch");
  // Same substitution as the one-sided case; only the bookkeeping of
  // where the window sits differs.
  BlockMap composed = compose(as_one_sided(outer), as_one_sided(inner));
  return {outer.alphabet(), outer.memory() + inner.memory(), outer.anticipation() + inner.anticipation(),
          composed.table()};
}

TwoSidedBlockMap normalize2(const TwoSidedBlockMap& map) {
  const unsigned s = map.alphabet().size();
  unsigned memory = map.memory();
  unsigned anticipation = map.anticipation();
  std::vector<Symbol> table = map.table();
  while (memory > 0) {
    const std::size_t rest = table.size() / s;
    bool ignored = true;
    for (std::size_t i = rest; i < table.size() && ignored; ++i) ignored = table[i] == table[i % rest];
    if (!ignored) break;
    table.resize(rest);
    --memory;
  }
  while (anticipation > 0) {
    bool ignored = true;
    for (std::size_t i = 0; i < table.size() && ignored; ++i) ignored = table[i] == table[i - i % s];
    if (!ignored) break;
    std::vector<Symbol> trimmed(table.size() / s);
    for (std::size_t j = 0; j < trimmed.size(); ++j) trimmed[j] = table[j * s];
    table = std::move(trimmed);
    --anticipation;
  }
  return {map.alphabet(), memory, anticipation, std::move(table)};
}

bool equal2(const TwoSidedBlockMap& a, const TwoSidedBlockMap& b) {
  if (a.alphabet() != b.alphabet()) throw Error("alphabet mismatch");
  const unsigned m = std::max(a.memory(), b.memory());
  const unsigned n = std::max(a.anticipation(), b.anticipation());
  return a.padded(m, n).table() == b.padded(m, n).table();
}

bool is_identity2(const TwoSidedBlockMap& map) { return equal2(map, TwoSidedBlockMap::identity(map.alphabet())); }

std::optional<BlockMap> sigma_plus(const TwoSidedBlockMap& map) {
  const TwoSidedBlockMap n = normalize2(map);
  if (n.memory() != 0) return std::nullopt;
  return BlockMap(n.alphabet(), n.anticipation(), n.table());
}

std::pair<unsigned, BlockMap> shift_into_plus(const TwoSidedBlockMap& map) {
  const TwoSidedBlockMap n = normalize2(map);
  const unsigned k = n.memory();
  const auto plus = sigma_plus(compose2(TwoSidedBlockMap::shift(n.alphabet(), static_cast<int>(k)), n));
  return {k, *plus};
}

CommuteResult2 commutes2(const TwoSidedBlockMap& a, const TwoSidedBlockMap& b) {
  if (a.alphabet() != b.alphabet()) throw Error("alphabet mismatch");
  const TwoSidedBlockMap ab = compose2(a, b);
  const TwoSidedBlockMap ba = compose2(b, a);
  CommuteResult2 result;
  for (std::size_t i = 0; i < ab.table().size(); ++i) {
    if (ab.table()[i] != ba.table()[i]) {
      result.commutes = false;
      result.counterexample = Word(a.alphabet(), block_at(i, ab.window(), a.alphabet().size()));
      break;
    }
  }
  return result;
}

MulInverse mu_inverse_candidate(Alphabet alphabet, std::int64_t u) {
  if (u == 0) throw Error("mu_0 is not invertible");
  const MulSpec spec(alphabet, u);  // rejects primes not dividing s
  const std::uint64_t magnitude = static_cast<std::uint64_t>(u < 0 ? -u : u);
  const unsigned s = alphabet.size();
  unsigned k = 0;
  std::uint64_t sk = 1;
  while (sk % magnitude != 0) {
    sk *= s;
    ++k;
  }
  const std::int64_t v = static_cast<std::int64_t>(sk / magnitude) * (u < 0 ? -1 : 1);
  const TwoSidedBlockMap mu_v = embed_one_sided(mu_u(MulSpec(alphabet, v)));
  return {k, v, compose2(TwoSidedBlockMap::shift(alphabet, -static_cast<int>(k)), mu_v)};
}

BiSeq::BiSeq(Alphabet alphabet, std::vector<Symbol> left, std::vector<Symbol> core, std::vector<Symbol> right,
             std::int64_t offset)
    : alphabet_(alphabet), left_(std::move(left)), core_(std::move(core)), right_(std::move(right)), offset_(offset) {
  if (left_.empty() || right_.empty()) throw Error("cycles must be nonempty");
  for (const auto* part : {&left_, &core_, &right_}) {
    for (Symbol x : *part) {
      if (!alphabet_.contains(x)) throw Error("symbol out of range");
    }
  }
}

BiSeq BiSeq::parse(std::string_view literal) {
  const auto fields = text::parse_fields(literal);
  const Alphabet alphabet(text::parse_int<unsigned>(text::require(fields, "s"), "alphabet size"));
  auto list = [&](std::string_view key) {
    std::vector<Symbol> out;
    for (unsigned v : text::parse_uint_list(text::require(fields, key), "symbol")) {
      if (!alphabet.contains(v)) throw Error("symbol out of range");
      out.push_back(static_cast<Symbol>(v));
    }
    return out;
  };
  std::int64_t offset = 0;
  if (const auto it = fields.find("at"); it != fields.end()) offset = text::parse_int<std::int64_t>(it->second, "offset");
  const auto core = fields.contains("core") ? list("core") : std::vector<Symbol>{};
  return {alphabet, list("left"), core, list("right"), offset};
}

Symbol BiSeq::at(std::int64_t n) const {
  const auto core_end = offset_ + static_cast<std::int64_t>(core_.size());
  if (n >= core_end) return right_[static_cast<std::size_t>((n - core_end) % static_cast<std::int64_t>(right_.size()))];
  if (n >= offset_) return core_[static_cast<std::size_t>(n - offset_)];
  return left_[static_cast<std::size_t>(floor_mod(n - offset_, static_cast<std::int64_t>(left_.size())))];
}

Word BiSeq::window(std::int64_t lo, std::int64_t hi) const {
  std::vector<Symbol> out;
  for (std::int64_t n = lo; n < hi; ++n) out.push_back(at(n));
  return {alphabet_, std::move(out)};
}

std::string BiSeq::to_string() const {
  return "s=" + std::to_string(alphabet_.size()) + " left=" + text::join_symbols(left_) +
         " core=" + text::join_symbols(core_) + " right=" + text::join_symbols(right_) +
         " at=" + std::to_string(offset_);
}

bool operator==(const BiSeq& a, const BiSeq& b) {
  if (a.alphabet_ != b.alphabet_) return false;
  const BiSeq x = canonicalize(a);
  const BiSeq y = canonicalize(b);
  return x.left_ == y.left_ && x.core_ == y.core_ && x.right_ == y.right_ && x.offset_ == y.offset_;
}

BiSeq canonicalize(const BiSeq& seq) {
  std::vector<Symbol> left = primitive_root(seq.left());
  std::vector<Symbol> core = seq.core();
  std::vector<Symbol> right = primitive_root(seq.right());
  std::int64_t offset = seq.offset();

  while (!core.empty() && core.back() == right.back()) {
    rotate_right(right);
    core.pop_back();
  }
  if (core.empty()) {
    // Agreement for lcm(|L|, |R|) steps forces L == R, so this terminates.
    std::size_t guard = left.size() * right.size() + 1;
    while (left != right && left.back() == right.back() && guard-- > 0) {
      rotate_right(left);
      rotate_right(right);
      --offset;
    }
    if (left == right) {
      const auto c = static_cast<std::int64_t>(right.size());
      std::vector<Symbol> aligned(right.size());
      for (std::int64_t j = 0; j < c; ++j) aligned[static_cast<std::size_t>(j)] = right[static_cast<std::size_t>(floor_mod(j - offset, c))];
      return {seq.alphabet(), aligned, {}, aligned, 0};
    }
    return {seq.alphabet(), std::move(left), {}, std::move(right), offset};
  }
  std::size_t drop = 0;
  while (drop < core.size() && core[drop] == left.front()) {
    rotate_left(left);
    ++drop;
    ++offset;
  }
  core.erase(core.begin(), core.begin() + static_cast<std::ptrdiff_t>(drop));
  return {seq.alphabet(), std::move(left), std::move(core), std::move(right), offset};
}

BiSeq apply2(const TwoSidedBlockMap& map, const BiSeq& seq) {
  if (map.alphabet() != seq.alphabet()) throw Error("alphabet mismatch");
  const auto m = static_cast<std::int64_t>(map.memory());
  const auto a = static_cast<std::int64_t>(map.anticipation());
  const auto nl = static_cast<std::int64_t>(seq.left().size());
  const auto nc = static_cast<std::int64_t>(seq.core().size());
  const auto nr = static_cast<std::int64_t>(seq.right().size());
  const std::int64_t start = seq.offset() - a;  // first index whose window reaches the core
  const std::int64_t stop = seq.offset() + nc + m;  // first index whose window is all right cycle

  auto image = [&](std::int64_t lo, std::int64_t hi) {
    const BiWindow in{lo - m, seq.window(lo - m, hi + a)};
    return apply_window(map, in).symbols.vec();
  };
  return canonicalize(BiSeq(seq.alphabet(), image(start - nl, start), image(start, stop), image(stop, stop + nr), start));
}

BiWindow apply_window(const TwoSidedBlockMap& map, const BiWindow& window) {
  if (map.alphabet() != window.symbols.alphabet()) throw Error("alphabet mismatch");
  if (window.symbols.size() < map.window()) {
    return {window.origin + static_cast<std::int64_t>(map.memory()), Word(map.alphabet())};
  }
  return {window.origin + static_cast<std::int64_t>(map.memory()), apply(as_one_sided(map), window.symbols)};
}

}  // namespace calab
