#include "calab/ca1d.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <thread>

#include <boost/multiprecision/cpp_int.hpp>

#include "text.hpp"

namespace calab {

std::size_t block_index(std::span<const Symbol> block, unsigned s) {
  std::size_t index = 0;
  for (Symbol x : block) index = index * s + x;
  return index;
}

std::vector<Symbol> block_at(std::size_t index, std::size_t length, unsigned s) {
  std::vector<Symbol> block(length);
  for (std::size_t i = length; i-- > 0;) {
    block[i] = static_cast<Symbol>(index % s);
    index /= s;
  }
  return block;
}

std::size_t table_size(unsigned s, unsigned radius) {
  std::size_t size = 1;
  for (unsigned i = 0; i <= radius; ++i) {
    if (size > kMaxTableSize / s) throw Error("block map table too large");
    size *= s;
  }
  return size;
}

namespace {

// Odometer over blocks of a fixed length in table-lex order.
void next_block(std::vector<Symbol>& digits, unsigned s) {
  for (std::size_t i = digits.size(); i-- > 0;) {
    if (++digits[i] < s) return;
    digits[i] = 0;
  }
}

}  // namespace

BlockMap::BlockMap(Alphabet alphabet, unsigned radius, std::vector<Symbol> table)
    : alphabet_(alphabet), radius_(radius), table_(std::move(table)) {
  if (table_.size() != table_size(alphabet_.size(), radius_)) {
    throw Error("block map table must have s^(r+1) entries");
  }
  for (Symbol x : table_) {
    if (!alphabet_.contains(x)) throw Error("block map entry out of range");
  }
}

BlockMap BlockMap::identity(Alphabet alphabet) {
  return from_rule(alphabet, 0, [](auto w) { return w[0]; });
}

BlockMap BlockMap::shift(Alphabet alphabet, unsigned k) {
  return from_rule(alphabet, k, [k](auto w) { return w[k]; });
}

BlockMap BlockMap::constant(Alphabet alphabet, Symbol value) {
  return {alphabet, 0, std::vector<Symbol>(alphabet.size(), value)};
}

BlockMap BlockMap::from_rule(Alphabet alphabet, unsigned radius,
                             const std::function<Symbol(std::span<const Symbol>)>& rule) {
  const unsigned s = alphabet.size();
  const std::size_t n = table_size(s, radius);
  std::vector<Symbol> table(n);
  std::vector<Symbol> block(radius + 1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    table[i] = rule(block);
    next_block(block, s);
  }
  return {alphabet, radius, std::move(table)};
}

BlockMap BlockMap::padded(unsigned radius) const {
  if (radius < radius_) throw Error("cannot pad to a smaller radius");
  const std::size_t factor = table_size(alphabet_.size(), radius) / table_.size();
  std::vector<Symbol> table(table_.size() * factor);
  for (std::size_t i = 0; i < table.size(); ++i) table[i] = table_[i / factor];
  return {alphabet_, radius, std::move(table)};
}

BlockMap BlockMap::with_entry(std::size_t index, Symbol value) const {
  if (index >= table_.size()) throw Error("table index out of range");
  auto table = table_;
  table[index] = value;
  return {alphabet_, radius_, std::move(table)};
}

std::string to_file(const BlockMap& map) {
  std::string out = "CA1 s=" + std::to_string(map.alphabet().size()) +
                    " r=" + std::to_string(map.radius()) + "\n";
  out += text::join_symbols(map.table(), ' ');
  out += '\n';
  return out;
}

BlockMap parse_block_map(std::string_view file) {
  const auto newline = file.find('\n');
  if (newline == std::string_view::npos) throw Error("block map file needs two lines");
  const auto header = text::split_ws(file.substr(0, newline));
  if (header.size() != 3 || header[0] != "CA1" || !header[1].starts_with("s=") ||
      !header[2].starts_with("r=")) {
    throw Error("block map header must be 'CA1 s=<s> r=<r>'");
  }
  const Alphabet alphabet(text::parse_int<unsigned>(header[1].substr(2), "alphabet size"));
  const auto radius = text::parse_int<unsigned>(header[2].substr(2), "radius");
  std::vector<Symbol> table;
  for (auto token : text::split_ws(file.substr(newline + 1))) {
    const auto v = text::parse_int<unsigned>(token, "table entry");
    if (!alphabet.contains(v)) throw Error("block map entry out of range");
    table.push_back(static_cast<Symbol>(v));
  }
  return {alphabet, radius, std::move(table)};
}

Word apply(const BlockMap& map, const Word& prefix) {
  if (map.alphabet() != prefix.alphabet()) throw Error("alphabet mismatch");
  if (prefix.size() < map.window()) throw Error("insufficient context");
  const unsigned s = map.alphabet().size();
  const std::size_t top = map.table().size() / s;  // s^r
  std::vector<Symbol> out(prefix.size() - map.radius());
  std::size_t index = block_index(prefix.symbols().subspan(0, map.window()), s);
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] = map.table()[index];
    if (k + map.window() < prefix.size()) {
      index = (index % top) * s + prefix[k + map.window()];
    }
  }
  return Word(map.alphabet(), std::move(out));
}

EventuallyPeriodicSeq apply_seq(const BlockMap& map, const EventuallyPeriodicSeq& seq) {
  if (map.alphabet() != seq.alphabet()) throw Error("alphabet mismatch");
  const std::size_t b = seq.b();
  const std::size_t c = seq.c();
  std::vector<Symbol> block(map.window());
  std::vector<Symbol> image(b + c);
  for (std::size_t n = 0; n < b + c; ++n) {
    for (std::size_t j = 0; j < block.size(); ++j) block[j] = seq.at(n + j);
    image[n] = map(block);
  }
  return canonicalize(EventuallyPeriodicSeq(seq.alphabet(),
                                            std::vector<Symbol>(image.begin(), image.begin() + b),
                                            std::vector<Symbol>(image.begin() + b, image.end())));
}

BlockMap compose(const BlockMap& outer, const BlockMap& inner) {
  if (outer.alphabet() != inner.alphabet()) throw Error("alphabet mismatch");
  const unsigned s = outer.alphabet().size();
  const unsigned ro = outer.radius();
  const unsigned ri = inner.radius();
  const unsigned radius = ro + ri;
  const std::size_t n = table_size(s, radius);
  std::vector<Symbol> table(n);
  std::vector<Symbol> digits(radius + 1, 0);
  for (std::size_t idx = 0; idx < n; ++idx) {
    std::size_t outer_index = 0;
    for (unsigned t = 0; t <= ro; ++t) {
      std::size_t inner_index = 0;
      for (unsigned j = 0; j <= ri; ++j) inner_index = inner_index * s + digits[t + j];
      outer_index = outer_index * s + inner.table()[inner_index];
    }
    table[idx] = outer.table()[outer_index];
    next_block(digits, s);
  }
  return {outer.alphabet(), radius, std::move(table)};
}

BlockMap normalize(const BlockMap& map) {
  const unsigned s = map.alphabet().size();
  std::vector<Symbol> table = map.table();
  unsigned radius = map.radius();
  while (radius > 0) {
    bool ignores_last = true;
    for (std::size_t i = 0; i < table.size() && ignores_last; i += s) {
      for (unsigned x = 1; x < s && ignores_last; ++x) ignores_last = table[i + x] == table[i];
    }
    if (!ignores_last) break;
    std::vector<Symbol> trimmed(table.size() / s);
    for (std::size_t i = 0; i < trimmed.size(); ++i) trimmed[i] = table[i * s];
    table = std::move(trimmed);
    --radius;
  }
  return {map.alphabet(), radius, std::move(table)};
}

bool equal(const BlockMap& a, const BlockMap& b) {
  if (a.alphabet() != b.alphabet()) throw Error("alphabet mismatch");
  return normalize(a) == normalize(b);
}

CommuteResult commutes(const BlockMap& a, const BlockMap& b) {
  const BlockMap ab = compose(a, b);
  const BlockMap ba = compose(b, a);
  const auto mismatch = std::mismatch(ab.table().begin(), ab.table().end(), ba.table().begin());
  if (mismatch.first == ab.table().end()) return {};
  const auto index = static_cast<std::size_t>(mismatch.first - ab.table().begin());
  return {false, Word(a.alphabet(), block_at(index, ab.window(), a.alphabet().size()))};
}

namespace {

std::uint64_t checked_pow(std::uint64_t base, std::uint64_t exp, bool& overflow) {
  std::uint64_t result = 1;
  overflow = false;
  for (std::uint64_t i = 0; i < exp; ++i) {
    if (result > UINT64_MAX / base) {
      overflow = true;
      return 0;
    }
    result *= base;
  }
  return result;
}

// For one generator g and candidate radius R, everything about g∘c and c∘g
// that does not depend on the candidate table c.
struct CommuteProbe {
  const BlockMap* generator;
  std::size_t blocks = 0;
  unsigned sub_windows = 0;                // r_g + 1
  std::vector<std::uint32_t> outer_index;  // index into c of g-outputs, per block
  std::vector<std::uint32_t> sub_index;    // blocks * sub_windows indices into c

  CommuteProbe(const BlockMap& g, unsigned candidate_radius) : generator(&g) {
    const unsigned s = g.alphabet().size();
    const unsigned rg = g.radius();
    const unsigned length = candidate_radius + rg + 1;
    blocks = table_size(s, length - 1);
    sub_windows = rg + 1;
    outer_index.resize(blocks);
    sub_index.resize(blocks * sub_windows);
    std::vector<Symbol> w(length, 0);
    for (std::size_t idx = 0; idx < blocks; ++idx) {
      std::size_t oi = 0;
      for (unsigned t = 0; t <= candidate_radius; ++t) {
        oi = oi * s + g(std::span<const Symbol>(w).subspan(t, rg + 1));
      }
      outer_index[idx] = static_cast<std::uint32_t>(oi);
      for (unsigned t = 0; t <= rg; ++t) {
        sub_index[idx * sub_windows + t] = static_cast<std::uint32_t>(
            block_index(std::span<const Symbol>(w).subspan(t, candidate_radius + 1), s));
      }
      next_block(w, s);
    }
  }

  bool commutes_with(const std::vector<Symbol>& c, unsigned s) const {
    const auto& gt = generator->table();
    for (std::size_t idx = 0; idx < blocks; ++idx) {
      const std::uint32_t* sub = &sub_index[idx * sub_windows];
      std::size_t gi = 0;
      for (unsigned t = 0; t < sub_windows; ++t) gi = gi * s + c[sub[t]];
      if (gt[gi] != c[outer_index[idx]]) return false;
    }
    return true;
  }
};

}  // namespace

std::string commutant_candidate_count(Alphabet alphabet, unsigned max_radius) {
  bool overflow = false;
  const std::uint64_t entries = checked_pow(alphabet.size(), max_radius + 1, overflow);
  if (overflow || entries > 100000) {
    return std::to_string(alphabet.size()) + "^" + std::to_string(alphabet.size()) + "^" +
           std::to_string(max_radius + 1);
  }
  const boost::multiprecision::cpp_int count =
      boost::multiprecision::pow(boost::multiprecision::cpp_int(alphabet.size()), static_cast<unsigned>(entries));
  return count.str();
}

std::vector<BlockMap> enumerate_commutant(std::span<const BlockMap> generators, Alphabet alphabet,
                                          unsigned max_radius, const EnumerationOptions& options) {
  for (const auto& g : generators) {
    if (g.alphabet() != alphabet) throw Error("alphabet mismatch");
  }
  const unsigned s = alphabet.size();
  bool overflow = false;
  const std::uint64_t entries = checked_pow(s, max_radius + 1, overflow);
  const std::uint64_t count = overflow ? 0 : checked_pow(s, entries, overflow);
  if (overflow || count > options.cap) {
    throw Error("enumeration too large: " + commutant_candidate_count(alphabet, max_radius) +
                " candidates exceed cap " + std::to_string(options.cap));
  }

  std::vector<CommuteProbe> probes;
  probes.reserve(generators.size());
  for (const auto& g : generators) probes.emplace_back(g, max_radius);

  unsigned threads = options.threads ? options.threads : std::thread::hardware_concurrency();
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::uint64_t>(1, count / 4096))));

  // Each worker scans a contiguous candidate range; merging in range order
  // keeps the output independent of scheduling.
  std::vector<std::vector<std::vector<Symbol>>> found(threads);
  auto worker = [&](unsigned part) {
    const std::uint64_t begin = count / threads * part + std::min<std::uint64_t>(part, count % threads);
    const std::uint64_t end = begin + count / threads + (part < count % threads ? 1 : 0);
    std::vector<Symbol> table(entries);
    std::uint64_t rest = begin;
    for (std::size_t i = entries; i-- > 0;) {
      table[i] = static_cast<Symbol>(rest % s);
      rest /= s;
    }
    for (std::uint64_t cand = begin; cand < end; ++cand) {
      bool ok = true;
      for (const auto& probe : probes) {
        if (!probe.commutes_with(table, s)) {
          ok = false;
          break;
        }
      }
      if (ok) found[part].push_back(table);
      next_block(table, s);
    }
  };
  if (threads == 1) {
    worker(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker, t);
  }

  std::vector<BlockMap> out;
  for (auto& part : found) {
    for (auto& table : part) out.push_back(normalize(BlockMap(alphabet, max_radius, std::move(table))));
  }
  return out;
}

ProductMap chr_product_map(const std::vector<unsigned>& deltas, unsigned radius) {
  if (radius < 2) throw Error("product map radius must be at least 2");
  if (deltas.size() != radius) throw Error("product map needs exactly r deltas");
  for (unsigned d : deltas) {
    if (d > 1) throw Error("deltas must be 0 or 1");
  }
  const Alphabet binary(2);
  BlockMap map = BlockMap::from_rule(binary, radius, [&](std::span<const Symbol> a) {
    unsigned product = 1;
    for (unsigned i = 1; i <= radius; ++i) product &= (a[i] + deltas[i - 1]) & 1u;
    return static_cast<Symbol>((a[0] + product) & 1u);
  });
  unsigned period = radius;
  for (unsigned m = 1; m < radius; ++m) {
    bool ok = true;
    for (unsigned i = 0; i + m < radius && ok; ++i) ok = deltas[i] == deltas[i + m];
    if (ok) {
      period = m;
      break;
    }
  }
  return {std::move(map), period};
}

BlockMap construct_table_hitting(const SequenceSource& source, const Word& target,
                                 std::size_t k_max) {
  const Alphabet alphabet = source.alphabet();
  if (target.alphabet() != alphabet) throw Error("alphabet mismatch");
  const std::size_t n = target.size();
  if (n == 0) return BlockMap::constant(alphabet, 0);

  const auto* periodic = source.eventually_periodic();
  const auto limit = source.limit();
  std::size_t bound = k_max;
  if (periodic != nullptr) {
    const auto canon = canonicalize(*periodic);
    // Windows longer than b + c separate nothing new.
    bound = std::min(bound, canon.b() + canon.c() + 1);
  }
  for (std::size_t k = 1; k <= bound; ++k) {
    if (limit && n - 1 + k > *limit) throw Error("prefix too short");
    std::vector<std::size_t> indices(n);
    std::vector<Symbol> window(k);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < k; ++j) window[j] = source.at(i + j);
      indices[i] = block_index(window, alphabet.size());
    }
    auto sorted = indices;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) continue;
    std::vector<Symbol> table(table_size(alphabet.size(), static_cast<unsigned>(k - 1)), 0);
    for (std::size_t i = 0; i < n; ++i) table[indices[i]] = target[i];
    return {alphabet, static_cast<unsigned>(k - 1), std::move(table)};
  }
  if (periodic != nullptr) throw Error("insufficient word variety");
  if (limit) throw Error("prefix too short");
  throw Error("no separating window length up to " + std::to_string(k_max));
}

SemigroupPresentation::SemigroupPresentation(
    std::vector<std::pair<std::string, BlockMap>> gens, unsigned bound)
    : generators(std::move(gens)), closure_bound(bound) {
  if (generators.empty()) throw Error("semigroup needs at least one generator");
  for (const auto& [name, g] : generators) {
    if (g.alphabet() != generators.front().second.alphabet()) {
      throw Error("generator '" + name + "' uses a different alphabet");
    }
  }
}

}  // namespace calab
