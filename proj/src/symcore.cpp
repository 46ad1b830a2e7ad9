#include "calab/symcore.hpp"

#include <algorithm>
#include <bit>
#include <cstdlib>
#include <mutex>

#include <boost/multiprecision/cpp_int.hpp>

#include "text.hpp"

namespace calab {

std::uint64_t enumeration_cap() {
  if (const char* env = std::getenv("CALAB_CAP"); env != nullptr && *env != '\0') {
    return text::parse_int<std::uint64_t>(env, "CALAB_CAP");
  }
  return std::uint64_t{1} << 24;
}

Alphabet::Alphabet(unsigned size) : size_(size) {
  if (size < 2) throw Error("alphabet size must be at least 2");
  if (size > 256) throw Error("alphabet size must be at most 256");
}

namespace {

void check_symbols(Alphabet alphabet, std::span<const Symbol> symbols) {
  for (Symbol x : symbols) {
    if (!alphabet.contains(x)) {
      throw Error("symbol " + std::to_string(x) + " out of range for s=" +
                  std::to_string(alphabet.size()));
    }
  }
}

std::vector<Symbol> to_symbols(Alphabet alphabet, const std::vector<unsigned>& values) {
  std::vector<Symbol> out;
  out.reserve(values.size());
  for (unsigned v : values) {
    if (!alphabet.contains(v)) {
      throw Error("symbol " + std::to_string(v) + " out of range for s=" +
                  std::to_string(alphabet.size()));
    }
    out.push_back(static_cast<Symbol>(v));
  }
  return out;
}

// Smallest d dividing |w| with w = (w[0,d))^(|w|/d).
std::size_t primitive_period(const std::vector<Symbol>& w) {
  const std::size_t n = w.size();
  for (std::size_t d = 1; d < n; ++d) {
    if (n % d != 0) continue;
    bool ok = true;
    for (std::size_t i = d; i < n && ok; ++i) ok = w[i] == w[i - d];
    if (ok) return d;
  }
  return n;
}

}  // namespace

Word::Word(Alphabet alphabet, std::vector<Symbol> symbols)
    : alphabet_(alphabet), symbols_(std::move(symbols)) {
  check_symbols(alphabet_, symbols_);
}

Word Word::parse(Alphabet alphabet, std::string_view text) {
  return Word(alphabet, to_symbols(alphabet, text::parse_uint_list(text, "symbol")));
}

Word Word::slice(std::size_t pos, std::size_t len) const {
  if (pos > symbols_.size()) pos = symbols_.size();
  len = std::min(len, symbols_.size() - pos);
  return Word(alphabet_, std::vector<Symbol>(symbols_.begin() + pos, symbols_.begin() + pos + len));
}

std::string Word::to_string() const { return text::join_symbols(symbols_); }

EventuallyPeriodicSeq::EventuallyPeriodicSeq(Alphabet alphabet, std::vector<Symbol> prefix,
                                             std::vector<Symbol> cycle)
    : alphabet_(alphabet), prefix_(std::move(prefix)), cycle_(std::move(cycle)) {
  if (cycle_.empty()) throw Error("cycle must be nonempty");
  check_symbols(alphabet_, prefix_);
  check_symbols(alphabet_, cycle_);
}

EventuallyPeriodicSeq EventuallyPeriodicSeq::parse(std::string_view literal) {
  const auto fields = text::parse_fields(literal);
  const Alphabet alphabet(text::parse_int<unsigned>(text::require(fields, "s"), "alphabet size"));
  const auto pre = fields.contains("pre") ? text::parse_uint_list(fields.find("pre")->second, "symbol")
                                          : std::vector<unsigned>{};
  const auto cyc = text::parse_uint_list(text::require(fields, "cyc"), "symbol");
  return {alphabet, to_symbols(alphabet, pre), to_symbols(alphabet, cyc)};
}

Word EventuallyPeriodicSeq::take(std::size_t n) const {
  std::vector<Symbol> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = at(i);
  return Word(alphabet_, std::move(out));
}

bool EventuallyPeriodicSeq::is_canonical() const {
  if (primitive_period(cycle_) != cycle_.size()) return false;
  return prefix_.empty() || prefix_.back() != cycle_.back();
}

std::string EventuallyPeriodicSeq::to_string() const {
  return "s=" + std::to_string(alphabet_.size()) + " pre=" + text::join_symbols(prefix_) +
         " cyc=" + text::join_symbols(cycle_);
}

bool operator==(const EventuallyPeriodicSeq& a, const EventuallyPeriodicSeq& b) {
  if (a.alphabet_ != b.alphabet_) return false;
  const auto ca = canonicalize(a);
  const auto cb = canonicalize(b);
  return ca.prefix_ == cb.prefix_ && ca.cycle_ == cb.cycle_;
}

EventuallyPeriodicSeq canonicalize(const EventuallyPeriodicSeq& seq) {
  std::vector<Symbol> prefix = seq.prefix();
  std::vector<Symbol> cycle = seq.cycle();
  cycle.resize(primitive_period(cycle));
  // Roll the cycle back over the prefix while the prefix's last symbol is the
  // one the cycle would have produced there.
  while (!prefix.empty() && prefix.back() == cycle.back()) {
    std::rotate(cycle.rbegin(), cycle.rbegin() + 1, cycle.rend());
    prefix.pop_back();
  }
  return {seq.alphabet(), std::move(prefix), std::move(cycle)};
}

bool canonical_less(const EventuallyPeriodicSeq& a, const EventuallyPeriodicSeq& b) {
  const auto ca = canonicalize(a);
  const auto cb = canonicalize(b);
  if (ca.prefix() != cb.prefix()) return ca.prefix() < cb.prefix();
  return ca.cycle() < cb.cycle();
}

LazySequence::LazySequence(Alphabet alphabet, std::string name, Generator generator, bool rich)
    : alphabet_(alphabet), name_(std::move(name)), generator_(std::move(generator)), rich_(rich) {}

LazySequence LazySequence::champernowne(Alphabet alphabet, unsigned base) {
  if (base < 2 || base > alphabet.size()) throw Error("champernowne base must be in [2, s]");
  auto gen = [base](std::uint64_t n) -> Symbol {
    // Block of words of length len occupies len * base^len symbols.
    std::uint64_t len = 1;
    std::uint64_t count = base;
    while (n >= len * count) {
      n -= len * count;
      ++len;
      count *= base;
    }
    std::uint64_t word = n / len;
    const std::uint64_t digit_from_right = len - 1 - n % len;
    for (std::uint64_t i = 0; i < digit_from_right; ++i) word /= base;
    return static_cast<Symbol>(word % base);
  };
  std::string name = base == alphabet.size() ? "champernowne" : "champernowne:" + std::to_string(base);
  return {alphabet, std::move(name), gen, true};
}

LazySequence LazySequence::thue_morse(Alphabet alphabet) {
  return {alphabet, "thue-morse",
          [](std::uint64_t n) -> Symbol { return static_cast<Symbol>(std::popcount(n) & 1); }, true};
}

namespace {

struct SubstitutionState {
  std::vector<std::vector<Symbol>> rules;
  std::mutex mutex;
  std::vector<Symbol> cache{0};
};

}  // namespace

LazySequence LazySequence::substitution(Alphabet alphabet, std::vector<std::vector<Symbol>> rules) {
  if (rules.empty() || rules[0].size() < 2 || rules[0][0] != 0) {
    throw Error("substitution must map 0 to a word of length >= 2 starting with 0");
  }
  std::string name = "subst:";
  for (std::size_t a = 0; a < rules.size(); ++a) {
    if (rules[a].empty()) throw Error("substitution images must be nonempty");
    check_symbols(alphabet, rules[a]);
    for (Symbol x : rules[a]) {
      if (x >= rules.size()) throw Error("substitution has no rule for symbol " + std::to_string(x));
    }
    if (a) name += ',';
    name += std::to_string(a) + "->";
    for (Symbol x : rules[a]) name += std::to_string(x);
  }
  auto state = std::make_shared<SubstitutionState>();
  state->rules = std::move(rules);
  auto gen = [state](std::uint64_t n) -> Symbol {
    std::lock_guard lock(state->mutex);
    while (state->cache.size() <= n) {
      std::vector<Symbol> next;
      for (Symbol x : state->cache) {
        const auto& image = state->rules[x];
        next.insert(next.end(), image.begin(), image.end());
      }
      state->cache = std::move(next);
    }
    return state->cache[n];
  };
  return {alphabet, std::move(name), gen, false};
}

LazySequence LazySequence::parse(std::string_view literal) {
  const auto fields = text::parse_fields(literal);
  const Alphabet alphabet(text::parse_int<unsigned>(text::require(fields, "s"), "alphabet size"));
  const std::string_view gen = text::require(fields, "gen");
  if (gen == "thue-morse") return thue_morse(alphabet);
  if (gen == "champernowne") return champernowne(alphabet);
  if (gen.starts_with("champernowne:")) {
    return champernowne(alphabet, text::parse_int<unsigned>(gen.substr(13), "champernowne base"));
  }
  if (gen.starts_with("subst:")) {
    std::vector<std::vector<Symbol>> rules;
    for (auto rule : text::split(gen.substr(6), ',')) {
      const auto arrow = rule.find("->");
      if (arrow == std::string_view::npos) throw Error("malformed substitution rule");
      const auto from = text::parse_int<unsigned>(rule.substr(0, arrow), "substitution symbol");
      if (from >= alphabet.size()) throw Error("substitution symbol out of range");
      if (rules.size() <= from) rules.resize(from + 1);
      for (char ch : rule.substr(arrow + 2)) {
        if (ch < '0' || ch > '9') throw Error("substitution images are decimal digit strings");
        rules[from].push_back(static_cast<Symbol>(ch - '0'));
      }
    }
    return substitution(alphabet, std::move(rules));
  }
  throw Error("unknown generator '" + std::string(gen) + "'");
}

Word LazySequence::take(std::size_t n) const {
  std::vector<Symbol> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = at(i);
  return Word(alphabet_, std::move(out));
}

std::string LazySequence::to_string() const {
  return "s=" + std::to_string(alphabet_.size()) + " gen=" + name_;
}

Alphabet SequenceSource::alphabet() const {
  return std::visit([](const auto& s) { return s.alphabet(); }, source_);
}

Symbol SequenceSource::at(std::size_t n) const {
  if (const auto* w = std::get_if<Word>(&source_)) {
    if (n >= w->size()) throw Error("prefix too short");
    return (*w)[n];
  }
  return std::visit(
      [n](const auto& s) -> Symbol {
        if constexpr (std::is_same_v<std::decay_t<decltype(s)>, Word>) {
          return s[n];
        } else {
          return s.at(n);
        }
      },
      source_);
}

std::optional<std::size_t> SequenceSource::limit() const {
  if (const auto* w = std::get_if<Word>(&source_)) return w->size();
  return std::nullopt;
}

std::optional<Period> detect_eventual_period(const Word& prefix) {
  const std::size_t len = prefix.size();
  if (len == 0) throw Error("empty input");
  const auto& a = prefix.vec();
  for (std::size_t total = 1; 3 * total <= len; ++total) {
    for (std::size_t c = 1; c <= total; ++c) {
      const std::size_t b = total - c;
      bool periodic = true;
      for (std::size_t i = b; i + c < len && periodic; ++i) periodic = a[i] == a[i + c];
      if (periodic) return Period{b, c};
    }
  }
  return std::nullopt;
}

std::size_t word_variety_length(const EventuallyPeriodicSeq& seq) {
  const auto canon = canonicalize(seq);
  const std::size_t windows = canon.b() + canon.c() - 1;
  if (windows <= 1) return 1;
  // Windows beyond b + 2c symbols never separate anything new.
  const std::size_t k_bound = canon.b() + 2 * canon.c() + 1;
  for (std::size_t k = 1; k <= k_bound; ++k) {
    std::vector<std::vector<Symbol>> seen;
    seen.reserve(windows);
    for (std::size_t i = 0; i < windows; ++i) {
      std::vector<Symbol> w(k);
      for (std::size_t j = 0; j < k; ++j) w[j] = canon.at(i + j);
      seen.push_back(std::move(w));
    }
    std::sort(seen.begin(), seen.end());
    if (std::adjacent_find(seen.begin(), seen.end()) == seen.end()) return k;
  }
  throw Error("word variety bound exceeded");
}

std::vector<EventuallyPeriodicSeq> enumerate_B(std::size_t b, std::size_t c, Alphabet alphabet,
                                               std::uint64_t cap) {
  if (c == 0) throw Error("cycle length must be at least 1");
  const boost::multiprecision::cpp_int count =
      boost::multiprecision::pow(boost::multiprecision::cpp_int(alphabet.size()),
                                 static_cast<unsigned>(b + c));
  if (count > cap) throw Error("enumeration too large: " + count.str() + " sequences");

  const std::size_t n = b + c;
  std::vector<Symbol> digits(n, 0);
  std::vector<EventuallyPeriodicSeq> out;
  const auto total = count.convert_to<std::uint64_t>();
  out.reserve(total);
  for (std::uint64_t iter = 0; iter < total; ++iter) {
    out.push_back(canonicalize(EventuallyPeriodicSeq(
        alphabet, std::vector<Symbol>(digits.begin(), digits.begin() + b),
        std::vector<Symbol>(digits.begin() + b, digits.end()))));
    for (std::size_t i = n; i-- > 0;) {
      if (++digits[i] < alphabet.size()) break;
      digits[i] = 0;
    }
  }
  std::sort(out.begin(), out.end(), canonical_less);
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

EventuallyPeriodicSeq shift_left(const EventuallyPeriodicSeq& seq) {
  if (!seq.prefix().empty()) {
    return {seq.alphabet(), std::vector<Symbol>(seq.prefix().begin() + 1, seq.prefix().end()),
            seq.cycle()};
  }
  std::vector<Symbol> cycle = seq.cycle();
  std::rotate(cycle.begin(), cycle.begin() + 1, cycle.end());
  return {seq.alphabet(), {}, std::move(cycle)};
}

}  // namespace calab
