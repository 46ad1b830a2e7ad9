#include "calab/linca.hpp"

#include <algorithm>
#include <random>

#include "calab/mulca.hpp"
#include "text.hpp"

namespace calab {

namespace {

// Polynomials over GF(p) as coefficient vectors c_0..c_d, trimmed.
using Poly = std::vector<unsigned>;

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

Poly poly_mod(Poly a, const Poly& m, unsigned p) {
  trim(a);
  const unsigned lead_inv = [&] {
    for (unsigned x = 1; x < p; ++x) {
      if (x * m.back() % p == 1) return x;
    }
    return 1u;
  }();
  while (a.size() >= m.size()) {
    const unsigned factor = a.back() * lead_inv % p;
    const std::size_t shift = a.size() - m.size();
    for (std::size_t i = 0; i < m.size(); ++i) {
      a[shift + i] = (a[shift + i] + p * p - factor * m[i] % p) % p;
    }
    trim(a);
  }
  return a;
}

Poly unpack(unsigned symbol, unsigned p, unsigned m) {
  Poly a(m);
  for (unsigned i = 0; i < m; ++i) {
    a[i] = symbol % p;
    symbol /= p;
  }
  return a;
}

unsigned pack(const Poly& a, unsigned p) {
  unsigned v = 0;
  for (std::size_t i = a.size(); i-- > 0;) v = v * p + a[i];
  return v;
}

}  // namespace

bool is_irreducible(unsigned p, const std::vector<unsigned>& poly) {
  Poly f = poly;
  trim(f);
  if (f.size() < 2) return false;
  const unsigned m = static_cast<unsigned>(f.size() - 1);
  // Every monic divisor of degree 1..m/2.
  for (unsigned d = 1; d <= m / 2; ++d) {
    unsigned count = 1;
    for (unsigned i = 0; i < d; ++i) count *= p;
    for (unsigned low = 0; low < count; ++low) {
      Poly g = unpack(low, p, d);
      g.push_back(1);
      if (poly_mod(f, g, p).empty()) return false;
    }
  }
  return true;
}

RingSpec::RingSpec(unsigned size, bool field, unsigned p, unsigned m, std::vector<unsigned> modulus)
    : size_(size), field_(field), p_(p), m_(m), modulus_(std::move(modulus)) {
  if (size_ < 2 || size_ > 256) throw Error("ring size must be in [2, 256]");
  add_.resize(size_ * size_);
  mul_.resize(size_ * size_);
  neg_.resize(size_);
  for (unsigned a = 0; a < size_; ++a) {
    for (unsigned b = 0; b < size_; ++b) {
      unsigned sum = 0;
      unsigned product = 0;
      if (!field_) {
        sum = (a + b) % size_;
        product = a * b % size_;
      } else {
        const Poly pa = unpack(a, p_, m_);
        const Poly pb = unpack(b, p_, m_);
        Poly ps(m_);
        for (unsigned i = 0; i < m_; ++i) ps[i] = (pa[i] + pb[i]) % p_;
        sum = pack(ps, p_);
        Poly pm(2 * m_, 0);
        for (unsigned i = 0; i < m_; ++i) {
          for (unsigned j = 0; j < m_; ++j) pm[i + j] = (pm[i + j] + pa[i] * pb[j]) % p_;
        }
        product = pack(poly_mod(pm, modulus_, p_), p_);
      }
      add_[a * size_ + b] = static_cast<Symbol>(sum);
      mul_[a * size_ + b] = static_cast<Symbol>(product);
    }
  }
  for (unsigned a = 0; a < size_; ++a) {
    for (unsigned b = 0; b < size_; ++b) {
      if (add_[a * size_ + b] == 0) neg_[a] = static_cast<Symbol>(b);
    }
  }
}

RingSpec RingSpec::modular(unsigned s) { return {s, false, s, 1, {}}; }

RingSpec RingSpec::field(unsigned p, unsigned m) {
  if (!is_prime(p)) throw Error(std::to_string(p) + " is not prime");
  if (m == 0) throw Error("field degree must be positive");
  unsigned count = 1;
  for (unsigned i = 0; i < m; ++i) {
    if (count > 256 / p) throw Error("field too large for byte symbols");
    count *= p;
  }
  for (unsigned low = 0; low < count; ++low) {
    Poly f = unpack(low, p, m);
    f.push_back(1);
    if (is_irreducible(p, f)) return {count, true, p, m, f};
  }
  throw Error("no irreducible polynomial found");
}

RingSpec RingSpec::field(unsigned p, unsigned m, std::vector<unsigned> modulus) {
  if (!is_prime(p)) throw Error(std::to_string(p) + " is not prime");
  if (modulus.size() != m + 1 || modulus.back() != 1) throw Error("modulus must be monic of degree m");
  for (unsigned c : modulus) {
    if (c >= p) throw Error("modulus coefficient out of range");
  }
  if (!is_irreducible(p, modulus)) throw Error("modulus is not irreducible");
  unsigned count = 1;
  for (unsigned i = 0; i < m; ++i) {
    if (count > 256 / p) throw Error("field too large for byte symbols");
    count *= p;
  }
  return {count, true, p, m, std::move(modulus)};
}

RingSpec RingSpec::parse(std::string_view text) {
  text = text::trim(text);
  if (text.starts_with("mod:")) return modular(text::parse_int<unsigned>(text.substr(4), "ring size"));
  if (text.starts_with("gf:")) {
    const auto parts = text::split(text.substr(3), '^');
    if (parts.size() == 1) return field(text::parse_int<unsigned>(parts[0], "characteristic"), 1);
    if (parts.size() == 2) {
      return field(text::parse_int<unsigned>(parts[0], "characteristic"),
                   text::parse_int<unsigned>(parts[1], "field degree"));
    }
  }
  throw Error("ring must be mod:<s> or gf:<p>^<m>");
}

Symbol RingSpec::inv(Symbol a) const {
  for (unsigned b = 0; b < size_; ++b) {
    if (mul(a, static_cast<Symbol>(b)) == 1) return static_cast<Symbol>(b);
  }
  throw Error("element " + std::to_string(a) + " is not invertible");
}

std::string RingSpec::to_string() const {
  if (!field_) return "mod:" + std::to_string(size_);
  return "gf:" + std::to_string(p_) + "^" + std::to_string(m_);
}

ShiftPolynomial::ShiftPolynomial(RingSpec ring, std::vector<Symbol> coeffs)
    : ring_(std::move(ring)), coeffs_(std::move(coeffs)) {
  for (Symbol c : coeffs_) {
    if (c >= ring_.size()) throw Error("coefficient out of range");
  }
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

ShiftPolynomial ShiftPolynomial::parse(std::string_view literal) {
  const auto fields = text::parse_fields(literal);
  RingSpec ring = RingSpec::parse(text::require(fields, "ring"));
  std::vector<Symbol> coeffs;
  for (unsigned c : text::parse_uint_list(text::require(fields, "coeffs"), "coefficient")) {
    if (c >= ring.size()) throw Error("coefficient out of range");
    coeffs.push_back(static_cast<Symbol>(c));
  }
  return {std::move(ring), std::move(coeffs)};
}

ShiftPolynomial ShiftPolynomial::operator+(const ShiftPolynomial& o) const {
  if (!(ring_ == o.ring_)) throw Error("ring mismatch");
  std::vector<Symbol> out(std::max(coeffs_.size(), o.coeffs_.size()), 0);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const Symbol a = i < coeffs_.size() ? coeffs_[i] : 0;
    const Symbol b = i < o.coeffs_.size() ? o.coeffs_[i] : 0;
    out[i] = ring_.add(a, b);
  }
  return {ring_, std::move(out)};
}

ShiftPolynomial ShiftPolynomial::operator*(const ShiftPolynomial& o) const {
  if (!(ring_ == o.ring_)) throw Error("ring mismatch");
  if (is_zero() || o.is_zero()) return {ring_, {}};
  std::vector<Symbol> out(coeffs_.size() + o.coeffs_.size() - 1, 0);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    for (std::size_t j = 0; j < o.coeffs_.size(); ++j) {
      out[i + j] = ring_.add(out[i + j], ring_.mul(coeffs_[i], o.coeffs_[j]));
    }
  }
  return {ring_, std::move(out)};
}

std::string ShiftPolynomial::to_string() const {
  return "ring=" + ring_.to_string() + " coeffs=" + (coeffs_.empty() ? "0" : text::join_symbols(coeffs_));
}

BlockMap poly_to_blockmap(const ShiftPolynomial& poly) {
  const RingSpec& ring = poly.ring();
  if (poly.is_zero()) return BlockMap::constant(ring.alphabet(), 0);
  const auto& c = poly.coeffs();
  return BlockMap::from_rule(ring.alphabet(), poly.degree(), [&](std::span<const Symbol> a) {
    Symbol sum = 0;
    for (std::size_t i = 0; i < c.size(); ++i) sum = ring.add(sum, ring.mul(c[i], a[i]));
    return sum;
  });
}

namespace {

// f(e^i) for i = 0..r, e^i carrying the ring's one (symbol 1).
std::vector<Symbol> basis_images(const BlockMap& map) {
  const unsigned s = map.alphabet().size();
  std::vector<Symbol> c(map.window());
  std::size_t index = 1;  // e^r
  for (std::size_t i = map.window(); i-- > 0;) {
    c[i] = map.table()[index];
    index *= s;
  }
  return c;
}

}  // namespace

bool is_linear(const BlockMap& map, const RingSpec& ring) {
  if (map.alphabet().size() != ring.size()) throw Error("ring size must match the alphabet");
  const auto c = basis_images(map);
  const std::size_t r1 = map.window();
  std::vector<Symbol> block(r1, 0);
  for (std::size_t idx = 0; idx < map.table().size(); ++idx) {
    Symbol sum = 0;
    for (std::size_t i = 0; i < r1; ++i) sum = ring.add(sum, ring.mul(c[i], block[i]));
    if (sum != map.table()[idx]) return false;
    for (std::size_t i = r1; i-- > 0;) {
      if (++block[i] < ring.size()) break;
      block[i] = 0;
    }
  }
  return true;
}

std::optional<ShiftPolynomial> blockmap_to_poly(const BlockMap& map, const RingSpec& ring) {
  if (!is_linear(map, ring)) return std::nullopt;
  return ShiftPolynomial(ring, basis_images(map));
}

ShiftPolynomial compose_as_poly(const ShiftPolynomial& p, const ShiftPolynomial& q) { return p * q; }

BlockMap add_maps(const BlockMap& a, const BlockMap& b, const RingSpec& ring) {
  if (a.alphabet() != b.alphabet() || a.alphabet().size() != ring.size()) throw Error("alphabet mismatch");
  const unsigned r = std::max(a.radius(), b.radius());
  const BlockMap pa = a.padded(r);
  const BlockMap pb = b.padded(r);
  std::vector<Symbol> table(pa.table().size());
  for (std::size_t i = 0; i < table.size(); ++i) table[i] = ring.add(pa.table()[i], pb.table()[i]);
  return {a.alphabet(), r, std::move(table)};
}

namespace {

// Row-reduces [rows | rhs] in place; returns pivot columns per reduced row.
std::vector<std::size_t> row_reduce(const RingSpec& f, std::vector<std::vector<Symbol>>& rows,
                                    std::vector<Symbol>* rhs) {
  std::vector<std::size_t> pivots;
  if (rows.empty()) return pivots;
  const std::size_t cols = rows.front().size();
  std::size_t r = 0;
  for (std::size_t col = 0; col < cols && r < rows.size(); ++col) {
    std::size_t pivot = r;
    while (pivot < rows.size() && rows[pivot][col] == 0) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[r], rows[pivot]);
    if (rhs) std::swap((*rhs)[r], (*rhs)[pivot]);
    const Symbol scale = f.inv(rows[r][col]);
    for (auto& x : rows[r]) x = f.mul(x, scale);
    if (rhs) (*rhs)[r] = f.mul((*rhs)[r], scale);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r || rows[i][col] == 0) continue;
      const Symbol factor = rows[i][col];
      for (std::size_t j = 0; j < cols; ++j) rows[i][j] = f.sub(rows[i][j], f.mul(factor, rows[r][j]));
      if (rhs) (*rhs)[i] = f.sub((*rhs)[i], f.mul(factor, (*rhs)[r]));
    }
    pivots.push_back(col);
    ++r;
  }
  return pivots;
}

std::vector<std::vector<Symbol>> windows(const SequenceSource& source, std::size_t n, std::size_t k) {
  std::vector<std::vector<Symbol>> rows(n, std::vector<Symbol>(k));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < k; ++j) rows[i][j] = source.at(i + j);
  }
  return rows;
}

void require_field(const SequenceSource& source, const RingSpec& field) {
  if (!field.is_field()) throw Error("ring must be a field");
  if (source.alphabet().size() != field.size()) throw Error("ring size must match the alphabet");
}

}  // namespace

std::size_t rank_over(const RingSpec& field, std::vector<std::vector<Symbol>> rows) {
  if (!field.is_field()) throw Error("ring must be a field");
  return row_reduce(field, rows, nullptr).size();
}

std::optional<std::size_t> window_independence(const SequenceSource& source, std::size_t n,
                                               std::size_t k_max, const RingSpec& field) {
  if (n == 0) throw Error("n must be positive");
  require_field(source, field);
  const auto limit = source.limit();
  // Fewer than n coordinates can never carry n independent vectors.
  for (std::size_t k = n; k <= k_max; ++k) {
    if (limit && n - 1 + k > *limit) break;
    if (rank_over(field, windows(source, n, k)) == n) return k;
  }
  return std::nullopt;
}

BlockMap construct_linear_hitting(const SequenceSource& source, const Word& target,
                                  const RingSpec& field, std::size_t k_max) {
  require_field(source, field);
  if (target.alphabet() != source.alphabet()) throw Error("alphabet mismatch");
  const std::size_t n = target.size();
  if (n == 0) return BlockMap::constant(field.alphabet(), 0);
  const auto k = window_independence(source, n, k_max, field);
  if (!k) throw Error("windows dependent; target may be unreachable");

  auto rows = windows(source, n, *k);
  std::vector<Symbol> rhs(target.vec());
  const auto pivots = row_reduce(field, rows, &rhs);
  std::vector<Symbol> coeffs(*k, 0);
  for (std::size_t r = 0; r < pivots.size(); ++r) coeffs[pivots[r]] = rhs[r];
  // Keep the full window so the map reads exactly the windows it was solved for.
  return BlockMap::from_rule(field.alphabet(), static_cast<unsigned>(*k - 1), [&](std::span<const Symbol> a) {
    Symbol sum = 0;
    for (std::size_t j = 0; j < coeffs.size(); ++j) sum = field.add(sum, field.mul(coeffs[j], a[j]));
    return sum;
  });
}

PLambdaReport p_lambda_witness(const PLambdaOptions& options) {
  const unsigned s = options.s;
  unsigned p = options.p;
  const auto primes = prime_factors(s);
  if (is_prime(s)) throw Error("no nontrivial divisor");
  if (p == 0) p = primes.front();
  if (p <= 1 || p >= s || s % p != 0) throw Error("p must be a nontrivial divisor of s");

  const Alphabet alphabet(s);
  const RingSpec ring = RingSpec::modular(s);
  std::mt19937_64 rng(options.seed);
  auto uniform = [&rng](std::uint64_t n) { return static_cast<unsigned>(rng() % n); };

  std::vector<Word> inputs;
  for (std::size_t i = 0; i < options.inputs; ++i) {
    std::vector<Symbol> w(options.input_len);
    for (auto& x : w) x = static_cast<Symbol>(p * uniform(s / p));
    inputs.emplace_back(alphabet, std::move(w));
  }

  PLambdaReport report;
  report.p = p;
  for (std::size_t t = 0; t < options.trials; ++t) {
    std::vector<Symbol> coeffs(uniform(options.max_degree + 1) + 1);
    for (auto& c : coeffs) c = static_cast<Symbol>(uniform(s));
    BlockMap map = poly_to_blockmap(ShiftPolynomial(ring, coeffs)).padded(static_cast<unsigned>(coeffs.size() - 1));
    if (options.sabotage && t == 0 && !inputs.empty() && inputs.front().size() >= map.window()) {
      const std::size_t index = block_index(inputs.front().symbols().subspan(0, map.window()), s);
      map = map.with_entry(index, static_cast<Symbol>((map.table()[index] + 1) % s));
    }
    ++report.maps_checked;
    for (const Word& input : inputs) {
      if (input.size() < map.window()) continue;
      const Word out = apply(map, input);
      for (std::size_t i = 0; i < out.size(); ++i) {
        if (out[i] % p != 0) {
          report.pass = false;
          report.failing_map = to_file(map);
          report.failing_input = input;
          report.failing_position = i;
          return report;
        }
      }
    }
  }
  return report;
}

}  // namespace calab
