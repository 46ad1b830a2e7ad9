#include "calab/lab.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "calab/ca2d.hpp"
#include "calab/linca.hpp"
#include "text.hpp"

namespace calab {

using nlohmann::ordered_json;

// ---------------------------------------------------------------- config

ExperimentConfig ExperimentConfig::parse(std::string_view text) {
  ExperimentConfig config;
  std::size_t line_no = 0;
  for (auto line : text::split(text, '\n')) {
    ++line_no;
    line = text::trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos || eq == 0) {
      throw Error("config line " + std::to_string(line_no) + ": expected key=value");
    }
    config.set(std::string(text::trim(line.substr(0, eq))), std::string(text::trim(line.substr(eq + 1))));
  }
  return config;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read config '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str());
}

std::string ExperimentConfig::serialize() const {
  std::string out;
  for (const auto& [key, value] : entries_) out += key + "=" + value + "\n";
  return out;
}

void ExperimentConfig::set(std::string key, std::string value) {
  if (key.empty()) throw Error("empty config key");
  for (char ch : key) {
    if (ch == '=' || ch == '\n' || ch == ' ' || ch == '\t') throw Error("invalid config key '" + key + "'");
  }
  if (value.find('\n') != std::string::npos) throw Error("config value for '" + key + "' spans lines");
  if (value != text::trim(value)) throw Error("config value for '" + key + "' has surrounding spaces");
  entries_.insert_or_assign(std::move(key), std::move(value));
}

bool ExperimentConfig::has(std::string_view key) const { return entries_.find(key) != entries_.end(); }

const std::string& ExperimentConfig::get(std::string_view key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) throw Error("missing config key '" + std::string(key) + "'");
  return it->second;
}

std::string ExperimentConfig::get_or(std::string_view key, std::string fallback) const {
  const auto it = entries_.find(key);
  return it == entries_.end() ? fallback : it->second;
}

std::uint64_t ExperimentConfig::get_uint(std::string_view key, std::uint64_t fallback) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  return text::parse_int<std::uint64_t>(it->second, key);
}

std::uint64_t ExperimentConfig::get_bound(std::string_view key, std::uint64_t fallback) const {
  const std::uint64_t v = get_uint(key, fallback);
  if (v == 0) throw Error("config key '" + std::string(key) + "' must be positive");
  return v;
}

std::int64_t ExperimentConfig::get_int(std::string_view key, std::int64_t fallback) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  return text::parse_int<std::int64_t>(it->second, key);
}

bool ExperimentConfig::get_flag(std::string_view key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return false;
  if (it->second == "1" || it->second == "true" || it->second == "yes") return true;
  if (it->second == "0" || it->second == "false" || it->second == "no") return false;
  throw Error("config key '" + std::string(key) + "' must be true or false");
}

// ------------------------------------------------------------ generators

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::vector<Symbol> symbols_in(std::string_view list, Alphabet alphabet) {
  std::vector<Symbol> out;
  for (unsigned v : text::parse_uint_list(list, "symbol")) {
    if (!alphabet.contains(v)) throw Error("symbol " + std::to_string(v) + " out of range");
    out.push_back(static_cast<Symbol>(v));
  }
  return out;
}

std::uint64_t cap_from(const ExperimentConfig& config) { return config.get_uint("cap", enumeration_cap()); }

}  // namespace

std::vector<NamedMap> parse_generator(std::string_view item, Alphabet alphabet) {
  item = text::trim(item);
  const std::string name(item);
  const unsigned s = alphabet.size();
  if (item == "id") return {{name, BlockMap::identity(alphabet)}};
  if (item == "zero") return {{name, BlockMap::constant(alphabet, 0)}};
  if (item == "mirror") return {{name, mu_const(alphabet, ConstMap::mirror)}};
  if (item == "sigma") return {{name, BlockMap::shift(alphabet, 1)}};
  if (item.starts_with("sigma^")) {
    return {{name, BlockMap::shift(alphabet, text::parse_int<unsigned>(item.substr(6), "shift power"))}};
  }
  if (item.starts_with("mu:")) {
    return {{name, mu_u(MulSpec(alphabet, text::parse_int<std::int64_t>(item.substr(3), "multiplier")))}};
  }
  if (item.starts_with("chr:")) {
    const auto deltas = text::parse_uint_list(item.substr(4), "delta");
    auto product = chr_product_map(deltas, static_cast<unsigned>(deltas.size()));
    if (product.map.alphabet() != alphabet) throw Error("product maps need s=2");
    return {{name, std::move(product.map)}};
  }
  if (item.starts_with("poly:")) {
    return {{name, poly_to_blockmap(ShiftPolynomial(RingSpec::modular(s), symbols_in(item.substr(5), alphabet)))}};
  }
  if (item.starts_with("linear:")) {
    const auto r = text::parse_int<unsigned>(item.substr(7), "radius");
    const std::size_t count = table_size(s, r);
    const RingSpec ring = RingSpec::modular(s);
    std::vector<NamedMap> out;
    for (std::size_t i = 0; i < count; ++i) {
      const auto coeffs = block_at(i, r + 1, s);
      out.push_back({"poly:" + text::join_symbols(coeffs), poly_to_blockmap(ShiftPolynomial(ring, coeffs))});
    }
    return out;
  }
  if (item.starts_with("file:")) {
    BlockMap map = parse_block_map(read_file(std::string(item.substr(5))));
    if (map.alphabet() != alphabet) throw Error("map in '" + std::string(item.substr(5)) + "' has the wrong alphabet");
    return {{name, std::move(map)}};
  }
  if (item.starts_with("table:")) {
    const auto parts = text::split(item.substr(6), ':');
    if (parts.size() != 2) throw Error("table generator must be table:<r>:<entries>");
    return {{name, BlockMap(alphabet, text::parse_int<unsigned>(parts[0], "radius"), symbols_in(parts[1], alphabet))}};
  }
  throw Error("unknown generator '" + name + "'");
}

std::vector<NamedMap> parse_generators(std::string_view list, Alphabet alphabet) {
  std::vector<NamedMap> out;
  for (auto item : text::split(list, ';')) {
    if (text::trim(item).empty()) continue;
    for (auto& g : parse_generator(item, alphabet)) out.push_back(std::move(g));
  }
  if (out.empty()) throw Error("no generators given");
  return out;
}

SequenceSource parse_sequence(std::string_view literal) {
  const auto fields = text::parse_fields(literal);
  if (fields.contains("gen")) return LazySequence::parse(literal);
  if (fields.contains("word")) {
    const Alphabet alphabet(text::parse_int<unsigned>(text::require(fields, "s"), "alphabet size"));
    return Word(alphabet, symbols_in(text::require(fields, "word"), alphabet));
  }
  return EventuallyPeriodicSeq::parse(literal);
}

std::string fraction(const BigInt& num, const BigInt& den) {
  if (den == 0) throw Error("zero denominator");
  BigInt g = boost::multiprecision::gcd(num, den);
  if (g == 0) g = 1;
  return BigInt(num / g).str() + "/" + BigInt(den / g).str();
}

// -------------------------------------------------------------- coverage

CoverageReport orbit_coverage(const ExperimentConfig& config) {
  const Alphabet alphabet(static_cast<unsigned>(config.get_bound("s", 0)));
  const auto gens = parse_generators(config.get("gens"), alphabet);
  const SequenceSource seed = parse_sequence(config.get("seed"));
  if (seed.alphabet() != alphabet) throw Error("seed alphabet must match s");
  const auto depth = static_cast<unsigned>(config.get_bound("depth", 1));
  const std::size_t k = config.get_bound("k", 1);
  std::size_t prefix = config.get_bound("prefix", 1024);
  if (const auto limit = seed.limit()) prefix = std::min(prefix, *limit);
  const std::uint64_t cap = cap_from(config);

  const unsigned s = alphabet.size();
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < k; ++i) {
    if (total > cap / s) {
      throw Error("enumeration too large: s^k = " + std::to_string(s) + "^" + std::to_string(k) +
                  " exceeds cap " + std::to_string(cap));
    }
    total *= s;
  }

  CoverageReport report;
  for (const auto& g : gens) report.generators.push_back(g.name);
  report.k = k;
  report.prefix = prefix;

  std::vector<bool> seen(total, false);
  std::uint64_t count = 0;
  auto collect = [&](const Word& w) {
    for (std::size_t i = 0; i + k <= w.size(); ++i) {
      const std::size_t idx = block_index(w.symbols().subspan(i, k), s);
      if (!seen[idx]) {
        seen[idx] = true;
        ++count;
      }
    }
  };
  auto level = [&](unsigned d, std::size_t images) {
    CoverageLevel out{d, images, count, total, {}};
    for (std::size_t idx = 0; idx < total && out.forbidden.size() < 32; ++idx) {
      if (!seen[idx]) out.forbidden.emplace_back(alphabet, block_at(idx, k, s));
    }
    report.levels.push_back(std::move(out));
  };

  std::vector<Symbol> start(prefix);
  for (std::size_t i = 0; i < prefix; ++i) start[i] = seed.at(i);
  std::vector<Word> frontier{Word(alphabet, std::move(start))};
  std::set<std::vector<Symbol>> visited{frontier.front().vec()};
  collect(frontier.front());
  level(0, 1);

  for (unsigned d = 1; d <= depth; ++d) {
    std::vector<Word> next;
    for (const Word& image : frontier) {
      for (const auto& g : gens) {
        if (image.size() < g.map.window()) continue;
        Word out = apply(g.map, image);
        if (visited.insert(out.vec()).second) {
          if (visited.size() > cap) {
            throw Error("enumeration too large: " + std::to_string(visited.size()) +
                        " distinct images at depth " + std::to_string(d) + " exceed cap " + std::to_string(cap));
          }
          next.push_back(std::move(out));
        }
      }
    }
    for (const Word& w : next) collect(w);
    level(d, next.size());
    frontier = std::move(next);
  }
  return report;
}

// ------------------------------------------------------------- commutant

std::string classify(const BlockMap& map) {
  const Alphabet alphabet = map.alphabet();
  if (is_linear(map, RingSpec::modular(alphabet.size()))) return "linear";
  const BlockMap target = normalize(map);
  const unsigned r = target.radius();
  const auto primes = prime_factors(alphabet.size());
  // u = ±prod p^e with total exponent up to 2(r+1); sigma^j for j <= r.
  const unsigned max_exp = 2 * (r + 1);
  std::vector<std::int64_t> units{1};
  for (unsigned p : primes) {
    std::vector<std::int64_t> grown;
    for (std::int64_t u : units) {
      std::int64_t v = u;
      for (unsigned e = 0; e <= max_exp; ++e, v *= p) grown.push_back(v);
    }
    units = std::move(grown);
  }
  for (std::int64_t base : units) {
    unsigned exps = 0;
    std::int64_t rest = base;
    for (unsigned p : primes) {
      while (rest % p == 0) {
        rest /= p;
        ++exps;
      }
    }
    if (exps > max_exp) continue;
    for (std::int64_t u : {base, -base}) {
      const BlockMap mu = mu_u(MulSpec(alphabet, u));
      for (unsigned j = 0; j <= r; ++j) {
        const BlockMap candidate = normalize(compose(BlockMap::shift(alphabet, j), mu));
        if (candidate.radius() == r && candidate.table() == target.table()) return "multiplication-composite";
      }
    }
  }
  return "other";
}

CommutantReport commutant_campaign(const ExperimentConfig& config) {
  const Alphabet alphabet(static_cast<unsigned>(config.get_bound("s", 0)));
  const auto gens = parse_generators(config.get("gens"), alphabet);
  const auto radius = static_cast<unsigned>(config.get_uint("radius", 0));

  CommutantReport report;
  report.s = alphabet.size();
  report.radius = radius;
  for (const auto& g : gens) report.generators.push_back(g.name);
  report.candidates = commutant_candidate_count(alphabet, radius);

  std::vector<BlockMap> maps;
  for (const auto& g : gens) maps.push_back(g.map);
  EnumerationOptions options;
  options.cap = cap_from(config);
  options.threads = static_cast<unsigned>(config.get_uint("threads", 0));
  for (auto& m : enumerate_commutant(maps, alphabet, radius, options)) {
    std::string kind = classify(m);
    report.members.push_back({std::move(m), std::move(kind)});
  }
  return report;
}

// ------------------------------------------------------------- witnesses

ChrInvariantReport chr_invariant_check(const BlockMap& map, std::int64_t range) {
  const TwoSidedBlockMap embedded = embed_one_sided(map);
  const Alphabet alphabet = map.alphabet();
  ChrInvariantReport report;
  std::vector<BiSeq> inputs{BiSeq::constant(alphabet, 0)};
  for (std::int64_t i = -range; i <= range; ++i) inputs.push_back(BiSeq::unit(alphabet, i));
  for (const BiSeq& x : inputs) {
    const BiSeq image = apply2(embedded, x);
    ++report.checked;
    if (!(image == x)) {
      report.pass = false;
      report.input = canonicalize(x).to_string();
      report.image = image.to_string();
      break;
    }
  }
  return report;
}

bool WitnessReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const WitnessCheck& c) { return c.pass; });
}

WitnessReport witness_suite(const ExperimentConfig& config) {
  const std::string sabotage = config.get_or("sabotage", "none");
  if (sabotage != "none" && sabotage != "power-prime" && sabotage != "p-lambda" && sabotage != "chr" &&
      sabotage != "all") {
    throw Error("sabotage must be none, power-prime, p-lambda, chr or all");
  }
  auto sabotaged = [&](std::string_view name) { return sabotage == name || sabotage == "all"; };
  WitnessReport report;

  {
    PowerPrimeOptions options;
    options.p = static_cast<unsigned>(config.get_bound("pm.p", 2));
    options.m = static_cast<unsigned>(config.get_bound("pm.m", 2));
    options.steps = config.get_bound("pm.steps", 50);
    options.prefix_len = config.get_bound("pm.prefix", 2000);
    if (sabotaged("power-prime")) {
      unsigned s = 1;
      for (unsigned i = 0; i < options.m; ++i) s *= options.p;
      const Alphabet alphabet(s);
      const LazySequence source =
          options.p == 2 ? LazySequence::thue_morse(alphabet) : LazySequence::champernowne(alphabet, 2);
      const BlockMap mu = mu_p(alphabet, options.p);
      const std::size_t index = block_index(source.take(mu.window()).symbols(), s);
      options.map = mu.with_entry(index, static_cast<Symbol>(options.p + 1));
    }
    const PowerPrimeReport r = power_prime_witness(options);
    ordered_json detail;
    detail["p"] = options.p;
    detail["m"] = options.m;
    detail["steps"] = r.steps;
    if (r.certificate) {
      detail["certificate"] = {{"step", r.certificate->step},
                               {"position", r.certificate->position},
                               {"digit", r.certificate->digit},
                               {"reason", r.certificate->reason}};
    }
    report.checks.push_back({"power-prime", r.pass, std::move(detail)});
  }

  {
    PLambdaOptions options;
    options.s = static_cast<unsigned>(config.get_bound("pl.s", 6));
    options.p = static_cast<unsigned>(config.get_uint("pl.p", 0));
    options.trials = config.get_bound("pl.trials", 100);
    options.inputs = config.get_bound("pl.inputs", 100);
    options.seed = config.get_uint("pl.seed", 1);
    options.sabotage = sabotaged("p-lambda");
    const PLambdaReport r = p_lambda_witness(options);
    ordered_json detail;
    detail["s"] = options.s;
    detail["p"] = r.p;
    detail["maps_checked"] = r.maps_checked;
    if (!r.pass) {
      detail["certificate"] = {{"map", *r.failing_map},
                               {"input", r.failing_input->to_string()},
                               {"position", *r.failing_position}};
    }
    report.checks.push_back({"p-lambda", r.pass, std::move(detail)});
  }

  {
    const auto r = static_cast<unsigned>(config.get_bound("chr.r", 2));
    std::vector<unsigned> deltas(r, 0);
    if (config.has("chr.deltas")) deltas = text::parse_uint_list(config.get("chr.deltas"), "delta");
    BlockMap map = chr_product_map(deltas, r).map;
    if (sabotaged("chr")) map = map.with_entry(0, 1);
    const ChrInvariantReport result = chr_invariant_check(map, config.get_int("chr.range", 20));
    ordered_json detail;
    detail["r"] = r;
    detail["deltas"] = text::join_symbols(std::vector<Symbol>(deltas.begin(), deltas.end()));
    detail["checked"] = result.checked;
    if (!result.pass) detail["certificate"] = {{"input", *result.input}, {"image", *result.image}};
    report.checks.push_back({"chr-invariant", result.pass, std::move(detail)});
  }
  return report;
}

// -------------------------------------------------------------- lacunary

EventuallyPeriodicSeq lacunary_point(unsigned p, unsigned m, unsigned terms, std::size_t digits) {
  if (!is_prime(p)) throw Error(std::to_string(p) + " is not prime");
  unsigned s = 1;
  for (unsigned i = 0; i < m; ++i) {
    if (s > 256 / p) throw Error("p^m exceeds the largest alphabet");
    s *= p;
  }
  const std::size_t needed = static_cast<std::size_t>(terms) * terms;
  if (needed > digits * m) throw Error("prefix exhausted");
  // Base-p digit at position n (1-based) is 1 exactly when n is a square.
  std::vector<Symbol> prefix(digits, 0);
  for (unsigned i = 1; i <= terms; ++i) {
    const std::size_t pos = static_cast<std::size_t>(i) * i - 1;  // 0-based base-p position
    unsigned weight = 1;
    for (std::size_t j = pos % m + 1; j < m; ++j) weight *= p;
    prefix[pos / m] = static_cast<Symbol>(prefix[pos / m] + weight);
  }
  return canonicalize(EventuallyPeriodicSeq(Alphabet(s), std::move(prefix), {0}));
}

LacunaryReport lacunary_orbit(const ExperimentConfig& config) {
  LacunaryReport report;
  report.p = static_cast<unsigned>(config.get_bound("p", 2));
  report.m = static_cast<unsigned>(config.get_bound("m", 2));
  report.terms = static_cast<unsigned>(config.get_bound("I", 5));
  report.digits = config.get_bound("D", 16);
  const std::size_t steps = config.get_uint("N", 20);

  EventuallyPeriodicSeq x = lacunary_point(report.p, report.m, report.terms, report.digits);
  const BlockMap mu = mu_p(x.alphabet(), report.p);
  std::vector<TorusRational> limits;
  BigInt den = 1;
  for (std::size_t j = 0; j <= report.digits; ++j, den *= report.p) limits.emplace_back(1, den);

  for (std::size_t n = 0; n <= steps; ++n) {
    if (n > 0) x = apply_seq(mu, x);
    LacunaryStep step;
    step.step = n;
    step.value = evaluate(x);
    for (std::size_t j = 0; j < limits.size(); ++j) {
      const auto d = step.value.distance(limits[j]);
      if (j == 0 || d.first * step.distance.second < step.distance.first * d.second) {
        step.distance = d;
        step.nearest = static_cast<unsigned>(j);
      }
    }
    report.steps.push_back(std::move(step));
  }
  return report;
}

// ------------------------------------------------------------- rendering

namespace {

std::string csv_field(const std::string& v) {
  if (v.find_first_of(",\"\n") == std::string::npos) return v;
  std::string out = "\"";
  for (char ch : v) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string csv_line(std::initializer_list<std::string> fields) {
  std::string out;
  bool first = true;
  for (const auto& f : fields) {
    if (!first) out += ',';
    out += csv_field(f);
    first = false;
  }
  return out + "\n";
}

std::string limit_name(unsigned p, unsigned j) {
  return j == 0 ? "0" : std::to_string(p) + "^-" + std::to_string(j);
}

}  // namespace

ordered_json to_json(const CoverageReport& report) {
  ordered_json out;
  out["experiment"] = "coverage";
  out["generators"] = report.generators;
  out["k"] = report.k;
  out["prefix"] = report.prefix;
  out["levels"] = ordered_json::array();
  for (const auto& level : report.levels) {
    ordered_json forbidden = ordered_json::array();
    for (const auto& w : level.forbidden) forbidden.push_back(w.to_string());
    out["levels"].push_back({{"depth", level.depth},
                             {"images", level.images},
                             {"seen", level.seen},
                             {"total", level.total},
                             {"fraction", fraction(level.seen, level.total)},
                             {"forbidden", std::move(forbidden)}});
  }
  return out;
}

std::string to_csv(const CoverageReport& report) {
  std::string out = "depth,images,seen,total,fraction\n";
  for (const auto& l : report.levels) {
    out += csv_line({std::to_string(l.depth), std::to_string(l.images), std::to_string(l.seen),
                     std::to_string(l.total), fraction(l.seen, l.total)});
  }
  return out;
}

ordered_json to_json(const CommutantReport& report) {
  ordered_json out;
  out["experiment"] = "commutant";
  out["s"] = report.s;
  out["radius"] = report.radius;
  out["generators"] = report.generators;
  out["candidates"] = report.candidates;
  out["size"] = report.members.size();
  out["members"] = ordered_json::array();
  for (const auto& m : report.members) {
    out["members"].push_back({{"radius", m.map.radius()}, {"kind", m.kind}, {"map", to_file(m.map)}});
  }
  return out;
}

std::string to_csv(const CommutantReport& report) {
  std::string out = "index,radius,kind,table\n";
  for (std::size_t i = 0; i < report.members.size(); ++i) {
    const auto& m = report.members[i];
    out += csv_line({std::to_string(i), std::to_string(m.map.radius()), m.kind, text::join_symbols(m.map.table(), ' ')});
  }
  return out;
}

ordered_json to_json(const WitnessReport& report) {
  ordered_json out;
  out["experiment"] = "witness";
  out["pass"] = report.pass();
  out["checks"] = ordered_json::array();
  for (const auto& c : report.checks) out["checks"].push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
  return out;
}

std::string to_csv(const WitnessReport& report) {
  std::string out = "check,pass,detail\n";
  for (const auto& c : report.checks) out += csv_line({c.name, c.pass ? "true" : "false", c.detail.dump()});
  return out;
}

ordered_json to_json(const LacunaryReport& report) {
  ordered_json out;
  out["experiment"] = "lacunary";
  out["p"] = report.p;
  out["m"] = report.m;
  out["I"] = report.terms;
  out["D"] = report.digits;
  out["steps"] = ordered_json::array();
  for (const auto& st : report.steps) {
    out["steps"].push_back({{"step", st.step},
                            {"value", st.value.to_string()},
                            {"nearest", limit_name(report.p, st.nearest)},
                            {"distance", fraction(st.distance.first, st.distance.second)}});
  }
  return out;
}

std::string to_csv(const LacunaryReport& report) {
  std::string out = "step,value,nearest,distance\n";
  for (const auto& st : report.steps) {
    out += csv_line({std::to_string(st.step), st.value.to_string(), limit_name(report.p, st.nearest),
                     fraction(st.distance.first, st.distance.second)});
  }
  return out;
}

Outcome run_experiment(const ExperimentConfig& config, std::string_view format) {
  if (format != "json" && format != "csv") throw Error("format must be json or csv");
  const bool json = format == "json";
  auto render = [&](const auto& report) { return json ? to_json(report).dump(2) + "\n" : to_csv(report); };
  const std::string& experiment = config.get("experiment");
  if (experiment == "coverage") return {0, render(orbit_coverage(config))};
  if (experiment == "commutant") return {0, render(commutant_campaign(config))};
  if (experiment == "lacunary") return {0, render(lacunary_orbit(config))};
  if (experiment == "witness") {
    const WitnessReport report = witness_suite(config);
    return {report.pass() ? 0 : 1, render(report)};
  }
  throw Error("unknown experiment '" + experiment + "'");
}

}  // namespace calab
