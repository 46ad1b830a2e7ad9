#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "calab/ca1d.hpp"
#include "calab/mulca.hpp"
#include "calab/symcore.hpp"

namespace calab {

/// Flat key=value settings. Serialized as sorted `key=value` lines, so
/// parse(serialize()) reproduces the same text byte for byte.
class ExperimentConfig {
 public:
  ExperimentConfig() = default;

  /// One `key=value` per line; blank lines and lines starting with '#' are
  /// skipped. Later duplicates win.
  static ExperimentConfig parse(std::string_view text);
  static ExperimentConfig load(const std::string& path);
  std::string serialize() const;

  void set(std::string key, std::string value);
  bool has(std::string_view key) const;
  const std::string& get(std::string_view key) const;
  std::string get_or(std::string_view key, std::string fallback) const;
  std::uint64_t get_uint(std::string_view key, std::uint64_t fallback) const;
  /// Same as get_uint but rejects 0.
  std::uint64_t get_bound(std::string_view key, std::uint64_t fallback) const;
  std::int64_t get_int(std::string_view key, std::int64_t fallback) const;
  bool get_flag(std::string_view key) const;

  const std::map<std::string, std::string, std::less<>>& entries() const { return entries_; }

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;

 private:
  std::map<std::string, std::string, std::less<>> entries_;
};

struct NamedMap {
  std::string name;
  BlockMap map;
};

/// One generator: id, zero, mirror, sigma, sigma^k, mu:<u>, chr:<d,...>,
/// poly:<c_0,...>, file:<path>, table:<r>:<entries>. linear:<r> expands to
/// every linear map of radius <= r, so the result may hold several maps.
std::vector<NamedMap> parse_generator(std::string_view item, Alphabet alphabet);
/// ';'-separated list of generator items.
std::vector<NamedMap> parse_generators(std::string_view list, Alphabet alphabet);

/// `s= pre= cyc=` for eventually periodic, `s= gen=` for generated,
/// `s= word=` for a finite word.
SequenceSource parse_sequence(std::string_view literal);

/// Fraction text num/den in lowest terms (not reduced mod 1).
std::string fraction(const BigInt& num, const BigInt& den);

struct CoverageLevel {
  unsigned depth = 0;
  std::size_t images = 0;  ///< distinct images first reached at this depth
  std::uint64_t seen = 0;  ///< windows seen at this depth or earlier
  std::uint64_t total = 0;
  std::vector<Word> forbidden;  ///< up to 32 unseen windows, lex order
};

struct CoverageReport {
  std::vector<std::string> generators;
  std::size_t k = 0;
  std::size_t prefix = 0;
  std::vector<CoverageLevel> levels;
};

/// Keys: s, gens, seed, depth, k, prefix, cap.
CoverageReport orbit_coverage(const ExperimentConfig& config);

struct CommutantMember {
  BlockMap map;
  std::string kind;  ///< linear, multiplication-composite or other
};

struct CommutantReport {
  unsigned s = 0;
  unsigned radius = 0;
  std::vector<std::string> generators;
  std::string candidates;
  std::vector<CommutantMember> members;
};

/// Keys: s, gens, radius, threads, cap.
CommutantReport commutant_campaign(const ExperimentConfig& config);

/// linear over Z/sZ first, then sigma^j mu_u for small j and u, else other.
std::string classify(const BlockMap& map);

struct ChrInvariantReport {
  bool pass = true;
  std::size_t checked = 0;
  std::optional<std::string> input;  ///< failing sequence literal
  std::optional<std::string> image;
};

/// The map (two-sided embedding) fixes e^i for |i| <= range and 0-bar.
ChrInvariantReport chr_invariant_check(const BlockMap& map, std::int64_t range);

struct WitnessCheck {
  std::string name;
  bool pass = true;
  nlohmann::ordered_json detail;
};

struct WitnessReport {
  std::vector<WitnessCheck> checks;
  bool pass() const;
};

/// Runs the power-prime, p-Lambda and product-map checks. Keys: pm.p,
/// pm.m, pm.steps, pm.prefix, pl.s, pl.p, pl.trials, pl.inputs, pl.seed,
/// chr.r, chr.deltas, chr.range, sabotage (power-prime, p-lambda, chr or
/// all).
WitnessReport witness_suite(const ExperimentConfig& config);

/// sum_{i=1..I} p^{-i^2} written in base p^m, padded to D digits.
EventuallyPeriodicSeq lacunary_point(unsigned p, unsigned m, unsigned terms, std::size_t digits);

struct LacunaryStep {
  std::size_t step = 0;
  TorusRational value;
  unsigned nearest = 0;  ///< j for the limit point p^-j (j = 0 is 0)
  std::pair<BigInt, BigInt> distance;
};

struct LacunaryReport {
  unsigned p = 0;
  unsigned m = 0;
  unsigned terms = 0;
  std::size_t digits = 0;
  std::vector<LacunaryStep> steps;
};

/// Keys: p, m, I, D, N.
LacunaryReport lacunary_orbit(const ExperimentConfig& config);

nlohmann::ordered_json to_json(const CoverageReport& report);
nlohmann::ordered_json to_json(const CommutantReport& report);
nlohmann::ordered_json to_json(const WitnessReport& report);
nlohmann::ordered_json to_json(const LacunaryReport& report);
std::string to_csv(const CoverageReport& report);
std::string to_csv(const CommutantReport& report);
std::string to_csv(const WitnessReport& report);
std::string to_csv(const LacunaryReport& report);

struct Outcome {
  int exit_code = 0;  ///< 0 pass, 1 a check failed
  std::string text;
};

/// Runs the experiment named by `experiment` (coverage, commutant, witness,
/// lacunary) and renders it as json or csv.
Outcome run_experiment(const ExperimentConfig& config, std::string_view format);

}  // namespace calab
