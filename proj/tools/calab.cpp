// calab: command-line front end for the cellular-automata lab.
//
//   calab <verb> [literal] [--config FILE] [--key value | --key=value]...
//                [--format json|csv|text]
//
// Exit status: 0 all checks pass, 1 a check failed, 2 usage or config error.

#include <fstream>
#include <iostream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "calab/ca1d.hpp"
#include "calab/lab.hpp"
#include "calab/linca.hpp"
#include "calab/mulca.hpp"

using namespace calab;
using nlohmann::ordered_json;

namespace {

constexpr std::string_view kUsage = R"(usage: calab <verb> [literal] [--config FILE] [--key value]... [--format json|csv|text]

experiments (json by default):
  coverage   s gens seed depth k [prefix]      orbit window coverage
  commutant  s gens radius [threads]           bounded-radius commutant
  witness    [pm.* pl.* chr.* sabotage]        non-density witnesses
  lacunary   p m I D N                         mu_p orbit of sum p^(-i^2)

single results (text by default):
  mu         s u                               block map of mu_u
  compose    s outer inner                     normalized outer after inner
  eval       <sequence literal>                V(a) as num/den
  poly2ca    <polynomial literal>              block map of a shift polynomial
  ca2poly    s map ring                        polynomial of a linear map
  hit        source target [kmax]              table hitting map
  linhit     source target [ring kmax]         linear hitting map

checks (json by default):
  commute    s a b                             do two maps commute
  represents s u [map trials seed]             V(tau a) = u V(a) on random a
  witness-pm p m [steps prefix sabotage]       digit p+1 never appears
  witness-plambda s [p trials inputs seed sabotage]
                                               linear maps preserve p Lambda_s

generators: id zero mirror sigma sigma^k mu:<u> chr:<d,..> poly:<c,..>
            linear:<r> file:<path> table:<r>:<entries>, joined with ';'
CALAB_CAP overrides the enumeration cap.
)";

struct Usage {
  std::string message;
};

struct Result {
  int code = 0;
  ordered_json json;
  std::string text;  // native output; empty means "use json"
  std::string csv;   // empty means key,value rows from json
};

std::string csv_from_json(const ordered_json& j) {
  std::string out = "key,value\n";
  for (const auto& [key, value] : j.items()) {
    std::string v = value.is_string() ? value.get<std::string>() : value.dump();
    if (v.find_first_of(",\"\n") != std::string::npos) {
      std::string quoted = "\"";
      for (char ch : v) {
        if (ch == '"') quoted += '"';
        quoted += ch;
      }
      v = quoted + "\"";
    }
    out += key + "," + v + "\n";
  }
  return out;
}

Alphabet alphabet_of(const ExperimentConfig& c) {
  return Alphabet(static_cast<unsigned>(c.get_bound("s", 0)));
}

BlockMap single_map(const ExperimentConfig& c, std::string_view key) {
  auto maps = parse_generator(c.get(key), alphabet_of(c));
  if (maps.size() != 1) throw Error("'" + std::string(key) + "' must name a single map");
  return maps.front().map;
}

Result map_result(const BlockMap& map) {
  Result r;
  r.text = to_file(map);
  r.json = {{"s", map.alphabet().size()}, {"radius", map.radius()}, {"map", r.text}};
  return r;
}

Word target_word(const ExperimentConfig& c, Alphabet alphabet) {
  return Word::parse(alphabet, c.get("target"));
}

Result run_verb(const std::string& verb, const ExperimentConfig& c, std::string_view format) {
  if (verb == "mu") return map_result(mu_u(MulSpec(alphabet_of(c), c.get_int("u", 0))));

  if (verb == "compose") return map_result(normalize(compose(single_map(c, "outer"), single_map(c, "inner"))));

  if (verb == "eval") {
    const auto seq = EventuallyPeriodicSeq::parse(c.get("seq"));
    Result r;
    r.text = evaluate(seq).to_string() + "\n";
    r.json = {{"sequence", canonicalize(seq).to_string()}, {"value", evaluate(seq).to_string()}};
    return r;
  }

  if (verb == "poly2ca") return map_result(poly_to_blockmap(ShiftPolynomial::parse(c.get("poly"))));

  if (verb == "ca2poly") {
    const BlockMap map = single_map(c, "map");
    const RingSpec ring = RingSpec::parse(c.get_or("ring", "mod:" + std::to_string(map.alphabet().size())));
    const auto poly = blockmap_to_poly(map, ring);
    Result r;
    r.code = poly ? 0 : 1;
    r.text = poly ? poly->to_string() + "\n" : "not linear over " + ring.to_string() + "\n";
    r.json = {{"linear", poly.has_value()}};
    if (poly) r.json["polynomial"] = poly->to_string();
    return r;
  }

  if (verb == "hit" || verb == "linhit") {
    const SequenceSource source = parse_sequence(c.get("source"));
    const Word target = target_word(c, source.alphabet());
    const std::size_t kmax = c.get_bound("kmax", 64);
    BlockMap map = BlockMap::identity(source.alphabet());
    if (verb == "hit") {
      map = construct_table_hitting(source, target, kmax);
    } else {
      const RingSpec ring = RingSpec::parse(c.get_or("ring", "gf:" + std::to_string(source.alphabet().size())));
      map = construct_linear_hitting(source, target, ring, kmax);
    }
    Result r = map_result(map);
    r.json["target"] = target.to_string();
    return r;
  }

  if (verb == "commute") {
    const auto result = commutes(single_map(c, "a"), single_map(c, "b"));
    Result r;
    r.code = result.commutes ? 0 : 1;
    r.json = {{"commutes", result.commutes}};
    if (result.counterexample) r.json["counterexample"] = result.counterexample->to_string();
    return r;
  }

  if (verb == "represents") {
    const Alphabet alphabet = alphabet_of(c);
    const std::int64_t u = c.get_int("u", 0);
    const BlockMap map = c.has("map") ? single_map(c, "map") : mu_u(MulSpec(alphabet, u));
    const auto report = represents_check(map, u, c.get_bound("trials", 100), c.get_uint("seed", 1));
    Result r;
    r.code = report.pass ? 0 : 1;
    r.json = {{"pass", report.pass}, {"trials", report.trials}, {"checked", report.checked}};
    if (!report.pass) {
      r.json["certificate"] = {{"sequence", report.counterexample->to_string()},
                               {"expected", report.expected->to_string()},
                               {"actual", report.actual->to_string()}};
    }
    return r;
  }

  if (verb == "witness-pm") {
    ExperimentConfig w;
    for (const auto& key : {"p", "m", "steps", "prefix"}) {
      if (c.has(key)) w.set(std::string("pm.") + key, c.get(key));
    }
    if (c.get_flag("sabotage")) w.set("sabotage", "power-prime");
    WitnessReport report = witness_suite(w);
    const WitnessCheck check = report.checks.front();
    Result r;
    r.code = check.pass ? 0 : 1;
    r.json = {{"pass", check.pass}};
    for (const auto& [key, value] : check.detail.items()) r.json[key] = value;
    return r;
  }

  if (verb == "witness-plambda") {
    PLambdaOptions options;
    options.s = static_cast<unsigned>(c.get_bound("s", 6));
    options.p = static_cast<unsigned>(c.get_uint("p", 0));
    options.trials = c.get_bound("trials", 100);
    options.inputs = c.get_bound("inputs", 100);
    options.seed = c.get_uint("seed", 1);
    options.sabotage = c.get_flag("sabotage");
    const PLambdaReport report = p_lambda_witness(options);
    Result r;
    r.code = report.pass ? 0 : 1;
    r.json = {{"pass", report.pass}, {"s", options.s}, {"p", report.p}, {"maps_checked", report.maps_checked}};
    if (!report.pass) {
      r.json["certificate"] = {{"map", *report.failing_map},
                               {"input", report.failing_input->to_string()},
                               {"position", *report.failing_position}};
    }
    return r;
  }

  if (verb == "coverage" || verb == "commutant" || verb == "witness" || verb == "lacunary") {
    ExperimentConfig e = c;
    e.set("experiment", verb);
    const Outcome outcome = run_experiment(e, format == "csv" ? "csv" : "json");
    Result r;
    r.code = outcome.exit_code;
    r.text = outcome.text;
    r.csv = outcome.text;
    return r;
  }

  throw Usage{"unknown verb '" + verb + "'"};
}

// Verbs whose first positional argument fills a key.
std::string positional_key(const std::string& verb) {
  if (verb == "eval") return "seq";
  if (verb == "poly2ca") return "poly";
  return "";
}

bool text_by_default(const std::string& verb) {
  return verb == "mu" || verb == "compose" || verb == "eval" || verb == "poly2ca" || verb == "ca2poly" ||
         verb == "hit" || verb == "linhit";
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  if (args.empty() || args.front() == "--help" || args.front() == "-h") {
    std::cout << kUsage;
    return args.empty() ? 2 : 0;
  }
  const std::string verb = args.front();
  try {
    ExperimentConfig overrides;
    std::string config_path;
    std::vector<std::string> positional;
    for (std::size_t i = 1; i < args.size(); ++i) {
      const std::string& arg = args[i];
      if (!arg.starts_with("--")) {
        positional.push_back(arg);
        continue;
      }
      std::string key = arg.substr(2);
      std::string value;
      if (const auto eq = key.find('='); eq != std::string::npos) {
        value = key.substr(eq + 1);
        key.resize(eq);
      } else if (i + 1 < args.size() && !args[i + 1].starts_with("--")) {
        value = args[++i];
      } else {
        value = "true";  // bare flag
      }
      if (key == "config") {
        config_path = value;
      } else {
        overrides.set(key, value);
      }
    }

    ExperimentConfig config = config_path.empty() ? ExperimentConfig() : ExperimentConfig::load(config_path);
    for (const auto& [key, value] : overrides.entries()) config.set(key, value);
    const std::string key = positional_key(verb);
    if (positional.size() > (key.empty() ? 0u : 1u)) throw Usage{"unexpected argument '" + positional.back() + "'"};
    if (!positional.empty()) config.set(key, positional.front());

    const std::string format = config.get_or("format", text_by_default(verb) ? "text" : "json");
    if (format != "json" && format != "csv" && format != "text") throw Usage{"format must be json, csv or text"};

    const Result result = run_verb(verb, config, format);
    std::string out;
    if (format == "text" && !result.text.empty()) {
      out = result.text;
    } else if (format == "csv") {
      out = result.csv.empty() ? csv_from_json(result.json) : result.csv;
    } else if (!result.json.is_null()) {
      out = result.json.dump(2) + "\n";
    } else {
      out = result.text;
    }

    if (config.has("output")) {
      std::ofstream file(config.get("output"));
      if (!file) throw Error("cannot write '" + config.get("output") + "'");
      file << out;
    } else {
      std::cout << out;
    }
    return result.code;
  } catch (const Usage& e) {
    std::cerr << "calab: " << e.message << "\n\n" << kUsage;
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "calab " << verb << ": " << e.what() << "\n";
    return 2;
  }
}
