// Command-line surface: parse/print terms, run bounded reductions with
// traces, canonicalize, translate between the call-by-value and call-by-name
// languages, check simulations, and run the confluence experiments.
//
// Exit codes: 0 success, 1 check failure (a bounded check came back
// negative), 2 usage or parse error. Errors go to stderr; with --json all
// regular output is a single JSON document on stdout.

#include <cstdint>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "alam/ac.hpp"
#include "alam/confluence.hpp"
#include "alam/fragments.hpp"
#include "alam/json_io.hpp"
#include "alam/parse.hpp"
#include "alam/print.hpp"
#include "alam/rng.hpp"
#include "alam/rules.hpp"
#include "alam/search.hpp"
#include "alam/term.hpp"
#include "alam/translate.hpp"

namespace {

using namespace alam;

constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kUsage = 2;

auto read_input(const std::string& arg) -> std::string {
  if (!arg.empty()) return arg;
  std::ostringstream buf;
  buf << std::cin.rdbuf();
  return buf.str();
}

auto parse_term_or_die(const std::string& arg) -> TermPtr {
  return parse(read_input(arg));  // ParseError propagates to main's handler
}

void emit(bool json_mode, const json& j, const std::string& human) {
  if (json_mode)
    std::cout << j.dump(2) << "\n";
  else
    std::cout << human;
}

auto human_step(const StepRecord& s) -> std::string {
  std::string line = "  ";
  line += s.reversed ? "<- " : "-> ";
  line += rule_name_str(s.rule);
  line += " @ " + position_str(s.position);
  if (s.alternatives >= 0)
    line += " (" + std::to_string(s.alternatives) + " candidates)";
  line += "   " + to_string(s.result) + "\n";
  return line;
}

auto human_trace(const ReductionTrace& t) -> std::string {
  std::string out = to_string(t.start) + "\n";
  for (const auto& s : t.steps) out += human_step(s);
  out += std::to_string(t.steps.size()) + " step(s), result: " +
         to_string(t.end()) + "\n";
  return out;
}

// Flag holders. All validation happens before any term is parsed or any
// computation starts.
struct Flags {
  bool json = false;
  std::string term;
  std::string term2;
  std::string lang = "lin-red";
  std::string strategy = "leftmost-outermost";
  std::string level = "ac";
  std::string dir = "cbv2cbn";
  std::string fragment = "none";
  std::string mode = "search";
  bool symmetric = false;
  bool algebraic_only = false;
  std::size_t fuel = 500;
  std::size_t size = 12;
  std::size_t count = 100;
  std::size_t depth = kDefaultJoinDepth;
  std::uint64_t seed = 0;
};

auto lang_or_die(const std::string& s) -> Language {
  auto l = parse_language(s);
  if (!l) throw CLI::ValidationError("--lang", "unknown language: " + s);
  return *l;
}

auto fragment_or_die(const std::string& s) -> Fragment {
  auto f = parse_fragment(s);
  if (!f) throw CLI::ValidationError("--fragment", "unknown fragment: " + s);
  return *f;
}

auto dir_or_die(const std::string& s) -> Direction {
  auto d = parse_direction(s);
  if (!d) throw CLI::ValidationError("--dir", "unknown direction: " + s);
  return *d;
}

auto run_parse(const Flags& f) -> int {
  auto t = parse_term_or_die(f.term);
  json j;
  j["term"] = to_string(t);
  j["size"] = term_size(t);
  j["is_value"] = is_value(t);
  j["free_vars"] = free_vars(t);
  std::string human = to_string(t) + "\n";
  human += "size: " + std::to_string(term_size(t)) + "\n";
  human += std::string("value: ") + (is_value(t) ? "yes" : "no") + "\n";
  human += "free:";
  for (const auto& v : free_vars(t)) human += " " + v;
  human += "\n";
  emit(f.json, j, human);
  return kOk;
}

auto run_print(const Flags& f) -> int {
  auto t = parse_term_or_die(f.term);
  emit(f.json, json{{"term", to_string(t)}}, to_string(t) + "\n");
  return kOk;
}

auto run_reduce(const Flags& f) -> int {
  auto lang = lang_or_die(f.lang);
  auto strat = parse_strategy(f.strategy);
  if (!strat)
    throw CLI::ValidationError("--strategy", "unknown strategy: " + f.strategy);
  auto t = parse_term_or_die(f.term);
  try {
    auto trace = reduce(t, lang, *strat, f.fuel);
    json j;
    j["lang"] = language_str(lang);
    j["trace"] = trace_json(trace);
    j["normal_form"] = to_string(trace.end());
    emit(f.json, j, human_trace(trace));
    return kOk;
  } catch (const FuelExhausted& e) {
    json j;
    j["lang"] = language_str(lang);
    j["error"] = "fuel exhausted";
    j["trace"] = trace_json(e.partial);
    emit(f.json, j,
         human_trace(e.partial) + "fuel exhausted after " +
             std::to_string(e.partial.steps.size()) + " step(s)\n");
    std::cerr << "reduce: " << e.what() << "\n";
    return kCheckFailed;
  }
}

auto run_canon(const Flags& f) -> int {
  auto level = parse_canon_level(f.level);
  if (!level) throw CLI::ValidationError("--level", "unknown level: " + f.level);
  auto t = parse_term_or_die(f.term);
  auto c = ac_canonical(t, *level);
  emit(f.json, json{{"term", to_string(c)}}, to_string(c) + "\n");
  return kOk;
}

auto run_measure(const Flags& f) -> int {
  auto t = parse_term_or_die(f.term);
  auto m = ac_measure(t);
  emit(f.json, json{{"measure", m.str()}}, m.str() + "\n");
  return kOk;
}

auto run_translate(const Flags& f) -> int {
  auto dir = dir_or_die(f.dir);
  auto t = parse_term_or_die(f.term);
  auto out = dir == Direction::CbvToCbn ? wt(t) : cps(t);
  emit(f.json, json{{"term", to_string(out)}}, to_string(out) + "\n");
  return kOk;
}

auto run_simulate(const Flags& f) -> int {
  SimulationOptions opt;
  opt.fragment = fragment_or_die(f.fragment);
  opt.symmetric = f.symmetric;
  if (f.mode == "search")
    opt.mode = SimMode::Search;
  else if (f.mode == "constructive")
    opt.mode = SimMode::Constructive;
  else
    throw CLI::ValidationError("--mode", "unknown mode: " + f.mode);
  auto dir = dir_or_die(f.dir);
  auto t = parse_term_or_die(f.term);
  try {
    auto rep = check_simulation(t, dir, f.fuel, opt);
    json j = simulation_json(rep);
    std::string human = "source:        " + to_string(rep.source) + "\n";
    human += "source value:  " + to_string(rep.source_value) + "\n";
    human += "translated:    " + to_string(rep.translated) + "\n";
    human += "target steps:  " + std::to_string(rep.target_trace.steps.size()) +
             "\n";
    human += "target result: " + to_string(rep.target_trace.end()) + "\n";
    human += "encoded value: " + to_string(rep.encoded_value) + "\n";
    human += std::string("ok:            ") + (rep.ok ? "yes" : "no") + "\n";
    if (rep.indifference_ok)
      human += std::string("indifference:  ") +
               (*rep.indifference_ok ? "yes" : "no") + "\n";
    if (!rep.warning.empty()) human += "warning: " + rep.warning + "\n";
    emit(f.json, j, human);
    return rep.ok ? kOk : kCheckFailed;
  } catch (const FuelExhausted& e) {
    json j;
    j["error"] = "fuel exhausted";
    j["trace"] = trace_json(e.partial);
    emit(f.json, j,
         std::string("fuel exhausted; partial trace:\n") +
             human_trace(e.partial));
    std::cerr << "simulate: " << e.what() << "\n";
    return kCheckFailed;
  }
}

auto run_confluence(const Flags& f) -> int {
  auto lang = lang_or_die(f.lang);
  std::mt19937_64 rng(f.seed);
  GenOptions gen;
  gen.max_size = f.size;
  json failures = json::array();
  std::string human;
  std::size_t failing_terms = 0;
  for (std::size_t i = 0; i < f.count; ++i) {
    auto t = random_term(rng, gen);
    auto fails = local_confluence_check(t, lang, f.depth, f.algebraic_only);
    if (fails.empty()) continue;
    ++failing_terms;
    for (const auto& p : fails) {
      failures.push_back(peak_json(t, p));
      human += "peak at " + to_string(t) + ":\n" + human_step(p.left) +
               human_step(p.right);
    }
  }
  json j;
  j["lang"] = language_str(lang);
  j["count"] = f.count;
  j["max_size"] = f.size;
  j["depth"] = f.depth;
  j["seed"] = f.seed;
  j["algebraic_only"] = f.algebraic_only;
  j["failing_terms"] = failing_terms;
  j["failures"] = std::move(failures);
  human += std::to_string(f.count) + " term(s) checked, " +
           std::to_string(failing_terms) + " with non-joinable peaks\n";
  emit(f.json, j, human);
  return failing_terms == 0 ? kOk : kCheckFailed;
}

auto run_nonconfluence_demo(const Flags& f) -> int {
  auto lang = lang_or_die(f.lang);
  if (is_symmetric(lang))
    throw CLI::ValidationError(
        "--lang", "the divergence witness needs an oriented language");
  auto t = parse_term_or_die(f.term.empty() ? "\\x.x" : f.term);
  const std::string note =
      "endpoints were not joined within the search bound; this certifies "
      "divergence within the bound only, not non-joinability outright";
  try {
    auto [to_zero, to_m] = demonstrate_nonconfluence(t, lang, f.fuel);
    auto join = joinable(to_zero.end(), to_m.end(), lang, 10);
    bool distinct = !ac_equal(to_zero.end(), to_m.end());
    bool witness = distinct && !join.joined;
    json j;
    j["lang"] = language_str(lang);
    j["start"] = to_string(to_zero.start);
    j["trace_to_zero"] = trace_json(to_zero);
    j["trace_to_term"] = trace_json(to_m);
    j["endpoints_ac_equal"] = !distinct;
    j["joined_within_depth_10"] = join.joined;
    j["note"] = note;
    std::string human = "start: " + to_string(to_zero.start) + "\n";
    human += "one reduction:\n" + human_trace(to_zero);
    human += "another reduction:\n" + human_trace(to_m);
    human += std::string("endpoints AC-equal: ") + (distinct ? "no" : "yes") +
             "\n";
    human += std::string("joined within depth 10: ") +
             (join.joined ? "yes" : "no") + "\n";
    human += "note: " + note + "\n";
    emit(f.json, j, human);
    return witness ? kOk : kCheckFailed;
  } catch (const FuelExhausted& e) {
    std::cerr << "nonconfluence-demo: " << e.what() << "\n";
    return kCheckFailed;
  }
}

auto run_trivial_equality_demo(const Flags& f) -> int {
  auto frag = fragment_or_die(f.fragment);
  auto m = parse(f.term.empty() ? "x" : f.term);
  auto n = parse(f.term2.empty() ? "y" : f.term2);
  auto trace = demonstrate_trivial_equality(m, n, frag, f.fuel);
  json j;
  j["fragment"] = frag.name;
  j["left"] = to_string(m);
  j["right"] = to_string(n);
  j["found"] = trace.has_value();
  std::string human;
  if (trace) {
    j["trace"] = trace_json(*trace);
    human = "equality derivation found:\n" + human_trace(*trace);
  } else {
    human = "no derivation: some step leaves the '" + frag.name +
            "' fragment\n";
  }
  emit(f.json, j, human);
  return trace ? kOk : kCheckFailed;
}

auto run_colon_check(const Flags& f) -> int {
  auto dir = dir_or_die(f.dir);
  auto m = parse_term_or_die(f.term);
  auto k = parse(f.term2.empty() ? "\\x.x" : f.term2);
  auto rep = check_colon_lemmas(m, k, dir, f.fuel);
  bool ok = rep.translation_reaches_colon && rep.steps_preserved &&
            rep.value_encoding.value_or(true);
  json j = colon_lemmas_json(rep);
  std::string human = std::string("translation reaches colon form: ") +
                      (rep.translation_reaches_colon ? "yes" : "no") + "\n";
  human += std::string("source steps preserved: ") +
           (rep.steps_preserved ? "yes" : "no") + "\n";
  if (rep.value_encoding)
    human += std::string("value encoding reached: ") +
             (*rep.value_encoding ? "yes" : "no") + "\n";
  emit(f.json, j, human);
  return ok ? kOk : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"algebraic lambda-calculi: reduction, translation, confluence"};
  app.require_subcommand(1);
  Flags f;
  app.add_flag("--json", f.json, "structured JSON output");

  auto add_term = [&](CLI::App* c, const char* what = "term (or stdin)") {
    c->add_option("term", f.term, what);
  };
  auto add_lang = [&](CLI::App* c) {
    c->add_option("--lang", f.lang, "lin-red | lin-eq | alg-red | alg-eq");
  };
  auto add_fuel = [&](CLI::App* c) {
    c->add_option("--fuel", f.fuel, "step/search budget");
  };
  auto add_dir = [&](CLI::App* c) {
    c->add_option("--dir", f.dir, "cbv2cbn | cbn2cbv");
  };

  auto* cparse = app.add_subcommand("parse", "parse a term and describe it");
  add_term(cparse);
  auto* cprint = app.add_subcommand("print", "parse and pretty-print a term");
  add_term(cprint);

  auto* creduce = app.add_subcommand("reduce", "bounded reduction with trace");
  add_term(creduce);
  add_lang(creduce);
  add_fuel(creduce);
  creduce->add_option("--strategy", f.strategy,
                      "leftmost-outermost | exhaustive");

  auto* ccanon = app.add_subcommand("canon", "AC-canonical form");
  add_term(ccanon);
  ccanon->add_option("--level", f.level, "ac | ac+algebraic");

  auto* cmeasure = app.add_subcommand("measure", "termination measure");
  add_term(cmeasure);

  auto* ctrans = app.add_subcommand("translate", "CPS translation");
  add_term(ctrans);
  add_dir(ctrans);

  auto* csim = app.add_subcommand("simulate", "check one simulation instance");
  add_term(csim);
  add_dir(csim);
  add_fuel(csim);
  csim->add_option("--fragment", f.fragment, "none | nonneg | size:N");
  csim->add_option("--mode", f.mode, "search | constructive");
  csim->add_flag("--symmetric", f.symmetric,
                 "target the symmetric (equality) relation");

  auto* cconf = app.add_subcommand("confluence",
                                   "local confluence over random terms");
  add_lang(cconf);
  cconf->add_option("--size", f.size, "max term size");
  cconf->add_option("--count", f.count, "number of random terms");
  cconf->add_option("--depth", f.depth, "join search depth");
  cconf->add_option("--seed", f.seed, "RNG seed");
  cconf->add_flag("--algebraic-only", f.algebraic_only,
                  "exclude beta from peaks and joins");

  auto* cnon = app.add_subcommand("nonconfluence-demo",
                                  "divergence witness for oriented languages");
  add_term(cnon, "term m (default \\x.x)");
  add_lang(cnon);
  add_fuel(cnon);

  auto* ctriv = app.add_subcommand(
      "trivial-equality-demo",
      "derive an equality between unrelated terms, fragment permitting");
  ctriv->add_option("left", f.term, "left term (default x)");
  ctriv->add_option("right", f.term2, "right term (default y)");
  ctriv->add_option("--fragment", f.fragment, "none | nonneg");
  add_fuel(ctriv);

  auto* ccolon = app.add_subcommand("colon-check",
                                    "continuation-composition lemmas");
  add_term(ccolon);
  ccolon->add_option("kont", f.term2, "continuation (default \\x.x)");
  add_dir(ccolon);
  add_fuel(ccolon);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (cparse->parsed()) return run_parse(f);
    if (cprint->parsed()) return run_print(f);
    if (creduce->parsed()) return run_reduce(f);
    if (ccanon->parsed()) return run_canon(f);
    if (cmeasure->parsed()) return run_measure(f);
    if (ctrans->parsed()) return run_translate(f);
    if (csim->parsed()) return run_simulate(f);
    if (cconf->parsed()) return run_confluence(f);
    if (cnon->parsed()) return run_nonconfluence_demo(f);
    if (ctriv->parsed()) return run_trivial_equality_demo(f);
    if (ccolon->parsed()) return run_colon_check(f);
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return kUsage;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kUsage;
  } catch (const NotClosed& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kUsage;
  } catch (const KNotBase& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kCheckFailed;
  }
  return kUsage;
}
