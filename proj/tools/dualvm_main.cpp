// dualvm: check, run, observe, expand, dualize and bench over .ct programs.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "dualvm/bench.hpp"
#include "dualvm/duality.hpp"
#include "dualvm/encodings.hpp"
#include "dualvm/kernel.hpp"
#include "dualvm/machine.hpp"
#include "dualvm/parser.hpp"
#include "dualvm/prelude.hpp"
#include "dualvm/pretty.hpp"
#include "dualvm/program.hpp"
#include "json.hpp"

using namespace dualvm;
using Json = nlohmann::ordered_json;

namespace {

enum Exit { kOk = 0, kTypeError = 1, kRuntime = 2, kUsage = 3 };

struct Failure {
  int code;
  std::string kind;
  std::string message;
  Json detail = Json::object();
};

struct Common {
  std::string strategy = "cbv";
  std::uint64_t fuel = kDefaultFuel;
  bool json = false;
  bool no_prelude = false;
  std::string input;
};

Strategy strategy_of(const std::string& s) {
  if (s == "cbv") return Strategy::CBV;
  if (s == "cbn") return Strategy::CBN;
  throw Failure{kUsage, "Usage", "strategy must be cbv or cbn, got " + s};
}

std::uint64_t env_fuel() {
  const char* v = std::getenv("DUALITY_VM_FUEL");
  if (!v || !*v) return kDefaultFuel;
  try {
    std::size_t used = 0;
    unsigned long long n = std::stoull(v, &used);
    if (used != std::string(v).size() || n == 0) throw std::invalid_argument(v);
    return n;
  } catch (const std::exception&) {
    throw Failure{kUsage, "Usage", std::string("DUALITY_VM_FUEL must be a positive integer, got ") + v};
  }
}

std::string read_input(const std::string& path) {
  if (path.empty() || path == "-") {
    return std::string(std::istreambuf_iterator<char>(std::cin), {});
  }
  std::ifstream in(path);
  if (!in) throw Failure{kUsage, "Usage", "cannot read " + path};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Program load(const Common& c, bool need_input = true) {
  Program user;
  if (need_input) {
    std::string text = read_input(c.input);
    user = parse_program(text);
  }
  return c.no_prelude ? user : with_prelude(user);
}

Json stats_json(const RunStats& s) { return Json::parse(stats_to_json(s)); }

std::string stats_text(const RunStats& s) {
  std::ostringstream os;
  os << "steps: " << s.total;
  for (RuleTag r : all_rules())
    if (s.count(r)) os << ' ' << to_string(r) << '=' << s.count(r);
  os << " (" << to_string(s.outcome) << ')';
  return os.str();
}

void print_trace(const RunResult& r, bool json) {
  if (json) {
    std::cout << trace_to_jsonl(r.trace);
  } else {
    for (const auto& e : r.trace) std::cout << e.index << '\t' << to_string(e.rule) << '\t' << e.command_text << '\n';
  }
  if (r.trace_truncated) {
    if (json)
      std::cout << Json{{"truncated", true}}.dump() << '\n';
    else
      std::cout << "... trace truncated after " << r.trace.size() << " steps\n";
  }
}

void fail_outcome(const RunStats& s) {
  if (s.outcome == Outcome::OutOfFuel)
    throw Failure{kRuntime, "OutOfFuel", "out of fuel after " + std::to_string(s.fuel_used) + " steps"};
  if (s.outcome == Outcome::Stuck) throw Failure{kRuntime, "Stuck", s.stuck_reason};
}

void check_well_formed(const Command& c, Strategy s) {
  auto v = well_formed(c, s);
  if (v.empty()) return;
  Json list = Json::array();
  for (const auto& x : v) list.push_back({{"path", x.path}, {"message", x.message}});
  throw Failure{kTypeError, "IllFormed", v.front().path + ": " + v.front().message, {{"violations", list}}};
}

std::string env_text(const TypeEnv& env, const FreeNames& fv) {
  std::ostringstream os;
  bool first = true;
  for (const auto& [x, a] : env.vars) {
    if (!fv.vars.count(x)) continue;
    os << (first ? "" : ", ") << x << " : " << pretty(a);
    first = false;
  }
  for (const auto& [k, a] : env.covars) {
    if (!fv.covars.count(k)) continue;
    os << (first ? "" : ", ") << k << " ÷ " << pretty(a);
    first = false;
  }
  return os.str();
}

// ---- subcommands ----

int cmd_check(const Common& c) {
  Strategy s = strategy_of(c.strategy);
  Program user = parse_program(read_input(c.input));
  Program p = c.no_prelude ? user : with_prelude(user);
  CompiledProgram cp = compile(p, s);
  Json out;
  Json defs = Json::array();
  for (const auto& d : user.defs) defs.push_back({{"name", d.name}, {"type", pretty(d.type)}});
  out["defs"] = defs;
  std::ostringstream text;
  for (const auto& d : user.defs) text << d.name << " : " << pretty(d.type) << '\n';
  if (p.main) {
    Command main = compile_main(p, cp);
    if (auto err = check_command(cp.env, main)) throw TypeCheckFailure(*err);
    std::string env = env_text(cp.env, free_names(main));
    bool is_command = std::holds_alternative<Command>(*p.main);
    std::string judgment = env + (env.empty() ? "" : " ") + "|- main";
    if (!is_command) judgment += " : " + pretty(cp.env.covars.at(kTopCovar));
    text << judgment << '\n';
    out["main"] = judgment;
  }
  out["ok"] = true;
  if (c.json)
    std::cout << out.dump() << '\n';
  else
    std::cout << text.str();
  return kOk;
}

struct RunFlags {
  bool trace = false;
  std::size_t trace_limit = kTraceLimit;
  bool bare = false;
};

int report_run(const Command& start, Strategy s, const Common& c, const RunFlags& f) {
  check_well_formed(start, s);
  RunOptions opts;
  opts.fuel = c.fuel;
  opts.trace = f.trace;
  opts.trace_limit = f.trace_limit;
  opts.pretty.annotations = false;
  RunResult r = run(start, s, opts);
  if (f.trace) print_trace(r, c.json);
  fail_outcome(r.stats);
  RunStats total = r.stats;
  std::uint64_t left = c.fuel > r.stats.fuel_used ? c.fuel - r.stats.fuel_used : 0;
  std::uint64_t value = 0;
  try {
    RunStats forcing;
    value = force_numeral(r.last.producer, s, left, &forcing);
    total.absorb(forcing);
  } catch (const MachineError& e) {
    throw Failure{kRuntime, e.kind == MachineError::Kind::OutOfFuel ? "OutOfFuel" : "Stuck", e.what()};
  }
  std::string final_text = pretty(r.last);
  if (c.json) {
    Json out;
    out["final"] = final_text;
    out["value"] = value;
    out["stats"] = stats_json(r.stats);
    out["forcedStats"] = stats_json(total);
    std::cout << out.dump() << '\n';
  } else {
    std::cout << value << '\n' << final_text << '\n' << stats_text(r.stats) << '\n';
    if (total.total != r.stats.total) std::cout << "with forcing: " << stats_text(total) << '\n';
  }
  return kOk;
}

int cmd_run(const Common& c, const RunFlags& f) {
  Strategy s = strategy_of(c.strategy);
  Program p = load(c);
  CompiledProgram cp = compile(p, s);
  return report_run(compile_main(p, cp), s, c, f);
}

int cmd_observe(const Common& c, const RunFlags& f, const std::string& stream, std::uint64_t depth,
                const std::string& file) {
  Strategy s = strategy_of(c.strategy);
  Common with_file = c;
  with_file.input = file;
  Program p = load(with_file, !file.empty());
  CompiledProgram cp = compile(p, s);
  auto body = parse_body(stream, p);
  if (std::holds_alternative<Command>(body))
    throw Failure{kUsage, "Usage", "observe expects a stream term, not a command"};
  std::variant<Term, SurfaceTerm> t = std::holds_alternative<Term>(body)
                                          ? std::variant<Term, SurfaceTerm>(std::get<Term>(body))
                                          : std::variant<Term, SurfaceTerm>(std::get<SurfaceTerm>(body));
  auto [term, type] = compile_term(t, cp, Type::stream(Type::nat()));
  return report_run(observation(term, depth), s, c, f);
}

std::string program_text(const std::vector<Declaration>& vars, const std::vector<Declaration>& covars,
                         const Command& main, PrettyOptions po) {
  std::ostringstream os;
  for (const auto& v : vars) os << "var " << v.name << " : " << pretty(v.type) << ";\n";
  for (const auto& k : covars) os << "covar " << k.name << " : " << pretty(k.type) << ";\n";
  os << "main = " << pretty(main, po) << ";\n";
  return os.str();
}

// Declarations for the free names of `c` under `env`.
void declarations(const TypeEnv& env, const Command& c, std::vector<Declaration>& vars,
                  std::vector<Declaration>& covars) {
  FreeNames fv = free_names(c);
  for (const auto& [x, a] : env.vars)
    if (fv.vars.count(x)) vars.push_back({x, a});
  for (const auto& [k, a] : env.covars)
    if (fv.covars.count(k) && !(k == kTopCovar && a == Type::nat())) covars.push_back({k, a});
}

int cmd_expand(const Common& c, bool encode_rec, bool encode_corec, bool bare, bool all_defs) {
  Strategy s = strategy_of(c.strategy);
  Program p = load(c);
  CompiledProgram cp = compile(p, s);
  PrettyOptions po;
  po.annotations = !bare;
  auto encode_t = [&](Term t) {
    if (encode_rec) t = encode_recs(t);
    if (encode_corec) t = encode_corecs(t);
    return t;
  };
  auto encode_c = [&](Command m) {
    if (encode_rec) m = encode_recs(m);
    if (encode_corec) m = encode_corecs(m);
    return m;
  };
  Json out;
  std::ostringstream text;
  if (all_defs) {
    Json defs = Json::array();
    for (const auto& name : cp.order) {
      const auto& d = cp.surface.defs.at(name);
      std::string body = pretty(encode_t(d.compiled), po);
      defs.push_back({{"name", name}, {"type", pretty(d.type)}, {"term", body}});
      text << "def " << name << " : " << pretty(d.type) << " =\n  " << body << ";\n";
    }
    out["defs"] = defs;
  }
  if (p.main) {
    Command main = encode_c(compile_main(p, cp));
    std::vector<Declaration> vars, covars;
    declarations(cp.env, main, vars, covars);
    text << program_text(vars, covars, main, po);
    out["main"] = pretty(main, po);
  }
  if (c.json)
    std::cout << out.dump() << '\n';
  else
    std::cout << text.str();
  return kOk;
}

int cmd_dualize(const Common& c, bool bare) {
  Strategy s = strategy_of(c.strategy);
  Program p = load(c);
  if (!p.main) throw ProgramError("program has no main");
  CompiledProgram cp = compile(p, s);
  Command main = compile_main(p, cp);
  TypeEnv used;
  FreeNames fv = free_names(main);
  for (const auto& [x, a] : cp.env.vars)
    if (fv.vars.count(x)) used.vars.insert_or_assign(x, a);
  for (const auto& [k, a] : cp.env.covars)
    if (fv.covars.count(k)) used.covars.insert_or_assign(k, a);
  Command dual = dual_command(main);
  TypeEnv denv = dual_env(used);
  if (auto err = check_command(denv, dual)) throw TypeCheckFailure(*err);
  std::vector<Declaration> vars, covars;
  for (const auto& [x, a] : denv.vars) vars.push_back({x, a});
  for (const auto& [k, a] : denv.covars) covars.push_back({k, a});
  PrettyOptions po;
  po.annotations = !bare;
  if (c.json) {
    Json out;
    out["strategy"] = to_string(dual_strategy(s));
    out["main"] = pretty(dual, po);
    std::cout << out.dump() << '\n';
  } else {
    std::cout << "-- run under " << to_string(dual_strategy(s)) << '\n' << program_text(vars, covars, dual, po);
  }
  return kOk;
}

std::vector<std::uint64_t> parse_sizes(const std::string& text) {
  std::vector<std::uint64_t> out;
  try {
    if (auto dots = text.find(".."); dots != std::string::npos) {
      std::uint64_t lo = std::stoull(text.substr(0, dots)), hi = std::stoull(text.substr(dots + 2));
      for (std::uint64_t n = lo; n <= hi; ++n) out.push_back(n);
    } else {
      std::stringstream ss(text);
      std::string item;
      while (std::getline(ss, item, ',')) out.push_back(std::stoull(item));
    }
  } catch (const std::exception&) {
    throw Failure{kUsage, "Usage", "sizes must look like 1..30 or 1,2,5"};
  }
  if (out.empty()) throw Failure{kUsage, "Usage", "no sizes given"};
  return out;
}

int cmd_bench(const Common& c, const std::string& experiment, const std::string& strategies,
              const std::string& sizes_text, bool csv) {
  std::vector<Strategy> ss;
  if (strategies == "both")
    ss = {Strategy::CBV, Strategy::CBN};
  else
    ss = {strategy_of(strategies)};
  auto sizes = parse_sizes(sizes_text);
  std::vector<std::string> names;
  if (experiment == "all")
    names = experiment_names();
  else
    names = {experiment};
  for (const auto& name : names) {
    for (Strategy s : ss) {
      CostCurve curve;
      try {
        curve = run_experiment(name, s, sizes, c.fuel == kDefaultFuel ? kBenchFuel : c.fuel);
      } catch (const UnknownExperiment& e) {
        throw Failure{kUsage, "UnknownExperiment", e.what()};
      } catch (const std::invalid_argument& e) {
        throw Failure{kUsage, "Usage", e.what()};
      }
      if (c.json)
        std::cout << report_json(curve) << '\n';
      else if (csv)
        std::cout << "# " << name << ' ' << to_string(s) << '\n' << report_csv(curve);
      else
        std::cout << report_table(curve) << '\n';
    }
  }
  return kOk;
}

int emit(const Failure& f, bool json) {
  if (json) {
    Json err = f.detail;
    err["kind"] = f.kind;
    err["message"] = f.message;
    std::cout << Json{{"error", err}}.dump() << '\n';
  } else {
    std::cerr << "error: " << f.kind << ": " << f.message << '\n';
  }
  return f.code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Uniform abstract machine for System T with streams"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  Common common;
  RunFlags flags;
  bool json_flag = false;

  auto add_common = [&](CLI::App* sub, bool input) {
    sub->add_option("--strategy,-s", common.strategy, "cbv or cbn")->check(CLI::IsMember({"cbv", "cbn"}));
    sub->add_option("--fuel", common.fuel, "step budget (default 1000000, or $DUALITY_VM_FUEL)")
        ->check(CLI::PositiveNumber);
    sub->add_flag("--json", json_flag, "machine-readable output");
    sub->add_flag("--no-prelude", common.no_prelude, "do not load the standard prelude");
    if (input) sub->add_option("file", common.input, "program file (default: stdin)");
  };
  auto add_run_flags = [&](CLI::App* sub) {
    sub->add_flag("--trace", flags.trace, "print every machine step");
    sub->add_option("--trace-limit", flags.trace_limit, "maximum trace lines");
  };

  auto* check = app.add_subcommand("check", "type-check a program");
  add_common(check, true);

  auto* runc = app.add_subcommand("run", "run main and force the result");
  add_common(runc, true);
  add_run_flags(runc);

  std::uint64_t depth = 0;
  std::string stream, observe_file;
  auto* observe = app.add_subcommand("observe", "ask a stream for one element");
  observe->add_option("--depth,-d", depth, "number of tails before the head")->required();
  observe->add_option("stream", stream, "stream term, e.g. zeroes or 'countDown 5'")->required();
  observe->add_option("--file,-f", observe_file, "program with extra definitions");
  add_common(observe, false);
  add_run_flags(observe);

  bool encode_rec = false, encode_corec = false, bare = false, all_defs = false;
  auto* expand = app.add_subcommand("expand", "print the machine-language form");
  add_common(expand, true);
  expand->add_flag("--encode-rec", encode_rec, "express recursors by iteration over pairs");
  expand->add_flag("--encode-corec", encode_corec, "express corecursors by coiteration over sums");
  expand->add_flag("--bare", bare, "omit type annotations");
  expand->add_flag("--defs", all_defs, "also print every compiled definition");

  auto* dualize = app.add_subcommand("dualize", "print the dual program");
  add_common(dualize, true);
  dualize->add_flag("--bare", bare, "omit type annotations");

  std::string experiment = "all", strategies = "both", sizes = "1..30";
  bool csv = false;
  auto* bench = app.add_subcommand("bench", "step-count experiments");
  bench->add_option("experiment", experiment, "experiment name or 'all'");
  bench->add_option("--strategy,-s", strategies, "cbv, cbn or both")
      ->check(CLI::IsMember({"cbv", "cbn", "both"}));
  bench->add_option("--sizes", sizes, "range a..b or list a,b,c");
  bench->add_option("--fuel", common.fuel, "step budget per run (default 10000000)")->check(CLI::PositiveNumber);
  bench->add_flag("--json", json_flag, "one JSON object per curve");
  bench->add_flag("--csv", csv, "CSV instead of a table");

  try {
    common.fuel = env_fuel();
  } catch (const Failure& f) {
    return emit(f, false);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }
  common.json = json_flag;

  try {
    if (*check) return cmd_check(common);
    if (*runc) return cmd_run(common, flags);
    if (*observe) return cmd_observe(common, flags, stream, depth, observe_file);
    if (*expand) return cmd_expand(common, encode_rec, encode_corec, bare, all_defs);
    if (*dualize) return cmd_dualize(common, bare);
    if (*bench) return cmd_bench(common, experiment, strategies, sizes, csv);
  } catch (const Failure& f) {
    return emit(f, common.json);
  } catch (const ParseError& e) {
    return emit(Failure{kUsage, "ParseError", e.what(), {{"line", e.line}, {"col", e.col}}}, common.json);
  } catch (const TypeCheckFailure& e) {
    Json d{{"type_error", to_string(e.error.kind)}, {"path", e.error.path}};
    if (e.error.expected) d["expected"] = pretty(*e.error.expected);
    if (e.error.found) d["found"] = pretty(*e.error.found);
    return emit(Failure{kTypeError, to_string(e.error.kind), e.what(), d}, common.json);
  } catch (const NotDualizable& e) {
    return emit(Failure{kTypeError, "NotDualizable", e.what(), {{"path", e.path}}}, common.json);
  } catch (const ProgramError& e) {
    return emit(Failure{kUsage, "ProgramError", e.what()}, common.json);
  } catch (const MachineError& e) {
    return emit(Failure{kRuntime, e.kind == MachineError::Kind::OutOfFuel ? "OutOfFuel" : "Stuck", e.what()},
                common.json);
  } catch (const std::exception& e) {
    return emit(Failure{kUsage, "Error", e.what()}, common.json);
  }
  return kUsage;
}
