// One PASS/FAIL line per acceptance criterion.
//
//   acceptance                   exit 0 iff every criterion passes
//   acceptance --expect-fail 5,6 exit 0 iff exactly those criteria fail

#include <algorithm>
#include <chrono>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "corpus.hpp"
#include "dualvm/bench.hpp"
#include "dualvm/duality.hpp"
#include "dualvm/encodings.hpp"
#include "dualvm/kernel.hpp"
#include "dualvm/machine.hpp"
#include "dualvm/pretty.hpp"
#include "dualvm/prelude.hpp"
#include "dualvm/surface.hpp"
#include "dualvm/typecheck.hpp"
#include "generators.hpp"

using namespace dualvm;
using namespace dualvm::build;
using dualvm::testing::observe_command;
using dualvm::testing::prelude_def;
using Clock = std::chrono::steady_clock;

namespace {

constexpr Strategy kBoth[] = {Strategy::CBV, Strategy::CBN};

// Collects the first few problems of a criterion.
struct Check {
  std::vector<std::string> problems;
  std::size_t checks = 0;

  void expect(bool ok, const std::function<std::string()>& what) {
    ++checks;
    if (!ok && problems.size() < 5) problems.push_back(what());
  }
  bool ok() const { return problems.empty(); }
};

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::string fmt_ms(double ms) {
  std::ostringstream os;
  os.precision(3);
  os << std::fixed << ms << " ms";
  return os.str();
}

std::vector<std::uint64_t> range(std::uint64_t lo, std::uint64_t hi) {
  std::vector<std::uint64_t> v(hi - lo + 1);
  std::iota(v.begin(), v.end(), lo);
  return v;
}

template <class T>
std::string join(const std::vector<T>& xs) {
  std::ostringstream os;
  for (std::size_t i = 0; i < xs.size(); ++i) os << (i ? "," : "") << xs[i];
  return os.str();
}

TypeEnv top_env() {
  TypeEnv env;
  env.covars.insert_or_assign(kTopCovar, Type::nat());
  return env;
}

Command apply(Strategy s, const std::string& f, const std::vector<std::uint64_t>& args) {
  CoTerm k = covar(kTopCovar);
  for (auto it = args.rbegin(); it != args.rend(); ++it) k = call(numeral(*it), k);
  return cut(prelude_def(s, f), k);
}

std::optional<std::uint64_t> value_of(const Command& c, Strategy s, RunStats* stats = nullptr) {
  auto ev = evaluate(c, s);
  if (stats) *stats = ev.result.stats;
  return ev.value;
}

// ---------------------------------------------------------------------------

Check criterion1(std::string& detail) {
  Check ck;
  Command c = apply(Strategy::CBV, "plus", {2, 3});
  run(c, Strategy::CBV);  // warm caches
  auto t0 = Clock::now();
  auto r = run(c, Strategy::CBV, RunOptions{kDefaultFuel, true});
  double ms = ms_since(t0);
  std::map<RuleTag, int> seen;
  for (const auto& e : r.trace) ++seen[e.rule];
  ck.expect(r.stats.outcome == Outcome::Final, [&] { return std::string("not Final"); });
  ck.expect(alpha_eq(r.last, cut(succ(succ(numeral(3))), covar(kTopCovar))),
            [&] { return "final command " + pretty(r.last); });
  ck.expect(force_numeral(r.last.producer, Strategy::CBV) == 5, [] { return std::string("answer is not 5"); });
  ck.expect(seen[RuleTag::BetaSucc] == 2, [&] { return "beta_succ x" + std::to_string(seen[RuleTag::BetaSucc]); });
  ck.expect(seen[RuleTag::BetaZero] == 1, [&] { return "beta_zero x" + std::to_string(seen[RuleTag::BetaZero]); });
  ck.expect(seen[RuleTag::BetaArrow] == 2, [&] { return "beta_arrow x" + std::to_string(seen[RuleTag::BetaArrow]); });
  ck.expect(ms < 1.0, [&] { return "took " + fmt_ms(ms); });
  detail = std::to_string(r.trace.size()) + " steps, " + fmt_ms(ms);
  return ck;
}

Check criterion2(std::string& detail) {
  Check ck;
  auto t0 = Clock::now();
  for (Strategy s : kBoth) {
    for (std::uint64_t n = 1; n <= 200; ++n) {
      RunStats st;
      auto v = value_of(apply(s, "pred", {n}), s, &st);
      ck.expect(v && *v == n - 1, [&] { return "pred " + std::to_string(n) + " (" + to_string(s) + ")"; });
      std::uint64_t want = s == Strategy::CBN ? 1 : n;
      ck.expect(st.count(RuleTag::BetaSucc) == want, [&] {
        return "pred " + std::to_string(n) + " (" + to_string(s) + ") beta_succ x" +
               std::to_string(st.count(RuleTag::BetaSucc));
      });
    }
  }
  double ms = ms_since(t0);
  ck.expect(ms < 100.0, [&] { return "took " + fmt_ms(ms); });
  detail = "n = 1..200, " + fmt_ms(ms);
  return ck;
}

Check criterion3(std::string& detail) {
  Check ck;
  for (Strategy s : kBoth) {
    Term native = prelude_def(s, "pred");
    Term encoded = encode_recs(native);
    std::vector<std::int64_t> counts;
    for (std::uint64_t n = 0; n <= 20; ++n) {
      RunStats st;
      auto e = value_of(cut(encoded, call(numeral(n), covar(kTopCovar))), s, &st);
      auto v = value_of(cut(native, call(numeral(n), covar(kTopCovar))), s);
      ck.expect(e && v && *e == *v, [&] { return "disagree at " + std::to_string(n) + " (" + to_string(s) + ")"; });
      ck.expect(st.count(RuleTag::BetaSucc) == n, [&] {
        return "beta_succ x" + std::to_string(st.count(RuleTag::BetaSucc)) + " at " + std::to_string(n) + " (" +
               to_string(s) + ")";
      });
      counts.push_back(static_cast<std::int64_t>(st.count(RuleTag::BetaSucc)));
    }
    ck.expect(classify(counts) == GrowthClass::Linear,
              [&] { return std::string("class ") + to_string(classify(counts)) + " (" + to_string(s) + ")"; });
  }
  detail = "n = 0..20";
  return ck;
}

// nats as a coalgebra on plain integers: head reads the seed, tail adds one.
std::uint64_t nats_by_hand(std::uint64_t k) {
  std::uint64_t seed = 0;
  for (std::uint64_t i = 0; i < k; ++i) seed = seed + 1;
  return seed;
}

// n, n-1, ..., 1, 0, 0, ...
std::uint64_t count_down_by_hand(std::uint64_t n, std::uint64_t k) {
  std::vector<std::uint64_t> xs;
  for (std::uint64_t i = n; i >= 1; --i) xs.push_back(i);
  return k < xs.size() ? xs[k] : 0;
}

Check criterion4(std::string& detail) {
  Check ck;
  for (Strategy s : kBoth) {
    auto obs = [&](const std::string& def, const std::vector<std::uint64_t>& args, std::uint64_t k) {
      return value_of(observe_command(s, def, args, k), s);
    };
    for (std::uint64_t k = 0; k <= 10; ++k) {
      auto z = obs("zeroes", {}, k);
      ck.expect(z && *z == 0, [&] { return "zeroes @" + std::to_string(k) + " (" + to_string(s) + ")"; });
      auto n = obs("nats", {}, k);
      ck.expect(n && *n == nats_by_hand(k), [&] { return "nats @" + std::to_string(k) + " (" + to_string(s) + ")"; });
      for (std::uint64_t m = 0; m <= 10; ++m) {
        auto c = obs("countDown", {m}, k);
        ck.expect(c && *c == count_down_by_hand(m, k), [&] {
          return "countDown " + std::to_string(m) + " @" + std::to_string(k) + " (" + to_string(s) + ") = " +
                 (c ? std::to_string(*c) : "?");
        });
      }
    }
  }
  detail = std::to_string(ck.checks) + " observations";
  return ck;
}

std::vector<std::int64_t> first_differences(const std::vector<std::int64_t>& xs) {
  std::vector<std::int64_t> d;
  for (std::size_t i = 1; i < xs.size(); ++i) d.push_back(xs[i] - xs[i - 1]);
  return d;
}

Check criterion5(std::string& detail) {
  Check ck;
  auto v = run_experiment("scons-overhead", Strategy::CBV, range(1, 30)).totals();
  auto n = run_experiment("scons-overhead", Strategy::CBN, range(1, 30)).totals();
  auto dv = first_differences(v);
  auto dn = first_differences(n);
  ck.expect(std::all_of(dv.begin(), dv.end(), [](auto d) { return d == 0; }),
            [&] { return "cbv differences " + join(dv); });
  ck.expect(std::all_of(dn.begin(), dn.end(), [](auto d) { return d > 0; }),
            [&] { return "cbn not strictly increasing, differences " + join(dn); });
  ck.expect(std::all_of(dn.begin(), dn.end(), [&](auto d) { return d == dn.front(); }),
            [&] { return "cbn first difference not constant " + join(dn); });
  detail = "cbv overhead " + std::to_string(v.front()) + ", cbn " + std::to_string(n.front()) + ".." +
           std::to_string(n.back());
  return ck;
}

Check criterion6(std::string& detail) {
  Check ck;
  auto v = classify(run_experiment("countNow", Strategy::CBV, range(2, 30)));
  auto n = classify(run_experiment("countNow", Strategy::CBN, range(2, 30)));
  ck.expect(v == GrowthClass::Linear, [&] { return std::string("cbv ") + to_string(v); });
  ck.expect(n == GrowthClass::Quadratic, [&] { return std::string("cbn ") + to_string(n); });
  detail = std::string("cbv ") + to_string(v) + ", cbn " + to_string(n);
  return ck;
}

Check criterion7(std::string& detail) {
  Check ck;
  const Type snat = Type::stream(Type::nat());
  for (Strategy s : kBoth) {
    Term native = prelude_def(s, "scons");
    Term encoded = encode_corecs(native);
    std::vector<Term> streams = {
        prelude_def(s, "zeroes"),
        prelude_def(s, "nats"),
        mu("k", cut(prelude_def(s, "countDown"), call(numeral(9), covar("k"))), snat),
    };
    for (std::size_t i = 0; i < streams.size(); ++i) {
      for (std::uint64_t d = 0; d <= 15; ++d) {
        auto over = [&](const Term& sc) {
          return cut(streams[i], mutilde("s", cut(sc, call(numeral(7), call(var("s"), tails(d, head(covar(kTopCovar)))))),
                                         snat));
        };
        auto a = value_of(over(encoded), s);
        auto b = value_of(over(native), s);
        ck.expect(a && b && *a == *b, [&] {
          return "stream " + std::to_string(i) + " depth " + std::to_string(d) + " (" + to_string(s) + ")";
        });
      }
    }
  }
  auto enc = run_experiment("corec-via-coiter", Strategy::CBV, range(1, 15)).counts(RuleTag::BetaTail);
  auto nat = run_experiment("scons-overhead", Strategy::CBV, range(1, 15)).counts(RuleTag::BetaTail);
  auto de = first_differences(enc);
  auto dn = first_differences(nat);
  ck.expect(std::all_of(de.begin(), de.end(), [&](auto d) { return d == de.front() && d > 0; }),
            [&] { return "encoded beta_tail differences " + join(de); });
  ck.expect(std::all_of(dn.begin(), dn.end(), [](auto d) { return d == 0; }),
            [&] { return "native beta_tail differences " + join(dn); });
  detail = "extra beta_tail over zeroes, encoded " + join(enc) + "; native " + std::to_string(nat.front());
  return ck;
}

std::vector<Command> safety_corpus(Strategy s) {
  std::vector<Command> all;
  for (const auto& item : dualvm::testing::prelude_corpus(s)) all.push_back(item.command);
  for (auto& c : dualvm::testing::nat_fuzz_corpus(500, 20261015)) all.push_back(std::move(c));
  return all;
}

Check criterion8(std::string& detail) {
  Check ck;
  auto t0 = Clock::now();
  std::size_t commands = 0, stuck = 0;
  for (Strategy s : kBoth) {
    auto corpus = safety_corpus(s);
    ck.expect(corpus.size() >= 525, [&] { return "corpus has " + std::to_string(corpus.size()); });
    for (const auto& c : corpus) {
      ++commands;
      auto err = check_command(top_env(), c);
      ck.expect(!err, [&] { return "ill typed: " + pretty(c); });
      auto r = run(c, s, RunOptions{1000000});
      if (r.stats.outcome == Outcome::Stuck) ++stuck;
      bool final_shape = (r.last.producer.is<Zero>() || r.last.producer.is<Succ>()) &&
                         r.last.consumer.is<CoVar>() && r.last.consumer.as<CoVar>()->name == kTopCovar;
      ck.expect(r.stats.outcome == Outcome::Final && final_shape, [&] {
        return std::string(to_string(r.stats.outcome)) + " (" + to_string(s) + "): " + pretty(c);
      });
    }
  }
  double ms = ms_since(t0);
  ck.expect(stuck == 0, [&] { return std::to_string(stuck) + " stuck"; });
  ck.expect(ms < 30000.0, [&] { return "took " + fmt_ms(ms); });
  detail = std::to_string(commands) + " runs, " + fmt_ms(ms);
  return ck;
}

Check criterion9(std::string& detail) {
  Check ck;
  std::size_t steps = 0;
  for (Strategy s : kBoth) {
    for (const auto& c : safety_corpus(s)) {
      Command cur = c;
      for (std::size_t i = 0; i < 1000000; ++i) {
        auto o = step(cur, s);
        if (!std::holds_alternative<Stepped>(o)) break;
        cur = std::get<Stepped>(o).next;
        ++steps;
        auto err = check_command(top_env(), cur);
        ck.expect(!err, [&] { return err->describe() + " after " + pretty(c); });
        if (err) break;
      }
    }
  }
  detail = std::to_string(steps) + " steps checked";
  return ck;
}

Check criterion10(std::string& detail) {
  Check ck;
  auto corpus = dualvm::testing::dual_fuzz_corpus(150, 20261015);
  std::size_t steps = 0;
  for (const auto& oc : corpus) {
    const Command& c = oc.command;
    ck.expect(!check_command(oc.env, c), [&] { return "ill typed: " + pretty(c); });
    Command d = dual_command(c);
    ck.expect(alpha_eq(dual_command(d), c), [&] { return "not an involution: " + pretty(c); });
    auto err = check_command(dual_env(oc.env), d);
    ck.expect(!err, [&] { return "dual ill typed: " + pretty(d); });
    for (Strategy s : kBoth) {
      Command x = c, y = d;
      bool done = false;
      for (std::size_t i = 0; i < 100000 && !done; ++i) {
        auto o = step(x, s);
        auto od = step(y, dual_strategy(s));
        bool a = std::holds_alternative<Stepped>(o), b = std::holds_alternative<Stepped>(od);
        ck.expect(a == b, [&] { return "lockstep broke at step " + std::to_string(i) + ": " + pretty(c); });
        if (!a || !b) {
          done = true;
          break;
        }
        const auto& sa = std::get<Stepped>(o);
        const auto& sb = std::get<Stepped>(od);
        ck.expect(dual_rule(sa.rule) == sb.rule,
                  [&] { return std::string("rule ") + to_string(sa.rule) + " vs " + to_string(sb.rule); });
        ck.expect(alpha_eq(sb.next, dual_command(sa.next)),
                  [&] { return "states diverge at step " + std::to_string(i) + ": " + pretty(c); });
        x = sa.next;
        y = sb.next;
        ++steps;
      }
      ck.expect(done, [&] { return "no normal form: " + pretty(c); });
    }
  }
  detail = std::to_string(corpus.size()) + " commands, " + std::to_string(steps) + " paired steps";
  return ck;
}

const std::map<std::string, SurfaceTerm>& surface_defs() {
  static const auto defs = [] {
    std::map<std::string, SurfaceTerm> m;
    for (const auto& d : prelude().defs)
      if (auto b = std::get_if<SurfaceTerm>(&d.body)) m.insert_or_assign(d.name, *b);
    return m;
  }();
  return defs;
}

std::uint64_t arithmetic(const std::string& f, std::uint64_t a, std::uint64_t b) {
  if (f == "plus") return a + b;
  if (f == "times") return a * b;
  if (f == "pred") return a == 0 ? 0 : a - 1;
  std::uint64_t r = 1;
  for (std::uint64_t i = 2; i <= a; ++i) r *= i;
  return r;
}

Check criterion11(std::string& detail) {
  Check ck;
  for (Strategy s : kBoth) {
    const auto& env = dualvm::testing::compiled_prelude(s).surface;
    for (std::string f : {"plus", "times", "pred", "fact"}) {
      bool binary = f == "plus" || f == "times";
      for (std::uint64_t a = 0; a <= 6; ++a) {
        for (std::uint64_t b = 0; b <= (binary ? 6u : 0u); ++b) {
          SurfaceTerm m = surface::app(surface::ref(f), surface::num(a));
          if (binary) m = surface::app(m, surface::num(b));
          std::uint64_t ref = reference_numeral(desugar(m, surface_defs()), s);
          Term t = translate(m, s, env, Type::nat());
          auto got = value_of(cut(t, covar(kTopCovar)), s);
          std::string label = f + " " + std::to_string(a) + (binary ? " " + std::to_string(b) : "") + " (" +
                              to_string(s) + ")";
          ck.expect(got && *got == ref, [&] {
            return label + ": reference " + std::to_string(ref) + ", machine " + (got ? std::to_string(*got) : "?");
          });
          ck.expect(ref == arithmetic(f, a, b), [&] { return label + ": reference " + std::to_string(ref); });
        }
      }
    }
  }
  detail = std::to_string(ck.checks / 2) + " comparisons";
  return ck;
}

struct Criterion {
  int id;
  const char* title;
  Check (*fn)(std::string&);
};

const Criterion kCriteria[] = {
    {1, "golden trace of plus 2 3", criterion1},
    {2, "pred cost", criterion2},
    {3, "recursion through iteration", criterion3},
    {4, "stream observation", criterion4},
    {5, "scons overhead", criterion5},
    {6, "countNow growth", criterion6},
    {7, "corecursion through coiteration", criterion7},
    {8, "type safety and termination", criterion8},
    {9, "subject reduction", criterion9},
    {10, "duality", criterion10},
    {11, "reference interpreter agreement", criterion11},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance checks"};
  std::vector<int> expect_fail;
  std::vector<int> only;
  app.add_option("--expect-fail", expect_fail, "criteria expected to fail")->delimiter(',');
  app.add_option("--only", only, "run only these criteria")->delimiter(',');
  CLI11_PARSE(app, argc, argv);

  std::set<int> failed;
  auto start = Clock::now();
  for (const auto& c : kCriteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    std::string detail;
    Check ck;
    try {
      ck = c.fn(detail);
    } catch (const std::exception& e) {
      ck.problems.push_back(std::string("exception: ") + e.what());
    }
    if (!ck.ok()) failed.insert(c.id);
    std::cout << (ck.ok() ? "PASS" : "FAIL") << " criterion " << c.id << ": " << c.title;
    if (!detail.empty()) std::cout << " [" << detail << "]";
    std::cout << '\n';
    for (const auto& p : ck.problems) std::cout << "    " << p << '\n';
    std::cout.flush();
  }
  std::cout << "total " << fmt_ms(ms_since(start)) << '\n';

  std::set<int> expected;
  for (int id : expect_fail)
    if (only.empty() || std::find(only.begin(), only.end(), id) != only.end()) expected.insert(id);
  if (failed == expected) return 0;
  std::cout << "failed {" << join(std::vector<int>(failed.begin(), failed.end())) << "}, expected {"
            << join(std::vector<int>(expected.begin(), expected.end())) << "}\n";
  return 1;
}
