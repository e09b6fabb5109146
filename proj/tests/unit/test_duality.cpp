#include <set>

#include "doctest.h"
#include "dualvm/duality.hpp"
#include "dualvm/kernel.hpp"
#include "dualvm/parser.hpp"
#include "generators.hpp"

using namespace dualvm;
using namespace dualvm::build;

namespace {

const std::vector<dualvm::testing::OpenCommand>& corpus() {
  static const auto c = dualvm::testing::dual_fuzz_corpus(150, 17);
  return c;
}

const Type X = Type::atom("X");

}  // namespace

TEST_CASE("types") {
  CHECK(dual_type(Type::numbered(Type::numbered(X))) == Type::stream(Type::stream(Type::atom("X", true))));
  CHECK(dual_type(Type::prod(X, Type::stream(X))) == Type::sum(Type::atom("X", true), Type::numbered(Type::atom("X", true))));
  CHECK_THROWS_AS(dual_type(Type::fn(Type::nat(), Type::nat())), NotDualizable);
  CHECK_THROWS_AS(dual_type(Type::nat()), NotDualizable);
  CHECK_THROWS_AS(dual_type(Type::stream(Type::nat())), NotDualizable);
  for (const auto& oc : corpus()) {
    for (const auto& [n, t] : oc.env.vars) CHECK(dual_type(dual_type(t)) == t);
    for (const auto& [n, t] : oc.env.covars) CHECK(dual_type(dual_type(t)) == t);
  }
}

TEST_CASE("constructors and destructors swap") {
  DualityContext ctx;
  ctx.pair("x", "a");
  CHECK(alpha_eq(dual_term(num_zero(var("x")), ctx), head(covar("a"))));
  CHECK(alpha_eq(dual_term(num_succ(var("x")), ctx), tail(covar("a"))));
  CHECK(alpha_eq(dual_coterm(head(covar("a")), ctx), num_zero(var("x"))));
  CHECK(alpha_eq(dual_term(pair(var("x"), var("y"))), sum_case(covar("x"), covar("y"))));
  CHECK(alpha_eq(dual_coterm(fst(covar("a"))), inl(var("a"))));
  CHECK(alpha_eq(dual_term(mu("a", cut(var("x"), covar("a")))), mutilde("a", cut(var("a"), covar("x")))));
  CHECK(ctx.covar_for("x") == "a");
  CHECK(ctx.var_for("a") == "x");
  CHECK(ctx.covar_for("other") == "other");
}

TEST_CASE("the corecursor and the numbered recursor are dual") {
  Term corec = parse_term("corec { head a -> a | tail b -> g. case [g, tail b] } with y");
  CoTerm rec = parse_coterm("rec { Z a -> a | S b -> g. pair(g, nsucc b) } with y");
  CHECK(alpha_eq(dual_term(corec), rec));
  CHECK(alpha_eq(dual_coterm(rec), corec));
  CHECK(alpha_eq(dual_coterm(dual_term(corec)), corec));
}

TEST_CASE("strategies and rules") {
  CHECK(dual_strategy(Strategy::CBV) == Strategy::CBN);
  CHECK(dual_strategy(Strategy::CBN) == Strategy::CBV);
  for (Strategy s : {Strategy::CBV, Strategy::CBN}) CHECK(dual_strategy(dual_strategy(s)) == s);
  CHECK(dual_rule(RuleTag::Mu) == RuleTag::MuTilde);
  CHECK(dual_rule(RuleTag::BetaNumZero) == RuleTag::BetaHead);
  CHECK(dual_rule(RuleTag::BetaTail) == RuleTag::BetaNumSucc);
  CHECK(dual_rule(RuleTag::BetaFst) == RuleTag::BetaInL);
  CHECK(dual_rule(RuleTag::BetaInR) == RuleTag::BetaSnd);
  CHECK_FALSE(dual_rule(RuleTag::BetaArrow));
  CHECK_FALSE(dual_rule(RuleTag::BetaSucc));
  for (RuleTag r : all_rules())
    if (auto d = dual_rule(r)) CHECK(dual_rule(*d) == r);
}

TEST_CASE("outside the fragment") {
  CHECK_THROWS_AS(dual_term(parse_term("fun x => x")), NotDualizable);
  CHECK_THROWS_AS(dual_coterm(parse_coterm("Z . a")), NotDualizable);
  CHECK_THROWS_AS(dual_term(zero()), NotDualizable);
  Command c = parse_command("< pair(x, S Z) | fst a >");
  CHECK_FALSE(dualizable(c));
  try {
    dual_command(c);
    FAIL("no error");
  } catch (const NotDualizable& e) {
    CHECK_FALSE(e.path.empty());
  }
  CHECK(dualizable(parse_command("< nzero x | rec { Z p -> p | S q -> r. r } with a >")));
}

TEST_CASE("environments") {
  TypeEnv env;
  env.vars.insert_or_assign("x", Type::numbered(X));
  env.covars.insert_or_assign("a", X);
  TypeEnv d = dual_env(env);
  CHECK(d.covars.at("x") == Type::stream(Type::atom("X", true)));
  CHECK(d.vars.at("a") == Type::atom("X", true));
}

TEST_CASE("generated fragment is well typed and well formed") {
  CHECK(corpus().size() >= 100);
  for (const auto& oc : corpus()) {
    CHECK_FALSE(check_command(oc.env, oc.command));
    CHECK(well_formed(oc.command, Strategy::CBV).empty());
    CHECK(well_formed(oc.command, Strategy::CBN).empty());
    CHECK(dualizable(oc.command));
  }
}

TEST_CASE("involution") {
  for (const auto& oc : corpus()) CHECK(alpha_eq(dual_command(dual_command(oc.command)), oc.command));
}

TEST_CASE("typing is preserved under the dual environment") {
  for (const auto& oc : corpus()) {
    auto err = check_command(dual_env(oc.env), dual_command(oc.command));
    CHECK_FALSE(err);
  }
}

TEST_CASE("lockstep simulation") {
  std::size_t steps = 0;
  std::set<RuleTag> seen;
  for (Strategy s : {Strategy::CBV, Strategy::CBN}) {
    for (const auto& oc : corpus()) {
      Command c = oc.command;
      Command d = dual_command(c);
      for (int i = 0; i < 500; ++i) {
        auto o = step(c, s);
        auto od = step(d, dual_strategy(s));
        if (!std::holds_alternative<Stepped>(o)) {
          CHECK_FALSE(std::holds_alternative<Stepped>(od));
          break;
        }
        REQUIRE(std::holds_alternative<Stepped>(od));
        const auto& a = std::get<Stepped>(o);
        const auto& b = std::get<Stepped>(od);
        CHECK(dual_rule(a.rule) == b.rule);
        CHECK(alpha_eq(b.next, dual_command(a.next)));
        seen.insert(a.rule);
        c = a.next;
        d = b.next;
        ++steps;
      }
    }
  }
  CHECK(steps > 1000);
  // every rule of the fragment is exercised
  for (RuleTag r : all_rules())
    if (dual_rule(r)) CHECK(seen.count(r) == 1);
}
