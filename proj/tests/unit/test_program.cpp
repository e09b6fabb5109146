#include <fstream>
#include <sstream>

#include "corpus.hpp"
#include "doctest.h"
#include "dualvm/kernel.hpp"
#include "dualvm/parser.hpp"
#include "dualvm/prelude.hpp"
#include "dualvm/program.hpp"

using namespace dualvm;
namespace S = dualvm::surface;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::uint64_t run_main(const char* src, Strategy s) {
  Program p = with_prelude(parse_program(src));
  auto cp = compile(p, s);
  auto ev = evaluate(compile_main(p, cp), s);
  REQUIRE(ev.value);
  return *ev.value;
}

}  // namespace

TEST_CASE("shipped prelude file matches the built-in text") {
  std::string file = slurp(std::string(DUALVM_SOURCE_DIR) + "/programs/prelude.ct");
  CHECK("\n" + file == prelude_source());
}

TEST_CASE("prelude built from constructors matches the parsed one") {
  Program a = prelude();
  Program b = prelude_ast();
  REQUIRE(a.defs.size() == b.defs.size());
  for (std::size_t i = 0; i < a.defs.size(); ++i) {
    CAPTURE(a.defs[i].name);
    CHECK(a.defs[i].name == b.defs[i].name);
    CHECK(a.defs[i].type == b.defs[i].type);
    REQUIRE(a.defs[i].body.index() == b.defs[i].body.index());
    if (auto t = std::get_if<Term>(&a.defs[i].body)) {
      CHECK(alpha_eq(*t, std::get<Term>(b.defs[i].body)));
    } else {
      // compare System T bodies through their translations
      for (Strategy s : {Strategy::CBV, Strategy::CBN}) {
        const auto& env = dualvm::testing::compiled_prelude(s).surface;
        CHECK(alpha_eq(translate(std::get<SurfaceTerm>(a.defs[i].body), s, env, a.defs[i].type),
                       translate(std::get<SurfaceTerm>(b.defs[i].body), s, env, b.defs[i].type)));
      }
    }
  }
}

TEST_CASE("prelude contents") {
  const auto* plus = prelude().find("plus");
  REQUIRE(plus);
  const auto& body = std::get<SurfaceTerm>(plus->body);
  const auto* inner = body.as<S::Lam>()->body.as<S::Lam>();
  REQUIRE(inner);
  auto want = parse_surface("rec x as { Z -> y | S _ -> z. S z }");
  for (Strategy s : {Strategy::CBV, Strategy::CBN}) {
    SurfaceEnv env;
    env.vars.insert_or_assign("x", Type::nat());
    env.vars.insert_or_assign("y", Type::nat());
    CHECK(alpha_eq(translate(inner->body, s, env, Type::nat()), translate(want, s, env, Type::nat())));
  }
  const auto* zeroes = prelude().find("zeroes");
  REQUIRE(zeroes);
  CHECK(alpha_eq(std::get<Term>(zeroes->body), parse_term("mu a. < always | Z . a >")));
  const auto* count_now = prelude().find("countNow");
  REQUIRE(count_now);
  CHECK(alpha_eq(std::get<Term>(count_now->body),
                 parse_term("fun n : Nat => mu a. < n | rec { Z -> zeroes | S x -> xs. mu b. < scons | S x . xs . b > "
                            "} with a >")));
  for (const char* n : {"plus", "times", "pred", "fact", "always", "repeat", "zeroes", "nats", "countDown",
                        "countDown'", "scons", "countNow"})
    CHECK(prelude().find(n) != nullptr);
}

TEST_CASE("prelude compiles under both strategies") {
  for (Strategy s : {Strategy::CBV, Strategy::CBN}) {
    const auto& cp = dualvm::testing::compiled_prelude(s);
    CHECK(cp.order.size() == prelude().defs.size());
    for (const auto& name : cp.order) {
      const auto& d = cp.surface.defs.at(name);
      CHECK(free_names(d.compiled).vars.empty());
      CHECK(free_names(d.compiled).covars.empty());
      CHECK(well_formed(d.compiled, s).empty());
    }
  }
}

TEST_CASE("running main") {
  for (Strategy s : {Strategy::CBV, Strategy::CBN}) {
    CHECK(run_main("main = plus 2 3;", s) == 5);
    CHECK(run_main("main = times (plus 1 2) 4;", s) == 12);
    CHECK(run_main("main = < nats | tail tail tail head a0 >;", s) == 3);
    CHECK(run_main("def twice : Nat -> Nat = fun x : Nat => plus x x; main = twice 21;", s) == 42);
    CHECK(run_main("def c : Stream Nat = mu a. < countDown | 4 . a >; main = < c | tail head a0 >;", s) == 3);
    CHECK(run_main("main = mu a. < succ | 4 . a >;", s) == 5);
  }
}

TEST_CASE("declared free names") {
  Program p = parse_program("var v : Nat; covar out : Stream Nat; main = < zeroes | out >;");
  TypeEnv env = main_env(p);
  CHECK(env.vars.at("v") == Type::nat());
  CHECK(env.covars.at("out") == Type::stream(Type::nat()));
  CHECK(env.covars.at(kTopCovar) == Type::nat());
  Program q = parse_program("covar a0 : Stream Nat; main = zeroes;");
  Program full = with_prelude(q);
  auto cp = compile(full, Strategy::CBV);
  Command c = compile_main(full, cp);
  CHECK_FALSE(check_command(cp.env, c));
}

TEST_CASE("compile errors name the definition") {
  Program p = with_prelude(parse_program("def one : Nat = 1;\ndef bad : Nat = fun x : Nat => x;"));
  try {
    compile(p, Strategy::CBV);
    FAIL("no error");
  } catch (const TypeCheckFailure& f) {
    CHECK(f.error.path.rfind("def bad (line 2): ", 0) == 0);
  }
  CHECK_THROWS_AS(compile_main(parse_program("def one : Nat = 1;"), compile(parse_program(""), Strategy::CBV)),
                  ProgramError);
}

TEST_CASE("combining programs") {
  CHECK_THROWS_AS(with_prelude(parse_program("def plus : Nat = 1;")), ProgramError);
  CHECK_THROWS_AS(with_prelude(parse_program("var pred : Nat;")), ProgramError);
  Program merged = concat(parse_program("def a : Nat = 1;"), parse_program("def b : Nat = 2; main = b;"));
  CHECK(merged.defs.size() == 2);
  CHECK(merged.main.has_value());
}

TEST_CASE("inlining keeps the grammar") {
  for (Strategy s : {Strategy::CBV, Strategy::CBN}) {
    const auto& cp = dualvm::testing::compiled_prelude(s);
    Command c = inline_defs(parse_command("< S (mu a. < zeroes | head a >) | a0 >"), cp);
    CHECK(free_names(c).vars.empty());
    Command d = inline_defs(parse_command("< plus | 1 . 2 . a0 >"), cp);
    CHECK(well_formed(d, s).empty());
    auto ev = evaluate(d, s);
    REQUIRE(ev.value);
    CHECK(*ev.value == 3);
  }
  // a definition that is not a call-by-value value gets let-bound where it would break the grammar
  const auto& cbv = dualvm::testing::compiled_prelude(Strategy::CBV);
  Command e = inline_defs(parse_command("< always | zeroes' . a0 >"), cbv);
  CHECK(free_names(e).vars.count("zeroes'") == 1);
  Program p = with_prelude(parse_program("def three : Nat = mu a. < 3 | a >;"));
  auto cp = compile(p, Strategy::CBV);
  Command f = inline_defs(parse_command("< S three | a0 >"), cp);
  CHECK(f.consumer.is<MuTilde>());
  CHECK(well_formed(f, Strategy::CBV).empty());
  auto ev = evaluate(f, Strategy::CBV);
  REQUIRE(ev.value);
  CHECK(*ev.value == 4);
}
