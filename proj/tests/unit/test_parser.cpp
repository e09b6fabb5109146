#include "doctest.h"
#include "dualvm/kernel.hpp"
#include "dualvm/parser.hpp"
#include "dualvm/pretty.hpp"

using namespace dualvm;
namespace S = dualvm::surface;

namespace {

ParseError parse_error(const char* text) {
  try {
    parse_program(text);
  } catch (const ParseError& e) {
    return e;
  }
  FAIL("expected a parse error");
  return ParseError(0, 0, "");
}

}  // namespace

TEST_CASE("types") {
  const Type nat = Type::nat();
  CHECK(parse_type("Nat") == nat);
  CHECK(parse_type("Nat -> Nat -> Nat") == Type::fn(nat, Type::fn(nat, nat)));
  CHECK(parse_type("(Nat -> Nat) -> Nat") == Type::fn(Type::fn(nat, nat), nat));
  CHECK(parse_type("Stream Nat * Num Nat") == Type::prod(Type::stream(nat), Type::numbered(nat)));
  CHECK(parse_type("Nat + Nat * Nat") == parse_type("Nat + (Nat * Nat)"));
  CHECK(parse_type("~X") == Type::atom("X", true));
  for (const char* t : {"Nat", "Stream (Nat -> Nat)", "Num (X * ~Y)", "(Nat + Nat) -> Stream Nat", "Nat * Nat + X"})
    CHECK(parse_type(pretty(parse_type(t))) == parse_type(t));
}

TEST_CASE("machine terms and coterms") {
  CHECK(parse_term("Z").is<Zero>());
  CHECK(alpha_eq(parse_term("3"), build::numeral(3)));
  CHECK(parse_term("mu a. < Z | a >").is<Mu>());
  CHECK(parse_term("fun x : Nat => x").as<Lam>()->annot == Type::nat());
  CHECK(parse_term("corec { head a -> a | tail b -> g : Nat. g } with 2").as<CoRec>()->seed_type == Type::nat());
  CHECK(parse_coterm("a").is<CoVar>());
  CHECK(parse_coterm("1 . 2 . a").as<Call>()->rest.is<Call>());
  CHECK(parse_coterm("tail tail head a").is<Tail>());
  CHECK(parse_coterm("rec { Z p : Nat -> p | S x -> y. y } with a").is<RecNum>());
  CHECK(parse_coterm("rec { Z -> Z | S x -> y. y } with a").is<RecNat>());
  CHECK(parse_coterm("case {Nat + Nat} [a, b]").as<SumCase>()->annot == Type::sum(Type::nat(), Type::nat()));
  CHECK(parse_term("inl {Nat + Nat} Z").as<InL>()->annot.has_value());
  CHECK(parse_command("< x' | a_1 >").producer.as<Var>()->name == "x'");
}

TEST_CASE("comments and whitespace") {
  auto c = parse_command("-- leading comment\n< Z -- trailing\n | a0 >");
  CHECK(alpha_eq(c, build::cut(build::zero(), build::covar("a0"))));
}

TEST_CASE("errors carry positions") {
  try {
    parse_command("< Z |\n  ) >");
    FAIL("no error");
  } catch (const ParseError& e) {
    CHECK(e.line == 2);
    CHECK(e.col == 3);
    CHECK(std::string(e.what()).rfind("2:3:", 0) == 0);
  }
  CHECK_THROWS_AS(parse_term("fun x => x x"), ParseError);
  CHECK_THROWS_AS(parse_term("rec x as { Z -> Z | S p -> q. q }"), ParseError);
  CHECK_THROWS_AS(parse_term("Z $"), ParseError);
  CHECK_THROWS_AS(parse_term("99999999999999999999999"), ParseError);
  CHECK_THROWS_AS(parse_surface("mu a. < Z | a >"), ParseError);
}

TEST_CASE("programs") {
  Program p = parse_program(R"(
    def two : Nat = S 1;
    def add : Nat -> Nat -> Nat = fun x : Nat => fun y : Nat => rec x as { Z -> y | S _ -> z. S z };
    def k : Nat -> Stream Nat = fun x : Nat => corec { head a -> a | tail _ -> g. g } with x;
    var v : Nat;
    covar out : Stream Nat;
    main = < k | two . out >;
  )");
  REQUIRE(p.defs.size() == 3);
  CHECK(std::holds_alternative<SurfaceTerm>(p.defs[0].body));
  CHECK(std::holds_alternative<SurfaceTerm>(p.defs[1].body));
  CHECK(std::holds_alternative<Term>(p.defs[2].body));
  CHECK(p.defs[1].line == 3);
  CHECK(p.vars.size() == 1);
  CHECK(p.covars.size() == 1);
  REQUIRE(p.main);
  CHECK(std::holds_alternative<Command>(*p.main));
  CHECK(p.find("add") != nullptr);
  CHECK(p.find("nope") == nullptr);
}

TEST_CASE("definition names become references in System T bodies") {
  Program p = parse_program("def one : Nat = 1; main = S one;");
  const auto& m = std::get<SurfaceTerm>(*p.main);
  CHECK(m.as<S::Succ>()->arg.is<S::Ref>());
  Program q = parse_program("def one : Nat = 1; var one2 : Nat; main = S one2;");
  CHECK(std::get<SurfaceTerm>(*q.main).as<S::Succ>()->arg.is<S::Var>());
}

TEST_CASE("body classification") {
  Program known = parse_program("def one : Nat = 1;");
  CHECK(std::holds_alternative<SurfaceTerm>(parse_body("S one", known)));
  CHECK(std::holds_alternative<Term>(parse_body("mu a. < one | a >", known)));
  CHECK(std::holds_alternative<Command>(parse_body("< one | a0 >", known)));
}

TEST_CASE("program errors") {
  CHECK(parse_error("def x : Nat = 1; def x : Nat = 2;").message.find("duplicate") != std::string::npos);
  CHECK(parse_error("main = 1; main = 2;").message.find("twice") != std::string::npos);
  CHECK(parse_error("def x : Nat = < Z | a >;").message.find("term") != std::string::npos);
  CHECK(parse_error("covar a : Nat; covar a : Nat;").message.find("duplicate") != std::string::npos);
  CHECK(parse_error("banana").line == 1);
  CHECK(parse_error("def x : Nat = 1").message.find("expected") != std::string::npos);
}

TEST_CASE("program printing round trip") {
  const char* src = "def f : Nat -> Nat = fun x : Nat => S x; var v : Nat; main = < f | v . a0 >;";
  Program p = parse_program(src);
  Program q = parse_program(pretty(p));
  REQUIRE(q.defs.size() == 1);
  CHECK(q.vars.size() == 1);
  CHECK(alpha_eq(std::get<Command>(*q.main), std::get<Command>(*p.main)));
}
