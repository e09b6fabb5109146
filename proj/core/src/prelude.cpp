#include "dualvm/prelude.hpp"

#include "dualvm/parser.hpp"

namespace dualvm {

const std::string& prelude_source() {
  static const std::string src = R"prelude(
-- arithmetic, in System T
def plus : Nat -> Nat -> Nat =
  fun x : Nat => fun y : Nat => rec x as { Z -> y | S _ -> z. S z };
def times : Nat -> Nat -> Nat =
  fun x : Nat => fun y : Nat => rec x as { Z -> Z | S _ -> z. plus y z };
def pred : Nat -> Nat =
  fun x : Nat => rec x as { Z -> Z | S x -> z. x };
def fact : Nat -> Nat =
  fun x : Nat => rec x as { Z -> S Z | S y -> z. times (S y) z };

-- streams, in machine syntax
def always : Nat -> Stream Nat =
  fun x : Nat => corec { head a -> a | tail _ -> g. g } with x;
def repeat : (Nat -> Nat) -> Nat -> Stream Nat =
  fun f : Nat -> Nat => fun x : Nat =>
    corec { head a -> a | tail _ -> g. comu x : Nat. < f | x . g > } with x;
def succ : Nat -> Nat =
  fun x : Nat => mu a. < S x | a >;
def zeroes : Stream Nat =
  mu a. < always | Z . a >;
def nats : Stream Nat =
  mu a. < repeat | succ . Z . a >;
def countDown : Nat -> Stream Nat =
  fun n : Nat =>
    corec { head a -> a | tail _ -> g. rec { Z -> Z | S n -> r. n } with g } with n;
def countDown' : Nat -> Stream Nat =
  fun n : Nat =>
    corec { head a -> a
          | tail b -> g. rec { Z -> mu _. < zeroes | b > | S n -> r. n } with g } with n;
def scons : Nat -> Stream Nat -> Stream Nat =
  fun x : Nat => fun s : Stream Nat =>
    corec { head a -> a | tail b -> _. comu _ : Nat. < s | b > } with x;
def countNow : Nat -> Stream Nat =
  fun n : Nat =>
    mu a. < n | rec { Z -> zeroes | S x -> xs. mu b. < scons | S x . xs . b > } with a >;
)prelude";
  return src;
}

const Program& prelude() {
  static const Program p = parse_program(prelude_source());
  return p;
}

namespace {

Definition surface_def(std::string name, Type t, SurfaceTerm body) { return {std::move(name), t, body, 0}; }
Definition machine_def(std::string name, Type t, Term body) { return {std::move(name), t, body, 0}; }

}  // namespace

Program prelude_ast() {
  namespace S = surface;
  using namespace build;
  const Type N = Type::nat();
  const Type NN = Type::fn(N, N);
  const Type SN = Type::stream(N);
  Program p;

  p.defs.push_back(surface_def(
      "plus", Type::fn(N, NN),
      S::lam("x", S::lam("y", S::rec(S::var("x"), S::var("y"), "_", "z", S::succ(S::var("z"))), N), N)));
  p.defs.push_back(surface_def(
      "times", Type::fn(N, NN),
      S::lam("x",
             S::lam("y", S::rec(S::var("x"), S::zero(), "_", "z", S::apps(S::ref("plus"), {S::var("y"), S::var("z")})),
                    N),
             N)));
  p.defs.push_back(surface_def("pred", NN, S::lam("x", S::rec(S::var("x"), S::zero(), "x", "z", S::var("x")), N)));
  p.defs.push_back(surface_def(
      "fact", NN,
      S::lam("x",
             S::rec(S::var("x"), S::succ(S::zero()), "y", "z",
                    S::apps(S::ref("times"), {S::succ(S::var("y")), S::var("z")})),
             N)));

  p.defs.push_back(machine_def("always", Type::fn(N, SN),
                               lam("x", corec("a", covar("a"), "_", "g", covar("g"), var("x")), N)));
  p.defs.push_back(machine_def(
      "repeat", Type::fn(NN, Type::fn(N, SN)),
      lam("f",
          lam("x",
              corec("a", covar("a"), "_", "g",
                    mutilde("x", cut(var("f"), call(var("x"), covar("g"))), N), var("x")),
              N),
          NN)));
  p.defs.push_back(machine_def("succ", NN, lam("x", mu("a", cut(succ(var("x")), covar("a"))), N)));
  p.defs.push_back(machine_def("zeroes", SN, mu("a", cut(var("always"), call(zero(), covar("a"))))));
  p.defs.push_back(
      machine_def("nats", SN, mu("a", cut(var("repeat"), call(var("succ"), call(zero(), covar("a")))))));
  p.defs.push_back(machine_def(
      "countDown", Type::fn(N, SN),
      lam("n",
          corec("a", covar("a"), "_", "g", rec_nat(zero(), "n", "r", var("n"), covar("g")), var("n")),
          N)));
  p.defs.push_back(machine_def(
      "countDown'", Type::fn(N, SN),
      lam("n",
          corec("a", covar("a"), "b", "g",
                rec_nat(mu("_", cut(var("zeroes"), covar("b"))), "n", "r", var("n"), covar("g")), var("n")),
          N)));
  p.defs.push_back(machine_def(
      "scons", Type::fn(N, Type::fn(SN, SN)),
      lam("x",
          lam("s", corec("a", covar("a"), "b", "_", mutilde("_", cut(var("s"), covar("b")), N), var("x")), SN),
          N)));
  p.defs.push_back(machine_def(
      "countNow", Type::fn(N, SN),
      lam("n", mu("a", cut(var("n"), rec_nat(var("zeroes"), "x", "xs",
                                             mu("b", cut(var("scons"), call(succ(var("x")),
                                                                             call(var("xs"), covar("b"))))),
                                             covar("a")))),
          N)));
  return p;
}

Program with_prelude(const Program& user) { return concat(prelude(), user); }

}  // namespace dualvm
