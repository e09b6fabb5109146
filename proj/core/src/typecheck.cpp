#include "dualvm/typecheck.hpp"

#include <sstream>
#include <utility>
#include <vector>

#include "dualvm/pretty.hpp"

namespace dualvm {

const char* to_string(TypeErrorKind k) {
  switch (k) {
    case TypeErrorKind::UnboundName:
      return "UnboundName";
    case TypeErrorKind::AnnotationRequired:
      return "AnnotationRequired";
    case TypeErrorKind::Mismatch:
      return "Mismatch";
    case TypeErrorKind::CutMismatch:
      return "CutMismatch";
  }
  return "?";
}

std::string TypeError::describe() const {
  std::ostringstream os;
  os << to_string(kind) << " at " << path << ": " << message;
  if (expected || found) {
    os << " (";
    if (expected) os << "expected " << pretty(*expected);
    if (expected && found) os << ", ";
    if (found) os << "found " << pretty(*found);
    os << ')';
  }
  return os.str();
}

// ---- synthesizability ------------------------------------------------------------

bool synthesizable(const Term& v) {
  return visit(v, overloaded{
                      [](const Var&) { return true; },
                      [](const Mu& n) { return n.annot.has_value(); },
                      [](const Lam& n) { return n.annot && synthesizable(n.body); },
                      [](const Zero&) { return true; },
                      [](const Succ&) { return true; },
                      [](const NumZero& n) { return synthesizable(n.arg); },
                      [](const NumSucc& n) { return synthesizable(n.arg); },
                      [](const Pair& n) { return synthesizable(n.first) && synthesizable(n.second); },
                      [](const InL& n) { return n.annot.has_value(); },
                      [](const InR& n) { return n.annot.has_value(); },
                      [](const CoRec& n) {
                        const auto* hv = n.head_body.as<CoVar>();
                        bool elem = n.elem || (hv && hv->name == n.head_covar);
                        return elem && (n.seed_type || synthesizable(n.seed));
                      },
                  });
}

namespace {

bool rec_result_known(const std::optional<Type>& annot, const CoTerm& ret, const Term& zero) {
  return annot || synthesizable(ret) || synthesizable(zero);
}

}  // namespace

bool synthesizable(const CoTerm& e) {
  return visit(e, overloaded{
                      [](const CoVar&) { return true; },
                      [](const MuTilde& n) { return n.annot.has_value(); },
                      [](const Call& n) { return synthesizable(n.arg) && synthesizable(n.rest); },
                      [](const RecNat& n) { return rec_result_known(n.result_type, n.ret, n.zero_branch); },
                      [](const RecNum& n) {
                        return n.payload_type && rec_result_known(n.result_type, n.ret, n.zero_branch);
                      },
                      [](const Head& n) { return synthesizable(n.rest); },
                      [](const Tail& n) { return synthesizable(n.rest); },
                      [](const Fst& n) { return n.annot.has_value(); },
                      [](const Snd& n) { return n.annot.has_value(); },
                      [](const SumCase& n) {
                        return n.annot || (synthesizable(n.left) && synthesizable(n.right));
                      },
                  });
}

// ---- checker ------------------------------------------------------------------------

namespace {

using Scope = std::vector<std::pair<std::string, Type>>;

class Checker {
 public:
  explicit Checker(const TypeEnv& env) : env_(env) {}

  // -- producers --

  std::pair<Term, Type> synth(const Term& v, const std::string& path) {
    using namespace build;
    return visit(v, overloaded{
                        [&](const Var& n) -> std::pair<Term, Type> {
                          return {v, lookup(vars_, env_.vars, n.name, path, "variable")};
                        },
                        [&](const Mu& n) -> std::pair<Term, Type> {
                          if (!n.annot) required(path, "mu binder needs a type annotation here");
                          return {check(v, *n.annot, path), *n.annot};
                        },
                        [&](const Lam& n) -> std::pair<Term, Type> {
                          if (!n.annot) required(path, "lambda binder needs a type annotation here");
                          bind(vars_, n.var, *n.annot);
                          auto [body, ret] = synth(n.body, path + ".body");
                          vars_.pop_back();
                          Type a = Type::fn(*n.annot, ret);
                          return {lam(n.var, body, n.annot), a};
                        },
                        [&](const Zero&) -> std::pair<Term, Type> { return {v, Type::nat()}; },
                        [&](const Succ&) -> std::pair<Term, Type> { return {check(v, Type::nat(), path), Type::nat()}; },
                        [&](const NumZero& n) -> std::pair<Term, Type> {
                          auto [arg, a] = synth(n.arg, path + ".arg");
                          return {num_zero(arg), Type::numbered(a)};
                        },
                        [&](const NumSucc& n) -> std::pair<Term, Type> {
                          auto [arg, a] = synth(n.arg, path + ".arg");
                          expect(a, Type::Kind::Numbered, path + ".arg", "numbered number");
                          return {num_succ(arg), a};
                        },
                        [&](const Pair& n) -> std::pair<Term, Type> {
                          auto [l, a] = synth(n.first, path + ".first");
                          auto [r, b] = synth(n.second, path + ".second");
                          return {pair(l, r), Type::prod(a, b)};
                        },
                        [&](const InL& n) -> std::pair<Term, Type> {
                          if (!n.annot) required(path, "inl needs its sum type");
                          return {check(v, *n.annot, path), *n.annot};
                        },
                        [&](const InR& n) -> std::pair<Term, Type> {
                          if (!n.annot) required(path, "inr needs its sum type");
                          return {check(v, *n.annot, path), *n.annot};
                        },
                        [&](const CoRec& n) -> std::pair<Term, Type> {
                          std::optional<Type> elem = n.elem;
                          // head a -> a: the element is the seed
                          const auto* hv = n.head_body.as<CoVar>();
                          if (!elem && hv && hv->name == n.head_covar) {
                            if (n.seed_type)
                              elem = n.seed_type;
                            else if (synthesizable(n.seed))
                              elem = synth(n.seed, path + ".seed").second;
                          }
                          if (!elem) required(path, "corecursor needs its element type");
                          Type a = Type::stream(*elem);
                          return {check(v, a, path), a};
                        },
                    });
  }

  Term check(const Term& v, const Type& a, const std::string& path) {
    using namespace build;
    return visit(v, overloaded{
                        [&](const Var& n) -> Term {
                          Type found = lookup(vars_, env_.vars, n.name, path, "variable");
                          if (found != a) mismatch(path, a, found, "variable has the wrong type");
                          return v;
                        },
                        [&](const Mu& n) -> Term {
                          if (n.annot) same_annot(*n.annot, a, path);
                          bind(covars_, n.covar, a);
                          Command body = command(n.body, path + ".body");
                          covars_.pop_back();
                          return mu(n.covar, body, a);
                        },
                        [&](const Lam& n) -> Term {
                          expect(a, Type::Kind::Fn, path, "function");
                          if (n.annot) same_annot(*n.annot, a.arg(), path);
                          bind(vars_, n.var, a.arg());
                          Term body = check(n.body, a.ret(), path + ".body");
                          vars_.pop_back();
                          return lam(n.var, body, a.arg());
                        },
                        [&](const Zero&) -> Term {
                          expect(a, Type::Kind::Nat, path, "Nat");
                          return v;
                        },
                        [&](const Succ&) -> Term {
                          expect(a, Type::Kind::Nat, path, "Nat");
                          // Walk numerals iteratively; they can be long.
                          std::vector<const Succ*> chain;
                          const Term* cur = &v;
                          std::string p = path;
                          while (const auto* s = cur->as<Succ>()) {
                            chain.push_back(s);
                            cur = &s->arg;
                            p += ".arg";
                          }
                          Term inner = check(*cur, a, p);
                          if (inner.same_node(*cur)) return v;
                          for (auto it = chain.rbegin(); it != chain.rend(); ++it) inner = succ(inner);
                          return inner;
                        },
                        [&](const NumZero& n) -> Term {
                          expect(a, Type::Kind::Numbered, path, "numbered number");
                          return num_zero(check(n.arg, a.elem(), path + ".arg"));
                        },
                        [&](const NumSucc& n) -> Term {
                          expect(a, Type::Kind::Numbered, path, "numbered number");
                          return num_succ(check(n.arg, a, path + ".arg"));
                        },
                        [&](const Pair& n) -> Term {
                          expect(a, Type::Kind::Prod, path, "product");
                          return pair(check(n.first, a.left(), path + ".first"),
                                      check(n.second, a.right(), path + ".second"));
                        },
                        [&](const InL& n) -> Term {
                          expect(a, Type::Kind::Sum, path, "sum");
                          if (n.annot) same_annot(*n.annot, a, path);
                          return inl(check(n.arg, a.left(), path + ".arg"), a);
                        },
                        [&](const InR& n) -> Term {
                          expect(a, Type::Kind::Sum, path, "sum");
                          if (n.annot) same_annot(*n.annot, a, path);
                          return inr(check(n.arg, a.right(), path + ".arg"), a);
                        },
                        [&](const CoRec& n) -> Term {
                          expect(a, Type::Kind::Stream, path, "stream");
                          const Type& elem = a.elem();
                          if (n.elem) same_annot(*n.elem, elem, path);
                          Term seed = v;
                          Type b = Type::nat();
                          if (n.seed_type) {
                            b = *n.seed_type;
                            seed = check(n.seed, b, path + ".seed");
                          } else if (synthesizable(n.seed)) {
                            std::tie(seed, b) = synth(n.seed, path + ".seed");
                          } else {
                            required(path, "corecursor needs its seed type");
                          }
                          bind(covars_, n.head_covar, elem);
                          CoTerm head_body = check(n.head_body, b, path + ".head");
                          covars_.pop_back();
                          bind(covars_, n.tail_covar, a);
                          bind(covars_, n.seed_covar, b);
                          CoTerm tail_body = check(n.tail_body, b, path + ".tail");
                          covars_.pop_back();
                          covars_.pop_back();
                          return corec(n.head_covar, head_body, n.tail_covar, n.seed_covar, tail_body, seed, elem, b);
                        },
                    });
  }

  // -- consumers --

  std::pair<CoTerm, Type> synth(const CoTerm& e, const std::string& path) {
    using namespace build;
    return visit(e, overloaded{
                        [&](const CoVar& n) -> std::pair<CoTerm, Type> {
                          return {e, lookup(covars_, env_.covars, n.name, path, "covariable")};
                        },
                        [&](const MuTilde& n) -> std::pair<CoTerm, Type> {
                          if (!n.annot) required(path, "mu-tilde binder needs a type annotation here");
                          return {check(e, *n.annot, path), *n.annot};
                        },
                        [&](const Call& n) -> std::pair<CoTerm, Type> {
                          auto [arg, a] = synth(n.arg, path + ".arg");
                          auto [rest, b] = synth(n.rest, path + ".rest");
                          return {call(arg, rest), Type::fn(a, b)};
                        },
                        [&](const RecNat&) -> std::pair<CoTerm, Type> {
                          return {check(e, Type::nat(), path), Type::nat()};
                        },
                        [&](const RecNum& n) -> std::pair<CoTerm, Type> {
                          if (!n.payload_type) required(path, "recursor needs its payload type");
                          Type a = Type::numbered(*n.payload_type);
                          return {check(e, a, path), a};
                        },
                        [&](const Head& n) -> std::pair<CoTerm, Type> {
                          auto [rest, a] = synth(n.rest, path + ".rest");
                          return {head(rest), Type::stream(a)};
                        },
                        [&](const Tail& n) -> std::pair<CoTerm, Type> {
                          auto [rest, a] = synth(n.rest, path + ".rest");
                          expect(a, Type::Kind::Stream, path + ".rest", "stream");
                          return {tail(rest), a};
                        },
                        [&](const Fst& n) -> std::pair<CoTerm, Type> {
                          if (!n.annot) required(path, "fst needs its product type");
                          return {check(e, *n.annot, path), *n.annot};
                        },
                        [&](const Snd& n) -> std::pair<CoTerm, Type> {
                          if (!n.annot) required(path, "snd needs its product type");
                          return {check(e, *n.annot, path), *n.annot};
                        },
                        [&](const SumCase& n) -> std::pair<CoTerm, Type> {
                          if (n.annot) return {check(e, *n.annot, path), *n.annot};
                          auto [l, a] = synth(n.left, path + ".left");
                          auto [r, b] = synth(n.right, path + ".right");
                          Type s = Type::sum(a, b);
                          return {sum_case(l, r, s), s};
                        },
                    });
  }

  CoTerm check(const CoTerm& e, const Type& a, const std::string& path) {
    using namespace build;
    return visit(e, overloaded{
                        [&](const CoVar& n) -> CoTerm {
                          Type found = lookup(covars_, env_.covars, n.name, path, "covariable");
                          if (found != a) mismatch(path, a, found, "covariable has the wrong type");
                          return e;
                        },
                        [&](const MuTilde& n) -> CoTerm {
                          if (n.annot) same_annot(*n.annot, a, path);
                          bind(vars_, n.var, a);
                          Command body = command(n.body, path + ".body");
                          vars_.pop_back();
                          return mutilde(n.var, body, a);
                        },
                        [&](const Call& n) -> CoTerm {
                          expect(a, Type::Kind::Fn, path, "function");
                          return call(check(n.arg, a.arg(), path + ".arg"), check(n.rest, a.ret(), path + ".rest"));
                        },
                        [&](const RecNat& n) -> CoTerm {
                          expect(a, Type::Kind::Nat, path, "Nat");
                          Type r = rec_result(n.result_type, n.ret, n.zero_branch, path);
                          Term zero = check(n.zero_branch, r, path + ".zero");
                          bind(vars_, n.pred_var, Type::nat());
                          bind(vars_, n.result_var, r);
                          Term succ_branch = check(n.succ_branch, r, path + ".succ");
                          vars_.pop_back();
                          vars_.pop_back();
                          CoTerm ret = check(n.ret, r, path + ".ret");
                          return rec_nat(zero, n.pred_var, n.result_var, succ_branch, ret, r);
                        },
                        [&](const RecNum& n) -> CoTerm {
                          expect(a, Type::Kind::Numbered, path, "numbered number");
                          const Type& payload = a.elem();
                          if (n.payload_type) same_annot(*n.payload_type, payload, path);
                          bind(vars_, n.payload_var, payload);
                          Type r = rec_result(n.result_type, n.ret, n.zero_branch, path);
                          Term zero = check(n.zero_branch, r, path + ".zero");
                          vars_.pop_back();
                          bind(vars_, n.pred_var, a);
                          bind(vars_, n.result_var, r);
                          Term succ_branch = check(n.succ_branch, r, path + ".succ");
                          vars_.pop_back();
                          vars_.pop_back();
                          CoTerm ret = check(n.ret, r, path + ".ret");
                          return rec_num(n.payload_var, zero, n.pred_var, n.result_var, succ_branch, ret, payload, r);
                        },
                        [&](const Head& n) -> CoTerm {
                          expect(a, Type::Kind::Stream, path, "stream");
                          return head(check(n.rest, a.elem(), path + ".rest"));
                        },
                        [&](const Tail& n) -> CoTerm {
                          expect(a, Type::Kind::Stream, path, "stream");
                          return tail(check(n.rest, a, path + ".rest"));
                        },
                        [&](const Fst& n) -> CoTerm {
                          expect(a, Type::Kind::Prod, path, "product");
                          if (n.annot) same_annot(*n.annot, a, path);
                          return fst(check(n.rest, a.left(), path + ".rest"), a);
                        },
                        [&](const Snd& n) -> CoTerm {
                          expect(a, Type::Kind::Prod, path, "product");
                          if (n.annot) same_annot(*n.annot, a, path);
                          return snd(check(n.rest, a.right(), path + ".rest"), a);
                        },
                        [&](const SumCase& n) -> CoTerm {
                          expect(a, Type::Kind::Sum, path, "sum");
                          if (n.annot) same_annot(*n.annot, a, path);
                          return sum_case(check(n.left, a.left(), path + ".left"),
                                          check(n.right, a.right(), path + ".right"), a);
                        },
                    });
  }

  Command command(const Command& c, const std::string& path) {
    const std::string ppath = path + ".producer";
    const std::string cpath = path + ".consumer";
    bool ps = synthesizable(c.producer);
    bool cs = synthesizable(c.consumer);
    if (ps) {
      auto [p, a] = synth(c.producer, ppath);
      if (cs) {
        auto [k, b] = synth(c.consumer, cpath);
        if (a != b) fail(TypeErrorKind::CutMismatch, path, b, a, "producer and consumer disagree");
        return Command{p, k};
      }
      return Command{p, check(c.consumer, a, cpath)};
    }
    if (cs) {
      auto [k, b] = synth(c.consumer, cpath);
      return Command{check(c.producer, b, ppath), k};
    }
    required(path, "neither side of the cut determines its type");
  }

 private:
  Type rec_result(const std::optional<Type>& annot, const CoTerm& ret, const Term& zero, const std::string& path) {
    if (annot) return *annot;
    if (synthesizable(ret)) return synth(ret, path + ".ret").second;
    if (synthesizable(zero)) return synth(zero, path + ".zero").second;
    required(path, "recursor needs its result type");
  }

  static void bind(Scope& scope, const std::string& name, const Type& t) { scope.emplace_back(name, t); }

  Type lookup(const Scope& scope, const std::map<std::string, Type>& base, const std::string& name,
              const std::string& path, const char* what) {
    for (auto it = scope.rbegin(); it != scope.rend(); ++it)
      if (it->first == name) return it->second;
    auto it = base.find(name);
    if (it != base.end()) return it->second;
    fail(TypeErrorKind::UnboundName, path, std::nullopt, std::nullopt, std::string("unbound ") + what + " " + name);
  }

  void expect(const Type& a, Type::Kind k, const std::string& path, const char* what) {
    if (a.kind() != k) fail(TypeErrorKind::Mismatch, path, std::nullopt, a, std::string("expected a ") + what + " type");
  }

  void same_annot(const Type& annot, const Type& a, const std::string& path) {
    if (annot != a) mismatch(path, a, annot, "annotation disagrees with the expected type");
  }

  [[noreturn]] void mismatch(const std::string& path, const Type& expected, const Type& found, const std::string& msg) {
    fail(TypeErrorKind::Mismatch, path, expected, found, msg);
  }

  [[noreturn]] void required(const std::string& path, const std::string& msg) {
    fail(TypeErrorKind::AnnotationRequired, path, std::nullopt, std::nullopt, msg);
  }

  [[noreturn]] void fail(TypeErrorKind kind, const std::string& path, std::optional<Type> expected,
                         std::optional<Type> found, const std::string& msg) {
    throw TypeCheckFailure(TypeError{kind, path, std::move(expected), std::move(found), msg});
  }

  const TypeEnv& env_;
  Scope vars_;
  Scope covars_;
};

}  // namespace

Type infer_term(const TypeEnv& env, const Term& v) { return Checker(env).synth(v, "term").second; }

Type infer_coterm(const TypeEnv& env, const CoTerm& e) { return Checker(env).synth(e, "coterm").second; }

std::optional<TypeError> check_command(const TypeEnv& env, const Command& c) {
  try {
    Checker(env).command(c, "cmd");
    return std::nullopt;
  } catch (const TypeCheckFailure& f) {
    return f.error;
  }
}

std::optional<TypeError> check_term(const TypeEnv& env, const Term& v, const Type& a) {
  try {
    Checker(env).check(v, a, "term");
    return std::nullopt;
  } catch (const TypeCheckFailure& f) {
    return f.error;
  }
}

Command elaborate(const TypeEnv& env, const Command& c) { return Checker(env).command(c, "cmd"); }

Term elaborate(const TypeEnv& env, const Term& v, const Type& a) { return Checker(env).check(v, a, "term"); }

CoTerm elaborate(const TypeEnv& env, const CoTerm& e, const Type& a) { return Checker(env).check(e, a, "coterm"); }

std::pair<Term, Type> elaborate_synth(const TypeEnv& env, const Term& v) { return Checker(env).synth(v, "term"); }

}  // namespace dualvm
