#include "dualvm/surface.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <vector>

#include "dualvm/kernel.hpp"

namespace dualvm {

namespace surface {

namespace {
SurfaceTerm make(SurfaceNode n) { return SurfaceTerm(std::make_shared<const SurfaceNode>(std::move(n))); }
}  // namespace

SurfaceTerm var(std::string name) { return make(Var{std::move(name)}); }
SurfaceTerm lam(std::string v, SurfaceTerm body, std::optional<Type> annot) {
  return make(Lam{std::move(v), std::move(annot), std::move(body)});
}
SurfaceTerm app(SurfaceTerm fn, SurfaceTerm arg) { return make(App{std::move(fn), std::move(arg)}); }
SurfaceTerm apps(SurfaceTerm fn, std::initializer_list<SurfaceTerm> args) {
  for (const auto& a : args) fn = app(std::move(fn), a);
  return fn;
}
SurfaceTerm zero() {
  static const SurfaceTerm z = make(Zero{});
  return z;
}
SurfaceTerm succ(SurfaceTerm arg) { return make(Succ{std::move(arg)}); }
SurfaceTerm rec(SurfaceTerm scrutinee, SurfaceTerm zero_branch, std::string pred_var, std::string result_var,
                SurfaceTerm succ_branch, std::optional<Type> result_type) {
  return make(Rec{std::move(scrutinee), std::move(zero_branch), std::move(pred_var), std::move(result_var),
                  std::move(result_type), std::move(succ_branch)});
}
SurfaceTerm num(std::uint64_t n) { return make(NumLit{n}); }
SurfaceTerm ref(std::string name) { return make(Ref{std::move(name)}); }

}  // namespace surface

namespace S = surface;

// ---- printing ---------------------------------------------------------------------------

namespace {

std::optional<std::uint64_t> surface_numeral(const SurfaceTerm& t) {
  std::uint64_t n = 0;
  const SurfaceTerm* cur = &t;
  while (const auto* s = cur->as<S::Succ>()) {
    ++n;
    cur = &s->arg;
  }
  if (cur->is<S::Zero>()) return n;
  if (const auto* lit = cur->as<S::NumLit>()) return n + lit->value;
  return std::nullopt;
}

void print(std::ostream& os, const SurfaceTerm& t, int level) {
  if (!t.is<S::Zero>()) {
    if (auto n = surface_numeral(t)) {
      os << *n;
      return;
    }
  }
  auto open = [&](int need) {
    bool p = level > need;
    if (p) os << '(';
    return p;
  };
  visit(t, overloaded{
               [&](const S::Var& n) { os << n.name; },
               [&](const S::Ref& n) { os << n.name; },
               [&](const S::Zero&) { os << 'Z'; },
               [&](const S::NumLit& n) { os << n.value; },
               [&](const S::Succ& n) {
                 bool p = open(1);
                 os << "S ";
                 print(os, n.arg, 2);
                 if (p) os << ')';
               },
               [&](const S::App& n) {
                 bool p = open(1);
                 print(os, n.fn, 1);
                 os << ' ';
                 print(os, n.arg, 2);
                 if (p) os << ')';
               },
               [&](const S::Lam& n) {
                 bool p = open(0);
                 os << "fun " << n.var;
                 if (n.annot) os << " : " << pretty(*n.annot);
                 os << " => ";
                 print(os, n.body, 0);
                 if (p) os << ')';
               },
               [&](const S::Rec& n) {
                 bool p = open(0);
                 os << "rec ";
                 print(os, n.scrutinee, 1);
                 os << " as { Z -> ";
                 print(os, n.zero_branch, 0);
                 os << " | S " << n.pred_var << " -> " << n.result_var;
                 if (n.result_type) os << " : " << pretty(*n.result_type);
                 os << ". ";
                 print(os, n.succ_branch, 0);
                 os << " }";
                 if (p) os << ')';
               },
           });
}

}  // namespace

std::string pretty(const SurfaceTerm& t) {
  std::ostringstream os;
  print(os, t, 0);
  return os.str();
}

// ---- typing and translation -------------------------------------------------------

namespace {

bool synthesizable(const SurfaceTerm& m) {
  return visit(m, overloaded{
                      [](const S::Lam& n) { return n.annot && synthesizable(n.body); },
                      [](const S::App& n) {
                        if (synthesizable(n.fn)) return true;
                        const auto* l = n.fn.as<S::Lam>();
                        return l && synthesizable(n.arg) && synthesizable(l->body);
                      },
                      [](const S::Rec& n) { return n.result_type || synthesizable(n.zero_branch); },
                      [](const auto&) { return true; },
                  });
}

class Translator {
 public:
  Translator(const SurfaceEnv& env, Strategy s) : env_(env), s_(s) {}

  std::pair<Term, Type> synth(const SurfaceTerm& m, const std::string& path) {
    using namespace build;
    return visit(m, overloaded{
                        [&](const S::Var& n) -> std::pair<Term, Type> {
                          if (auto t = lookup(n.name)) return {var(n.name), *t};
                          return def(n.name, path);
                        },
                        [&](const S::Ref& n) -> std::pair<Term, Type> { return def(n.name, path); },
                        [&](const S::Zero&) -> std::pair<Term, Type> { return {zero(), Type::nat()}; },
                        [&](const S::NumLit& n) -> std::pair<Term, Type> { return {numeral(n.value), Type::nat()}; },
                        [&](const S::Succ& n) -> std::pair<Term, Type> {
                          return {successor(check(n.arg, Type::nat(), path + ".arg")), Type::nat()};
                        },
                        [&](const S::Lam& n) -> std::pair<Term, Type> {
                          if (!n.annot) required(path, "lambda needs a type annotation here");
                          scope_.emplace_back(n.var, *n.annot);
                          auto [body, b] = synth(n.body, path + ".body");
                          scope_.pop_back();
                          return {lam(n.var, body, *n.annot), Type::fn(*n.annot, b)};
                        },
                        [&](const S::App& n) -> std::pair<Term, Type> {
                          if (synthesizable(n.fn)) {
                            auto [f, ft] = synth(n.fn, path + ".fn");
                            expect_fn(ft, path + ".fn");
                            Term a = check(n.arg, ft.arg(), path + ".arg");
                            return {application(f, a, ft), ft.ret()};
                          }
                          const auto& l = *n.fn.as<S::Lam>();
                          auto [a, at] = synth(n.arg, path + ".arg");
                          scope_.emplace_back(l.var, at);
                          auto [body, bt] = synth(l.body, path + ".fn.body");
                          scope_.pop_back();
                          Type ft = Type::fn(at, bt);
                          return {application(lam(l.var, body, at), a, ft), bt};
                        },
                        [&](const S::Rec& n) -> std::pair<Term, Type> {
                          Type r = n.result_type ? *n.result_type : synth(n.zero_branch, path + ".zero").second;
                          return {recursion(n, r, path), r};
                        },
                    });
  }

  Term check(const SurfaceTerm& m, const Type& a, const std::string& path) {
    using namespace build;
    if (const auto* l = m.as<S::Lam>()) {
      if (!a.is(Type::Kind::Fn)) mismatch(path, std::nullopt, a, "expected a function type");
      if (l->annot && *l->annot != a.arg()) mismatch(path, a.arg(), *l->annot, "annotation disagrees");
      scope_.emplace_back(l->var, a.arg());
      Term body = check(l->body, a.ret(), path + ".body");
      scope_.pop_back();
      return lam(l->var, body, a.arg());
    }
    if (const auto* r = m.as<S::Rec>()) {
      if (r->result_type && *r->result_type != a) mismatch(path, a, *r->result_type, "annotation disagrees");
      return recursion(*r, a, path);
    }
    if (const auto* ap = m.as<S::App>(); ap && !synthesizable(ap->fn)) {
      if (!ap->fn.is<S::Lam>() || !synthesizable(ap->arg)) required(path + ".fn", "cannot determine the function type");
      auto [arg, at] = synth(ap->arg, path + ".arg");
      Type ft = Type::fn(at, a);
      Term f = check(ap->fn, ft, path + ".fn");
      return application(f, arg, ft);
    }
    auto [t, found] = synth(m, path);
    if (found != a) mismatch(path, a, found, "type mismatch");
    return t;
  }

 private:
  Term successor(const Term& arg) {
    using namespace build;
    if (is_value(arg, s_)) return succ(arg);
    std::string alpha = fresh_name(free_names(arg).covars, "a");
    return mu(alpha, cut(arg, mutilde("x", cut(succ(var("x")), covar(alpha)), Type::nat())), Type::nat());
  }

  // μα.⟨M ∥ μ̃x.⟨N ∥ μ̃y.⟨x ∥ y·α⟩⟩⟩
  Term application(const Term& f, const Term& a, const Type& ft) {
    using namespace build;
    FreeNames ff = free_names(f);
    FreeNames fa = free_names(a);
    std::set<std::string> covars = ff.covars;
    covars.insert(fa.covars.begin(), fa.covars.end());
    std::string alpha = fresh_name(covars, "a");
    std::string x = fresh_name(fa.vars, "x");
    std::string y = fresh_name({x}, "y");
    Command inner = cut(var(x), call(var(y), covar(alpha)));
    Command mid = cut(a, mutilde(y, inner, ft.arg()));
    return mu(alpha, cut(f, mutilde(x, mid, ft)), ft.ret());
  }

  // μα.⟨R ∥ rec { Z -> M | S x -> y. N } with α⟩
  Term recursion(const S::Rec& n, const Type& r, const std::string& path) {
    using namespace build;
    Term scrut = check(n.scrutinee, Type::nat(), path + ".scrutinee");
    Term z = check(n.zero_branch, r, path + ".zero");
    scope_.emplace_back(n.pred_var, Type::nat());
    scope_.emplace_back(n.result_var, r);
    Term sb = check(n.succ_branch, r, path + ".succ");
    scope_.pop_back();
    scope_.pop_back();
    std::set<std::string> covars = free_names(scrut).covars;
    for (const Term* t : {&z, &sb}) {
      auto fv = free_names(*t).covars;
      covars.insert(fv.begin(), fv.end());
    }
    std::string alpha = fresh_name(covars, "a");
    return mu(alpha, cut(scrut, rec_nat(z, n.pred_var, n.result_var, sb, covar(alpha), r)), r);
  }

  std::optional<Type> lookup(const std::string& name) {
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it)
      if (it->first == name) return it->second;
    if (auto it = env_.vars.find(name); it != env_.vars.end()) return it->second;
    return std::nullopt;
  }

  std::pair<Term, Type> def(const std::string& name, const std::string& path) {
    auto it = env_.defs.find(name);
    if (it == env_.defs.end())
      throw TypeCheckFailure(
          TypeError{TypeErrorKind::UnboundName, path, std::nullopt, std::nullopt, "unbound name " + name});
    return {it->second.compiled, it->second.type};
  }

  void expect_fn(const Type& t, const std::string& path) {
    if (!t.is(Type::Kind::Fn)) mismatch(path, std::nullopt, t, "applying a non-function");
  }

  [[noreturn]] void mismatch(const std::string& path, std::optional<Type> expected, std::optional<Type> found,
                             const std::string& msg) {
    throw TypeCheckFailure(TypeError{TypeErrorKind::Mismatch, path, std::move(expected), std::move(found), msg});
  }
  [[noreturn]] void required(const std::string& path, const std::string& msg) {
    throw TypeCheckFailure(TypeError{TypeErrorKind::AnnotationRequired, path, std::nullopt, std::nullopt, msg});
  }

  const SurfaceEnv& env_;
  Strategy s_;
  std::vector<std::pair<std::string, Type>> scope_;
};

}  // namespace

Type surface_type(const SurfaceEnv& env, const SurfaceTerm& m) {
  return Translator(env, Strategy::CBV).synth(m, "term").second;
}

void surface_check(const SurfaceEnv& env, const SurfaceTerm& m, const Type& a) {
  Translator(env, Strategy::CBV).check(m, a, "term");
}

Term translate(const SurfaceTerm& m, Strategy s, const SurfaceEnv& env, const std::optional<Type>& expected) {
  Translator tr(env, s);
  if (expected) return tr.check(m, *expected, "term");
  return tr.synth(m, "term").first;
}

// ---- substitution and desugaring ---------------------------------------------------

namespace {

void surface_fv(const SurfaceTerm& m, std::vector<std::string>& bound, std::set<std::string>& out) {
  auto is_bound = [&](const std::string& n) { return std::find(bound.begin(), bound.end(), n) != bound.end(); };
  visit(m, overloaded{
               [&](const S::Var& n) {
                 if (!is_bound(n.name)) out.insert(n.name);
               },
               [&](const S::Lam& n) {
                 bound.push_back(n.var);
                 surface_fv(n.body, bound, out);
                 bound.pop_back();
               },
               [&](const S::App& n) {
                 surface_fv(n.fn, bound, out);
                 surface_fv(n.arg, bound, out);
               },
               [&](const S::Succ& n) { surface_fv(n.arg, bound, out); },
               [&](const S::Rec& n) {
                 surface_fv(n.scrutinee, bound, out);
                 surface_fv(n.zero_branch, bound, out);
                 bound.push_back(n.pred_var);
                 bound.push_back(n.result_var);
                 surface_fv(n.succ_branch, bound, out);
                 bound.pop_back();
                 bound.pop_back();
               },
               [&](const auto&) {},
           });
}

std::set<std::string> surface_free_vars(const SurfaceTerm& m) {
  std::vector<std::string> bound;
  std::set<std::string> out;
  surface_fv(m, bound, out);
  return out;
}

}  // namespace

SurfaceTerm surface_subst(const SurfaceTerm& m, const std::string& x, const SurfaceTerm& n) {
  std::set<std::string> fv_n = surface_free_vars(n);
  // Substitutes under binders `names`, renaming any that would capture.
  auto under = [&](std::vector<std::string> names, const SurfaceTerm& body) -> std::pair<std::vector<std::string>, SurfaceTerm> {
    for (const auto& b : names)
      if (b == x) return {names, body};
    SurfaceTerm out = body;
    std::set<std::string> fv_body;
    bool checked = false;
    for (auto& b : names) {
      if (!fv_n.count(b)) continue;
      if (!checked) {
        fv_body = surface_free_vars(body);
        checked = true;
        if (!fv_body.count(x)) return {names, body};
      }
      std::set<std::string> avoid = fv_n;
      avoid.insert(fv_body.begin(), fv_body.end());
      avoid.insert(names.begin(), names.end());
      std::string fresh = fresh_name(avoid, b);
      out = surface_subst(out, b, S::var(fresh));
      b = fresh;
    }
    return {names, surface_subst(out, x, n)};
  };
  return visit(m, overloaded{
                      [&](const S::Var& v) -> SurfaceTerm { return v.name == x ? n : m; },
                      [&](const S::Lam& l) -> SurfaceTerm {
                        auto [names, body] = under({l.var}, l.body);
                        if (names[0] == l.var && body.same_node(l.body)) return m;
                        return S::lam(names[0], body, l.annot);
                      },
                      [&](const S::App& a) -> SurfaceTerm {
                        SurfaceTerm f = surface_subst(a.fn, x, n);
                        SurfaceTerm g = surface_subst(a.arg, x, n);
                        if (f.same_node(a.fn) && g.same_node(a.arg)) return m;
                        return S::app(f, g);
                      },
                      [&](const S::Succ& s) -> SurfaceTerm {
                        SurfaceTerm a = surface_subst(s.arg, x, n);
                        return a.same_node(s.arg) ? m : S::succ(a);
                      },
                      [&](const S::Rec& r) -> SurfaceTerm {
                        SurfaceTerm scrut = surface_subst(r.scrutinee, x, n);
                        SurfaceTerm z = surface_subst(r.zero_branch, x, n);
                        auto [names, sb] = under({r.pred_var, r.result_var}, r.succ_branch);
                        if (scrut.same_node(r.scrutinee) && z.same_node(r.zero_branch) && names[0] == r.pred_var &&
                            names[1] == r.result_var && sb.same_node(r.succ_branch))
                          return m;
                        return S::rec(scrut, z, names[0], names[1], sb, r.result_type);
                      },
                      [&](const auto&) -> SurfaceTerm { return m; },
                  });
}

SurfaceTerm desugar(const SurfaceTerm& m, const std::map<std::string, SurfaceTerm>& defs) {
  return visit(m, overloaded{
                      [&](const S::NumLit& n) -> SurfaceTerm {
                        SurfaceTerm t = S::zero();
                        for (std::uint64_t i = 0; i < n.value; ++i) t = S::succ(t);
                        return t;
                      },
                      [&](const S::Ref& r) -> SurfaceTerm {
                        auto it = defs.find(r.name);
                        if (it == defs.end()) return m;
                        return desugar(it->second, defs);
                      },
                      [&](const S::Lam& l) -> SurfaceTerm { return S::lam(l.var, desugar(l.body, defs), l.annot); },
                      [&](const S::App& a) -> SurfaceTerm { return S::app(desugar(a.fn, defs), desugar(a.arg, defs)); },
                      [&](const S::Succ& s) -> SurfaceTerm { return S::succ(desugar(s.arg, defs)); },
                      [&](const S::Rec& r) -> SurfaceTerm {
                        return S::rec(desugar(r.scrutinee, defs), desugar(r.zero_branch, defs), r.pred_var,
                                      r.result_var, desugar(r.succ_branch, defs), r.result_type);
                      },
                      [&](const auto&) -> SurfaceTerm { return m; },
                  });
}

// ---- reference interpreter -----------------------------------------------------------

bool surface_is_value(const SurfaceTerm& m, Strategy s) {
  if (s == Strategy::CBN) return true;
  const SurfaceTerm* cur = &m;
  while (const auto* n = cur->as<S::Succ>()) cur = &n->arg;
  return cur->is<S::Var>() || cur->is<S::Lam>() || cur->is<S::Zero>() || cur->is<S::NumLit>();
}

namespace {

struct RefStep {
  SurfaceTerm next;
  RuleTag rule;
};

// One rule application inside the strategy's evaluation context.
std::optional<RefStep> ref_step(const SurfaceTerm& m, Strategy s) {
  if (const auto* a = m.as<S::App>()) {
    if (const auto* l = a->fn.as<S::Lam>()) {
      if (s == Strategy::CBN || surface_is_value(a->arg, s))
        return RefStep{surface_subst(l->body, l->var, a->arg), RuleTag::BetaArrow};
      auto inner = ref_step(a->arg, s);
      if (!inner) return std::nullopt;
      return RefStep{S::app(a->fn, inner->next), inner->rule};
    }
    auto inner = ref_step(a->fn, s);
    if (inner) return RefStep{S::app(inner->next, a->arg), inner->rule};
    return std::nullopt;
  }
  if (const auto* r = m.as<S::Rec>()) {
    if (r->scrutinee.is<S::Zero>()) return RefStep{r->zero_branch, RuleTag::BetaZero};
    if (const auto* sc = r->scrutinee.as<S::Succ>(); sc && surface_is_value(sc->arg, s)) {
      const SurfaceTerm& v = sc->arg;
      SurfaceTerm body = r->pred_var == r->result_var ? r->succ_branch : surface_subst(r->succ_branch, r->pred_var, v);
      SurfaceTerm again = S::rec(v, r->zero_branch, r->pred_var, r->result_var, r->succ_branch, r->result_type);
      SurfaceTerm fn = S::lam(r->result_var, body, r->result_type);
      return RefStep{S::app(fn, again), RuleTag::BetaSucc};
    }
    auto inner = ref_step(r->scrutinee, s);
    if (!inner) return std::nullopt;
    return RefStep{S::rec(inner->next, r->zero_branch, r->pred_var, r->result_var, r->succ_branch, r->result_type),
                   inner->rule};
  }
  if (const auto* sc = m.as<S::Succ>(); sc && s == Strategy::CBV) {
    auto inner = ref_step(sc->arg, s);
    if (!inner) return std::nullopt;
    return RefStep{S::succ(inner->next), inner->rule};
  }
  return std::nullopt;
}

}  // namespace

ReferenceResult reference_eval(const SurfaceTerm& m, Strategy s, std::uint64_t fuel) {
  ReferenceResult res{m, {}};
  for (;;) {
    auto next = ref_step(res.normal_form, s);
    if (!next) {
      res.stats.outcome = Outcome::Final;
      return res;
    }
    if (res.stats.total >= fuel) {
      res.stats.outcome = Outcome::OutOfFuel;
      return res;
    }
    res.stats.record(next->rule);
    res.normal_form = next->next;
  }
}

std::uint64_t reference_numeral(const SurfaceTerm& m, Strategy s, std::uint64_t fuel, RunStats* stats) {
  std::uint64_t n = 0;
  std::uint64_t used = 0;
  SurfaceTerm cur = m;
  for (;;) {
    ReferenceResult r = reference_eval(cur, s, fuel - used);
    used += r.stats.total;
    if (stats) stats->absorb(r.stats);
    if (r.stats.outcome == Outcome::OutOfFuel) throw MachineError(MachineError::Kind::OutOfFuel, "out of fuel");
    SurfaceTerm nf = r.normal_form;
    while (const auto* sc = nf.as<S::Succ>()) {
      ++n;
      SurfaceTerm arg = sc->arg;
      nf = arg;
      if (s == Strategy::CBN) break;
    }
    if (nf.is<S::Zero>()) return n;
    if (s == Strategy::CBN && !nf.same_node(r.normal_form)) {
      cur = nf;
      continue;
    }
    throw MachineError(MachineError::Kind::ElementNotNat, "not a numeral: " + pretty(r.normal_form));
  }
}

}  // namespace dualvm
