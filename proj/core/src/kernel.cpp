#include "dualvm/kernel.hpp"

#include <algorithm>
#include <cctype>
#include <utility>
#include <variant>

namespace dualvm {

// ---- classification ------------------------------------------------------------

bool is_value(const Term& t, Strategy s) { return s == Strategy::CBN || t.node().cbv_value; }

bool is_covalue(const CoTerm& e, Strategy s) { return s == Strategy::CBV || e.node().cbn_covalue; }

// ---- free names ----------------------------------------------------------------------

namespace {

enum class NameClass { Var, CoVar };

}  // namespace

FreeNames free_names(const Term& t) { return *t.node().free; }

FreeNames free_names(const CoTerm& e) { return *e.node().free; }

FreeNames free_names(const Command& c) {
  FreeNames out = *c.producer.node().free;
  const FreeNames& k = *c.consumer.node().free;
  out.vars.insert(k.vars.begin(), k.vars.end());
  out.covars.insert(k.covars.begin(), k.covars.end());
  return out;
}

std::string fresh_name(const std::set<std::string>& avoid, const std::string& hint) {
  if (!avoid.count(hint)) return hint;
  std::string stem = hint;
  while (!stem.empty() && std::isdigit(static_cast<unsigned char>(stem.back()))) stem.pop_back();
  for (std::size_t i = 1;; ++i) {
    std::string candidate = stem + std::to_string(i);
    if (!avoid.count(candidate)) return candidate;
  }
}

// ---- substitution -----------------------------------------------------------------

namespace {

bool same(const Command& a, const Command& b) {
  return a.producer.same_node(b.producer) && a.consumer.same_node(b.consumer);
}

class Substituter {
 public:
  Substituter(NameClass cls, std::string target, std::variant<Term, CoTerm> repl)
      : cls_(cls), target_(std::move(target)), repl_(std::move(repl)) {
    repl_fv_ = std::visit([](const auto& r) { return free_names(r); }, repl_);
  }

  Term apply(const Term& t) { return term(t); }
  CoTerm apply(const CoTerm& e) { return coterm(e); }
  Command apply(const Command& c) { return command(c); }

  Term term(const Term& t) {
    using namespace build;
    if (!mentions(*t.node().free)) return t;
    return visit(t, overloaded{
                        [&](const Var& n) -> Term {
                          if (cls_ == NameClass::Var && n.name == target_) return std::get<Term>(repl_);
                          return t;
                        },
                        [&](const Mu& n) -> Term {
                          auto [names, body] = bind(NameClass::CoVar, {n.covar}, n.body);
                          if (names[0] == n.covar && same(body, n.body)) return t;
                          return mu(names[0], body, n.annot);
                        },
                        [&](const Lam& n) -> Term {
                          auto [names, body] = bind(NameClass::Var, {n.var}, n.body);
                          if (names[0] == n.var && body.same_node(n.body)) return t;
                          return lam(names[0], body, n.annot);
                        },
                        [&](const Zero&) -> Term { return t; },
                        [&](const Succ& n) -> Term { return unary(t, n.arg, succ); },
                        [&](const NumZero& n) -> Term { return unary(t, n.arg, num_zero); },
                        [&](const NumSucc& n) -> Term { return unary(t, n.arg, num_succ); },
                        [&](const Pair& n) -> Term {
                          Term a = term(n.first);
                          Term b = term(n.second);
                          if (a.same_node(n.first) && b.same_node(n.second)) return t;
                          return pair(a, b);
                        },
                        [&](const InL& n) -> Term {
                          Term a = term(n.arg);
                          if (a.same_node(n.arg)) return t;
                          return inl(a, n.annot);
                        },
                        [&](const InR& n) -> Term {
                          Term a = term(n.arg);
                          if (a.same_node(n.arg)) return t;
                          return inr(a, n.annot);
                        },
                        [&](const CoRec& n) -> Term {
                          auto [hn, hb] = bind(NameClass::CoVar, {n.head_covar}, n.head_body);
                          auto [tn, tb] = bind(NameClass::CoVar, {n.tail_covar, n.seed_covar}, n.tail_body);
                          Term seed = term(n.seed);
                          if (hn[0] == n.head_covar && hb.same_node(n.head_body) && tn[0] == n.tail_covar &&
                              tn[1] == n.seed_covar && tb.same_node(n.tail_body) && seed.same_node(n.seed))
                            return t;
                          return corec(hn[0], hb, tn[0], tn[1], tb, seed, n.elem, n.seed_type);
                        },
                    });
  }

  CoTerm coterm(const CoTerm& e) {
    using namespace build;
    if (!mentions(*e.node().free)) return e;
    return visit(e, overloaded{
                        [&](const CoVar& n) -> CoTerm {
                          if (cls_ == NameClass::CoVar && n.name == target_) return std::get<CoTerm>(repl_);
                          return e;
                        },
                        [&](const MuTilde& n) -> CoTerm {
                          auto [names, body] = bind(NameClass::Var, {n.var}, n.body);
                          if (names[0] == n.var && same(body, n.body)) return e;
                          return mutilde(names[0], body, n.annot);
                        },
                        [&](const Call& n) -> CoTerm {
                          Term a = term(n.arg);
                          CoTerm r = coterm(n.rest);
                          if (a.same_node(n.arg) && r.same_node(n.rest)) return e;
                          return call(a, r);
                        },
                        [&](const RecNat& n) -> CoTerm {
                          Term z = term(n.zero_branch);
                          auto [names, sb] = bind(NameClass::Var, {n.pred_var, n.result_var}, n.succ_branch);
                          CoTerm r = coterm(n.ret);
                          if (z.same_node(n.zero_branch) && names[0] == n.pred_var && names[1] == n.result_var &&
                              sb.same_node(n.succ_branch) && r.same_node(n.ret))
                            return e;
                          return rec_nat(z, names[0], names[1], sb, r, n.result_type);
                        },
                        [&](const RecNum& n) -> CoTerm {
                          auto [zn, z] = bind(NameClass::Var, {n.payload_var}, n.zero_branch);
                          auto [names, sb] = bind(NameClass::Var, {n.pred_var, n.result_var}, n.succ_branch);
                          CoTerm r = coterm(n.ret);
                          if (zn[0] == n.payload_var && z.same_node(n.zero_branch) && names[0] == n.pred_var &&
                              names[1] == n.result_var && sb.same_node(n.succ_branch) && r.same_node(n.ret))
                            return e;
                          return rec_num(zn[0], z, names[0], names[1], sb, r, n.payload_type, n.result_type);
                        },
                        [&](const Head& n) -> CoTerm { return unary(e, n.rest, head); },
                        [&](const Tail& n) -> CoTerm { return unary(e, n.rest, tail); },
                        [&](const Fst& n) -> CoTerm {
                          CoTerm r = coterm(n.rest);
                          if (r.same_node(n.rest)) return e;
                          return fst(r, n.annot);
                        },
                        [&](const Snd& n) -> CoTerm {
                          CoTerm r = coterm(n.rest);
                          if (r.same_node(n.rest)) return e;
                          return snd(r, n.annot);
                        },
                        [&](const SumCase& n) -> CoTerm {
                          CoTerm l = coterm(n.left);
                          CoTerm r = coterm(n.right);
                          if (l.same_node(n.left) && r.same_node(n.right)) return e;
                          return sum_case(l, r, n.annot);
                        },
                    });
  }

  Command command(const Command& c) {
    Term p = term(c.producer);
    CoTerm k = coterm(c.consumer);
    if (p.same_node(c.producer) && k.same_node(c.consumer)) return c;
    return Command{p, k};
  }

 private:
  bool mentions(const FreeNames& fv) const {
    return (cls_ == NameClass::Var ? fv.vars : fv.covars).count(target_) > 0;
  }

  template <class Node, class Ctor>
  Node unary(const Node& self, const Node& child, Ctor ctor) {
    Node r = apply(child);
    if (r.same_node(child)) return self;
    return ctor(r);
  }

  // Pushes the substitution under a group of binders of one class, renaming
  // any binder that would capture a free name of the replacement.
  template <class Body>
  std::pair<std::vector<std::string>, Body> bind(NameClass cls, std::vector<std::string> names,
                                                 const Body& body) {
    if (cls == cls_) {
      for (const auto& n : names)
        if (n == target_) return {std::move(names), body};
    }
    const auto& capturing = cls == NameClass::Var ? repl_fv_.vars : repl_fv_.covars;
    bool may_capture = std::any_of(names.begin(), names.end(), [&](const std::string& n) { return capturing.count(n) > 0; });
    if (!may_capture) return {std::move(names), apply(body)};

    FreeNames fv = free_names(body);
    const auto& target_fv = cls_ == NameClass::Var ? fv.vars : fv.covars;
    if (!target_fv.count(target_)) return {std::move(names), body};

    std::set<std::string> avoid = capturing;
    const auto& same_class_fv = cls == NameClass::Var ? fv.vars : fv.covars;
    avoid.insert(same_class_fv.begin(), same_class_fv.end());
    avoid.insert(names.begin(), names.end());
    Body renamed = body;
    for (auto& n : names) {
      if (!capturing.count(n)) continue;
      std::string fresh = fresh_name(avoid, n);
      avoid.insert(fresh);
      if (cls == NameClass::Var)
        renamed = Substituter(cls, n, build::var(fresh)).apply(renamed);
      else
        renamed = Substituter(cls, n, build::covar(fresh)).apply(renamed);
      n = fresh;
    }
    return {std::move(names), apply(renamed)};
  }

  NameClass cls_;
  std::string target_;
  std::variant<Term, CoTerm> repl_;
  FreeNames repl_fv_;
};

}  // namespace

Command subst_var(const Command& c, const std::string& x, const Term& v) {
  return Substituter(NameClass::Var, x, v).apply(c);
}
Term subst_var(const Term& t, const std::string& x, const Term& v) {
  return Substituter(NameClass::Var, x, v).apply(t);
}
CoTerm subst_var(const CoTerm& e, const std::string& x, const Term& v) {
  return Substituter(NameClass::Var, x, v).apply(e);
}
Command subst_covar(const Command& c, const std::string& a, const CoTerm& e) {
  return Substituter(NameClass::CoVar, a, e).apply(c);
}
Term subst_covar(const Term& t, const std::string& a, const CoTerm& e) {
  return Substituter(NameClass::CoVar, a, e).apply(t);
}
CoTerm subst_covar(const CoTerm& e, const std::string& a, const CoTerm& k) {
  return Substituter(NameClass::CoVar, a, k).apply(e);
}

// ---- alpha equivalence ---------------------------------------------------------------

namespace {

bool annot_eq(const std::optional<Type>& a, const std::optional<Type>& b) { return !a || !b || *a == *b; }

class AlphaEq {
 public:
  bool term(const Term& a, const Term& b) {
    if (a.node().index() != b.node().index()) return false;
    return visit(a, overloaded{
                        [&](const Var& x) { return name_eq(vars_, x.name, b.as<Var>()->name); },
                        [&](const Mu& x) {
                          const auto& y = *b.as<Mu>();
                          if (!annot_eq(x.annot, y.annot)) return false;
                          covars_.push_back({x.covar, y.covar});
                          bool r = command(x.body, y.body);
                          covars_.pop_back();
                          return r;
                        },
                        [&](const Lam& x) {
                          const auto& y = *b.as<Lam>();
                          if (!annot_eq(x.annot, y.annot)) return false;
                          vars_.push_back({x.var, y.var});
                          bool r = term(x.body, y.body);
                          vars_.pop_back();
                          return r;
                        },
                        [&](const Zero&) { return true; },
                        [&](const Succ& x) { return term(x.arg, b.as<Succ>()->arg); },
                        [&](const NumZero& x) { return term(x.arg, b.as<NumZero>()->arg); },
                        [&](const NumSucc& x) { return term(x.arg, b.as<NumSucc>()->arg); },
                        [&](const Pair& x) {
                          const auto& y = *b.as<Pair>();
                          return term(x.first, y.first) && term(x.second, y.second);
                        },
                        [&](const InL& x) {
                          const auto& y = *b.as<InL>();
                          return annot_eq(x.annot, y.annot) && term(x.arg, y.arg);
                        },
                        [&](const InR& x) {
                          const auto& y = *b.as<InR>();
                          return annot_eq(x.annot, y.annot) && term(x.arg, y.arg);
                        },
                        [&](const CoRec& x) {
                          const auto& y = *b.as<CoRec>();
                          if (!annot_eq(x.elem, y.elem) || !annot_eq(x.seed_type, y.seed_type)) return false;
                          covars_.push_back({x.head_covar, y.head_covar});
                          bool r = coterm(x.head_body, y.head_body);
                          covars_.pop_back();
                          if (!r) return false;
                          covars_.push_back({x.tail_covar, y.tail_covar});
                          covars_.push_back({x.seed_covar, y.seed_covar});
                          r = coterm(x.tail_body, y.tail_body);
                          covars_.pop_back();
                          covars_.pop_back();
                          return r && term(x.seed, y.seed);
                        },
                    });
  }

  bool coterm(const CoTerm& a, const CoTerm& b) {
    if (a.node().index() != b.node().index()) return false;
    return visit(a, overloaded{
                        [&](const CoVar& x) { return name_eq(covars_, x.name, b.as<CoVar>()->name); },
                        [&](const MuTilde& x) {
                          const auto& y = *b.as<MuTilde>();
                          if (!annot_eq(x.annot, y.annot)) return false;
                          vars_.push_back({x.var, y.var});
                          bool r = command(x.body, y.body);
                          vars_.pop_back();
                          return r;
                        },
                        [&](const Call& x) {
                          const auto& y = *b.as<Call>();
                          return term(x.arg, y.arg) && coterm(x.rest, y.rest);
                        },
                        [&](const RecNat& x) {
                          const auto& y = *b.as<RecNat>();
                          if (!annot_eq(x.result_type, y.result_type)) return false;
                          if (!term(x.zero_branch, y.zero_branch)) return false;
                          vars_.push_back({x.pred_var, y.pred_var});
                          vars_.push_back({x.result_var, y.result_var});
                          bool r = term(x.succ_branch, y.succ_branch);
                          vars_.pop_back();
                          vars_.pop_back();
                          return r && coterm(x.ret, y.ret);
                        },
                        [&](const RecNum& x) {
                          const auto& y = *b.as<RecNum>();
                          if (!annot_eq(x.result_type, y.result_type) || !annot_eq(x.payload_type, y.payload_type))
                            return false;
                          vars_.push_back({x.payload_var, y.payload_var});
                          bool r = term(x.zero_branch, y.zero_branch);
                          vars_.pop_back();
                          if (!r) return false;
                          vars_.push_back({x.pred_var, y.pred_var});
                          vars_.push_back({x.result_var, y.result_var});
                          r = term(x.succ_branch, y.succ_branch);
                          vars_.pop_back();
                          vars_.pop_back();
                          return r && coterm(x.ret, y.ret);
                        },
                        [&](const Head& x) { return coterm(x.rest, b.as<Head>()->rest); },
                        [&](const Tail& x) { return coterm(x.rest, b.as<Tail>()->rest); },
                        [&](const Fst& x) {
                          const auto& y = *b.as<Fst>();
                          return annot_eq(x.annot, y.annot) && coterm(x.rest, y.rest);
                        },
                        [&](const Snd& x) {
                          const auto& y = *b.as<Snd>();
                          return annot_eq(x.annot, y.annot) && coterm(x.rest, y.rest);
                        },
                        [&](const SumCase& x) {
                          const auto& y = *b.as<SumCase>();
                          return annot_eq(x.annot, y.annot) && coterm(x.left, y.left) && coterm(x.right, y.right);
                        },
                    });
  }

  bool command(const Command& a, const Command& b) {
    return term(a.producer, b.producer) && coterm(a.consumer, b.consumer);
  }

 private:
  using Scope = std::vector<std::pair<std::string, std::string>>;

  // Bound names must refer to the same binder position; free names must match.
  static bool name_eq(const Scope& scope, const std::string& a, const std::string& b) {
    std::ptrdiff_t ia = -1, ib = -1;
    for (std::ptrdiff_t i = static_cast<std::ptrdiff_t>(scope.size()) - 1; i >= 0; --i) {
      if (ia < 0 && scope[static_cast<std::size_t>(i)].first == a) ia = i;
      if (ib < 0 && scope[static_cast<std::size_t>(i)].second == b) ib = i;
      if (ia >= 0 && ib >= 0) break;
    }
    if (ia < 0 && ib < 0) return a == b;
    return ia == ib;
  }

  Scope vars_;
  Scope covars_;
};

}  // namespace

bool alpha_eq(const Term& a, const Term& b) { return AlphaEq().term(a, b); }
bool alpha_eq(const CoTerm& a, const CoTerm& b) { return AlphaEq().coterm(a, b); }
bool alpha_eq(const Command& a, const Command& b) { return AlphaEq().command(a, b); }

// ---- well-formedness ---------------------------------------------------------------

namespace {

class WellFormed {
 public:
  explicit WellFormed(Strategy s) : s_(s) {}
  std::vector<Violation> out;

  void term(const Term& t, const std::string& path) {
    visit(t, overloaded{
                 [&](const Var&) {},
                 [&](const Zero&) {},
                 [&](const Mu& n) { command(n.body, path + ".body"); },
                 [&](const Lam& n) { term(n.body, path + ".body"); },
                 [&](const Succ& n) { value_arg(n.arg, path + ".arg", "Succ argument"); },
                 [&](const NumZero& n) { value_arg(n.arg, path + ".arg", "numbered Zero argument"); },
                 [&](const NumSucc& n) { value_arg(n.arg, path + ".arg", "numbered Succ argument"); },
                 [&](const Pair& n) {
                   term(n.first, path + ".first");
                   term(n.second, path + ".second");
                 },
                 [&](const InL& n) { value_arg(n.arg, path + ".arg", "inl argument"); },
                 [&](const InR& n) { value_arg(n.arg, path + ".arg", "inr argument"); },
                 [&](const CoRec& n) {
                   coterm(n.head_body, path + ".head");
                   coterm(n.tail_body, path + ".tail");
                   value_arg(n.seed, path + ".seed", "corecursor seed");
                 },
             });
  }

  void coterm(const CoTerm& e, const std::string& path) {
    visit(e, overloaded{
                 [&](const CoVar&) {},
                 [&](const MuTilde& n) { command(n.body, path + ".body"); },
                 [&](const Call& n) {
                   value_arg(n.arg, path + ".arg", "call-stack argument");
                   covalue_tail(n.rest, path + ".rest", "call-stack continuation");
                 },
                 [&](const RecNat& n) {
                   term(n.zero_branch, path + ".zero");
                   term(n.succ_branch, path + ".succ");
                   covalue_tail(n.ret, path + ".ret", "recursor return continuation");
                 },
                 [&](const RecNum& n) {
                   term(n.zero_branch, path + ".zero");
                   term(n.succ_branch, path + ".succ");
                   covalue_tail(n.ret, path + ".ret", "recursor return continuation");
                 },
                 [&](const Head& n) { covalue_tail(n.rest, path + ".rest", "head continuation"); },
                 [&](const Tail& n) { covalue_tail(n.rest, path + ".rest", "tail continuation"); },
                 [&](const Fst& n) { covalue_tail(n.rest, path + ".rest", "fst continuation"); },
                 [&](const Snd& n) { covalue_tail(n.rest, path + ".rest", "snd continuation"); },
                 [&](const SumCase& n) {
                   coterm(n.left, path + ".left");
                   coterm(n.right, path + ".right");
                 },
             });
  }

  void command(const Command& c, const std::string& path) {
    term(c.producer, path + ".producer");
    coterm(c.consumer, path + ".consumer");
  }

 private:
  void value_arg(const Term& t, const std::string& path, const char* what) {
    if (!is_value(t, s_))
      out.push_back({path, std::string(what) + " must be a value under " + to_string(s_)});
    term(t, path);
  }

  void covalue_tail(const CoTerm& e, const std::string& path, const char* what) {
    if (!is_covalue(e, s_))
      out.push_back({path, std::string(what) + " must be a covalue under " + to_string(s_)});
    coterm(e, path);
  }

  Strategy s_;
};

}  // namespace

std::vector<Violation> well_formed(const Command& c, Strategy s) {
  WellFormed wf(s);
  wf.command(c, "cmd");
  return std::move(wf.out);
}

std::vector<Violation> well_formed(const Term& t, Strategy s) {
  WellFormed wf(s);
  wf.term(t, "term");
  return std::move(wf.out);
}

std::vector<Violation> well_formed(const CoTerm& e, Strategy s) {
  WellFormed wf(s);
  wf.coterm(e, "coterm");
  return std::move(wf.out);
}

// ---- size --------------------------------------------------------------------------------

std::size_t size(const Command& c) { return size(c.producer) + size(c.consumer); }

std::size_t size(const Term& t) {
  return 1 + visit(t, overloaded{
                          [](const Var&) -> std::size_t { return 0; },
                          [](const Zero&) -> std::size_t { return 0; },
                          [](const Mu& n) { return size(n.body); },
                          [](const Lam& n) { return size(n.body); },
                          [](const Succ& n) { return size(n.arg); },
                          [](const NumZero& n) { return size(n.arg); },
                          [](const NumSucc& n) { return size(n.arg); },
                          [](const Pair& n) { return size(n.first) + size(n.second); },
                          [](const InL& n) { return size(n.arg); },
                          [](const InR& n) { return size(n.arg); },
                          [](const CoRec& n) { return size(n.head_body) + size(n.tail_body) + size(n.seed); },
                      });
}

std::size_t size(const CoTerm& e) {
  return 1 + visit(e, overloaded{
                          [](const CoVar&) -> std::size_t { return 0; },
                          [](const MuTilde& n) { return size(n.body); },
                          [](const Call& n) { return size(n.arg) + size(n.rest); },
                          [](const RecNat& n) { return size(n.zero_branch) + size(n.succ_branch) + size(n.ret); },
                          [](const RecNum& n) { return size(n.zero_branch) + size(n.succ_branch) + size(n.ret); },
                          [](const Head& n) { return size(n.rest); },
                          [](const Tail& n) { return size(n.rest); },
                          [](const Fst& n) { return size(n.rest); },
                          [](const Snd& n) { return size(n.rest); },
                          [](const SumCase& n) { return size(n.left) + size(n.right); },
                      });
}

}  // namespace dualvm
