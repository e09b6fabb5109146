#include "dualvm/duality.hpp"

namespace dualvm {

void DualityContext::pair(const std::string& var, const std::string& covar) {
  if (auto it = var_to_covar_.find(var); it != var_to_covar_.end()) covar_to_var_.erase(it->second);
  if (auto it = covar_to_var_.find(covar); it != covar_to_var_.end()) var_to_covar_.erase(it->second);
  var_to_covar_[var] = covar;
  covar_to_var_[covar] = var;
}

std::string DualityContext::covar_for(const std::string& var) const {
  auto it = var_to_covar_.find(var);
  return it == var_to_covar_.end() ? var : it->second;
}

std::string DualityContext::var_for(const std::string& covar) const {
  auto it = covar_to_var_.find(covar);
  return it == covar_to_var_.end() ? covar : it->second;
}

Type dual_type(const Type& a) {
  switch (a.kind()) {
    case Type::Kind::Numbered:
      return Type::stream(dual_type(a.elem()));
    case Type::Kind::Stream:
      return Type::numbered(dual_type(a.elem()));
    case Type::Kind::Prod:
      return Type::sum(dual_type(a.left()), dual_type(a.right()));
    case Type::Kind::Sum:
      return Type::prod(dual_type(a.left()), dual_type(a.right()));
    case Type::Kind::Atom:
      return Type::atom(a.atom_name(), !a.atom_negated());
    case Type::Kind::Nat:
      throw NotDualizable("type", "Nat");
    case Type::Kind::Fn:
      throw NotDualizable("type", "the function type " + to_string(a));
  }
  throw NotDualizable("type", to_string(a));
}

namespace {

std::optional<Type> dual_opt(const std::optional<Type>& a, const std::string& path) {
  if (!a) return std::nullopt;
  try {
    return dual_type(*a);
  } catch (const NotDualizable& e) {
    throw NotDualizable(path + " type", e.subject);
  }
}

struct Dualizer {
  Command cmd(const Command& c, const DualityContext& ctx, const std::string& path) {
    return build::cut(coterm(c.consumer, ctx, path + ".consumer"), term(c.producer, ctx, path + ".producer"));
  }

  CoTerm term(const Term& t, const DualityContext& ctx, const std::string& path) {
    using namespace build;
    return visit(t, overloaded{
                        [&](const Var& n) { return covar(ctx.covar_for(n.name)); },
                        [&](const Mu& n) {
                          DualityContext inner = ctx;
                          inner.pair(n.covar, n.covar);
                          return mutilde(n.covar, cmd(n.body, inner, path + ".body"), dual_opt(n.annot, path));
                        },
                        [&](const NumZero& n) { return head(term(n.arg, ctx, path + ".arg")); },
                        [&](const NumSucc& n) { return tail(term(n.arg, ctx, path + ".arg")); },
                        [&](const Pair& n) {
                          return sum_case(term(n.first, ctx, path + ".first"), term(n.second, ctx, path + ".second"));
                        },
                        [&](const InL& n) { return fst(term(n.arg, ctx, path + ".arg"), dual_opt(n.annot, path)); },
                        [&](const InR& n) { return snd(term(n.arg, ctx, path + ".arg"), dual_opt(n.annot, path)); },
                        [&](const CoRec& n) {
                          DualityContext h = ctx;
                          h.pair(n.head_covar, n.head_covar);
                          DualityContext tl = ctx;
                          tl.pair(n.tail_covar, n.tail_covar);
                          tl.pair(n.seed_covar, n.seed_covar);
                          return rec_num(n.head_covar, coterm(n.head_body, h, path + ".head"), n.tail_covar,
                                         n.seed_covar, coterm(n.tail_body, tl, path + ".tail"),
                                         term(n.seed, ctx, path + ".seed"), dual_opt(n.elem, path),
                                         dual_opt(n.seed_type, path));
                        },
                        [&](const Lam&) -> CoTerm { throw NotDualizable(path, "a lambda abstraction"); },
                        [&](const Zero&) -> CoTerm { throw NotDualizable(path, "Z"); },
                        [&](const Succ&) -> CoTerm { throw NotDualizable(path, "S"); },
                    });
  }

  Term coterm(const CoTerm& e, const DualityContext& ctx, const std::string& path) {
    using namespace build;
    return visit(e, overloaded{
                        [&](const CoVar& n) { return var(ctx.var_for(n.name)); },
                        [&](const MuTilde& n) {
                          DualityContext inner = ctx;
                          inner.pair(n.var, n.var);
                          return mu(n.var, cmd(n.body, inner, path + ".body"), dual_opt(n.annot, path));
                        },
                        [&](const Head& n) { return num_zero(coterm(n.rest, ctx, path + ".rest")); },
                        [&](const Tail& n) { return num_succ(coterm(n.rest, ctx, path + ".rest")); },
                        [&](const SumCase& n) {
                          return pair(coterm(n.left, ctx, path + ".left"), coterm(n.right, ctx, path + ".right"));
                        },
                        [&](const Fst& n) { return inl(coterm(n.rest, ctx, path + ".rest"), dual_opt(n.annot, path)); },
                        [&](const Snd& n) { return inr(coterm(n.rest, ctx, path + ".rest"), dual_opt(n.annot, path)); },
                        [&](const RecNum& n) {
                          DualityContext z = ctx;
                          z.pair(n.payload_var, n.payload_var);
                          DualityContext sc = ctx;
                          sc.pair(n.pred_var, n.pred_var);
                          sc.pair(n.result_var, n.result_var);
                          return corec(n.payload_var, term(n.zero_branch, z, path + ".zero"), n.pred_var,
                                       n.result_var, term(n.succ_branch, sc, path + ".succ"),
                                       coterm(n.ret, ctx, path + ".ret"), dual_opt(n.payload_type, path),
                                       dual_opt(n.result_type, path));
                        },
                        [&](const Call&) -> Term { throw NotDualizable(path, "a call stack"); },
                        [&](const RecNat&) -> Term { throw NotDualizable(path, "the Nat recursor"); },
                    });
  }
};

}  // namespace

CoTerm dual_term(const Term& v, const DualityContext& ctx) { return Dualizer{}.term(v, ctx, "term"); }
Term dual_coterm(const CoTerm& e, const DualityContext& ctx) { return Dualizer{}.coterm(e, ctx, "coterm"); }
Command dual_command(const Command& c, const DualityContext& ctx) { return Dualizer{}.cmd(c, ctx, "cmd"); }

Strategy dual_strategy(Strategy s) { return s == Strategy::CBV ? Strategy::CBN : Strategy::CBV; }

std::optional<RuleTag> dual_rule(RuleTag r) {
  switch (r) {
    case RuleTag::Mu: return RuleTag::MuTilde;
    case RuleTag::MuTilde: return RuleTag::Mu;
    case RuleTag::BetaNumZero: return RuleTag::BetaHead;
    case RuleTag::BetaHead: return RuleTag::BetaNumZero;
    case RuleTag::BetaNumSucc: return RuleTag::BetaTail;
    case RuleTag::BetaTail: return RuleTag::BetaNumSucc;
    case RuleTag::BetaFst: return RuleTag::BetaInL;
    case RuleTag::BetaInL: return RuleTag::BetaFst;
    case RuleTag::BetaSnd: return RuleTag::BetaInR;
    case RuleTag::BetaInR: return RuleTag::BetaSnd;
    default: return std::nullopt;
  }
}

TypeEnv dual_env(const TypeEnv& env, const DualityContext& ctx) {
  TypeEnv out;
  for (const auto& [x, a] : env.vars) out.covars.insert_or_assign(ctx.covar_for(x), dual_type(a));
  for (const auto& [k, a] : env.covars) out.vars.insert_or_assign(ctx.var_for(k), dual_type(a));
  return out;
}

bool dualizable(const Command& c) {
  try {
    dual_command(c);
    return true;
  } catch (const NotDualizable&) {
    return false;
  }
}

}  // namespace dualvm
