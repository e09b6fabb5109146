#include "dualvm/encodings.hpp"

#include <functional>
#include <set>
#include <stdexcept>

#include "dualvm/kernel.hpp"

namespace dualvm {

namespace {

std::set<std::string> all_names(std::initializer_list<FreeNames> parts) {
  std::set<std::string> out;
  for (const auto& p : parts) {
    out.insert(p.vars.begin(), p.vars.end());
    out.insert(p.covars.begin(), p.covars.end());
  }
  return out;
}

// Bottom-up rewrite; `on_term`/`on_coterm` see nodes whose children are done.
struct Rewriter {
  std::function<Term(const Term&)> on_term;
  std::function<CoTerm(const CoTerm&)> on_coterm;

  Command cmd(const Command& c) { return build::cut(term(c.producer), coterm(c.consumer)); }

  Term term(const Term& t) {
    using namespace build;
    Term r = visit(t, overloaded{
                          [&](const Var&) { return t; },
                          [&](const Zero&) { return t; },
                          [&](const Mu& n) { return mu(n.covar, cmd(n.body), n.annot); },
                          [&](const Lam& n) { return lam(n.var, term(n.body), n.annot); },
                          [&](const Succ& n) { return succ(term(n.arg)); },
                          [&](const NumZero& n) { return num_zero(term(n.arg)); },
                          [&](const NumSucc& n) { return num_succ(term(n.arg)); },
                          [&](const Pair& n) { return pair(term(n.first), term(n.second)); },
                          [&](const InL& n) { return inl(term(n.arg), n.annot); },
                          [&](const InR& n) { return inr(term(n.arg), n.annot); },
                          [&](const CoRec& n) {
                            return corec(n.head_covar, coterm(n.head_body), n.tail_covar, n.seed_covar,
                                         coterm(n.tail_body), term(n.seed), n.elem, n.seed_type);
                          },
                      });
    return on_term ? on_term(r) : r;
  }

  CoTerm coterm(const CoTerm& e) {
    using namespace build;
    CoTerm r = visit(e, overloaded{
                            [&](const CoVar&) { return e; },
                            [&](const MuTilde& n) { return mutilde(n.var, cmd(n.body), n.annot); },
                            [&](const Call& n) { return call(term(n.arg), coterm(n.rest)); },
                            [&](const RecNat& n) {
                              return rec_nat(term(n.zero_branch), n.pred_var, n.result_var, term(n.succ_branch),
                                             coterm(n.ret), n.result_type);
                            },
                            [&](const RecNum& n) {
                              return rec_num(n.payload_var, term(n.zero_branch), n.pred_var, n.result_var,
                                             term(n.succ_branch), coterm(n.ret), n.payload_type, n.result_type);
                            },
                            [&](const Head& n) { return head(coterm(n.rest)); },
                            [&](const Tail& n) { return tail(coterm(n.rest)); },
                            [&](const Fst& n) { return fst(coterm(n.rest), n.annot); },
                            [&](const Snd& n) { return snd(coterm(n.rest), n.annot); },
                            [&](const SumCase& n) { return sum_case(coterm(n.left), coterm(n.right), n.annot); },
                        });
    return on_coterm ? on_coterm(r) : r;
  }
};

}  // namespace

CoTerm desugar_case(Term zero_branch, std::string pred_var, Term succ_branch, CoTerm ret,
                    std::optional<Type> result_type) {
  std::string y = fresh_name(all_names({free_names(succ_branch)}), "y");
  return build::rec_nat(std::move(zero_branch), std::move(pred_var), y, std::move(succ_branch), std::move(ret),
                        std::move(result_type));
}

CoTerm desugar_iter(Term zero_branch, std::string result_var, Term succ_branch, CoTerm ret,
                    std::optional<Type> result_type) {
  std::string x = fresh_name(all_names({free_names(succ_branch)}), "x");
  return build::rec_nat(std::move(zero_branch), x, std::move(result_var), std::move(succ_branch), std::move(ret),
                        std::move(result_type));
}

Term desugar_cocase(std::string head_covar, CoTerm head_body, std::string tail_covar, CoTerm tail_body, Term seed,
                    std::optional<Type> elem, std::optional<Type> seed_type) {
  std::string g = fresh_name(all_names({free_names(tail_body)}), "g");
  return build::corec(std::move(head_covar), std::move(head_body), std::move(tail_covar), g, std::move(tail_body),
                      std::move(seed), std::move(elem), std::move(seed_type));
}

Term desugar_coiter(std::string head_covar, CoTerm head_body, std::string seed_covar, CoTerm tail_body, Term seed,
                    std::optional<Type> elem, std::optional<Type> seed_type) {
  std::string b = fresh_name(all_names({free_names(tail_body)}), "b");
  return build::corec(std::move(head_covar), std::move(head_body), b, std::move(seed_covar), std::move(tail_body),
                      std::move(seed), std::move(elem), std::move(seed_type));
}

CoTerm encode_rec_via_iter(const CoTerm& rec) {
  using namespace build;
  const auto* r = rec.as<RecNat>();
  if (!r) throw std::invalid_argument("encode_rec_via_iter expects a recursor");
  const std::optional<Type>& a = r->result_type;
  std::optional<Type> prod;
  if (a) prod = Type::prod(Type::nat(), *a);

  std::set<std::string> avoid = all_names({free_names(r->succ_branch), free_names(r->zero_branch)});
  avoid.insert(r->pred_var);
  avoid.insert(r->result_var);
  std::string z = fresh_name(avoid, "z");
  avoid.insert(z);
  std::string k = fresh_name(avoid, "k");
  avoid.insert(k);
  std::string b1 = fresh_name(avoid, "b");
  avoid.insert(b1);
  std::string b2 = fresh_name(avoid, "b");

  // (x, y). pair(S x, w)
  Term step = mu(k,
                 cut(mu(b1, cut(var(z), fst(covar(b1), prod)), Type::nat()),
                     mutilde(r->pred_var,
                             cut(mu(b2, cut(var(z), snd(covar(b2), prod)), a),
                                 mutilde(r->result_var,
                                         cut(pair(succ(var(r->pred_var)), r->succ_branch), covar(k)), a)),
                             Type::nat())),
                 prod);
  return desugar_iter(pair(zero(), r->zero_branch), z, step, snd(r->ret, prod), prod);
}

Term encode_corec_via_coiter(const Term& corec) {
  using namespace build;
  const auto* c = corec.as<CoRec>();
  if (!c) throw std::invalid_argument("encode_corec_via_coiter expects a corecursor");
  std::optional<Type> stream, sum;
  if (c->elem) stream = Type::stream(*c->elem);
  if (stream && c->seed_type) sum = Type::sum(*stream, *c->seed_type);

  std::set<std::string> avoid = all_names({free_names(c->tail_body), free_names(c->head_body)});
  avoid.insert(c->tail_covar);
  avoid.insert(c->seed_covar);
  avoid.insert(c->head_covar);
  std::string g = fresh_name(avoid, "g");
  avoid.insert(g);
  std::string x = fresh_name(avoid, "x");
  avoid.insert(x);
  std::string y = fresh_name(avoid, "y");

  // [b, g']. case[tail b, f]
  CoTerm step = mutilde(
      x,
      cut(mu(c->tail_covar,
             cut(mu(c->seed_covar, cut(var(x), sum_case(tail(covar(c->tail_covar)), c->tail_body, sum)),
                    c->seed_type),
                 mutilde(y, cut(inr(var(y), sum), covar(g)), c->seed_type)),
             stream),
          mutilde(y, cut(inl(var(y), sum), covar(g)), stream)),
      sum);
  CoTerm head_body = sum_case(head(covar(c->head_covar)), c->head_body, sum);
  return desugar_coiter(c->head_covar, head_body, g, step, inr(c->seed, sum), c->elem, sum);
}

Command encode_recs(const Command& c) {
  Rewriter rw{nullptr, [](const CoTerm& e) { return e.is<RecNat>() ? encode_rec_via_iter(e) : e; }};
  return rw.cmd(c);
}

Term encode_recs(const Term& t) {
  Rewriter rw{nullptr, [](const CoTerm& e) { return e.is<RecNat>() ? encode_rec_via_iter(e) : e; }};
  return rw.term(t);
}

Command encode_corecs(const Command& c) {
  Rewriter rw{[](const Term& t) { return t.is<CoRec>() ? encode_corec_via_coiter(t) : t; }, nullptr};
  return rw.cmd(c);
}

Term encode_corecs(const Term& t) {
  Rewriter rw{[](const Term& t2) { return t2.is<CoRec>() ? encode_corec_via_coiter(t2) : t2; }, nullptr};
  return rw.term(t);
}

}  // namespace dualvm
