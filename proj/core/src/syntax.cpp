#include "dualvm/syntax.hpp"

#include <initializer_list>

namespace dualvm {

const char* to_string(Strategy s) { return s == Strategy::CBV ? "cbv" : "cbn"; }

namespace {

using FreePtr = std::shared_ptr<const FreeNames>;

const FreePtr& no_names() {
  static const FreePtr e = std::make_shared<const FreeNames>();
  return e;
}

bool empty(const FreePtr& f) { return f->vars.empty() && f->covars.empty(); }

FreePtr unite(const FreePtr& a, const FreePtr& b) {
  if (empty(a) || a == b) return b;
  if (empty(b)) return a;
  auto out = std::make_shared<FreeNames>(*a);
  out->vars.insert(b->vars.begin(), b->vars.end());
  out->covars.insert(b->covars.begin(), b->covars.end());
  return out;
}

FreePtr unite(std::initializer_list<FreePtr> parts) {
  FreePtr out = no_names();
  for (const auto& p : parts) out = unite(out, p);
  return out;
}

FreePtr without_vars(const FreePtr& f, std::initializer_list<const std::string*> names) {
  bool hit = false;
  for (const auto* n : names) hit = hit || f->vars.count(*n);
  if (!hit) return f;
  auto out = std::make_shared<FreeNames>(*f);
  for (const auto* n : names) out->vars.erase(*n);
  return out;
}

FreePtr without_covars(const FreePtr& f, std::initializer_list<const std::string*> names) {
  bool hit = false;
  for (const auto* n : names) hit = hit || f->covars.count(*n);
  if (!hit) return f;
  auto out = std::make_shared<FreeNames>(*f);
  for (const auto* n : names) out->covars.erase(*n);
  return out;
}

const FreePtr& fv(const Term& t) { return t.node().free; }
const FreePtr& fv(const CoTerm& e) { return e.node().free; }
FreePtr fv(const Command& c) { return unite(fv(c.producer), fv(c.consumer)); }

}  // namespace

void TermNode::init() {
  std::visit(overloaded{
                 [&](const Var& n) {
                   auto f = std::make_shared<FreeNames>();
                   f->vars.insert(n.name);
                   free = f;
                 },
                 [&](const Mu& n) {
                   free = without_covars(fv(n.body), {&n.covar});
                   cbv_value = false;
                 },
                 [&](const Lam& n) { free = without_vars(fv(n.body), {&n.var}); },
                 [&](const Zero&) { free = no_names(); },
                 [&](const Pair& n) { free = unite(fv(n.first), fv(n.second)); },
                 [&](const CoRec& n) {
                   free = unite({without_covars(fv(n.head_body), {&n.head_covar}),
                                 without_covars(fv(n.tail_body), {&n.tail_covar, &n.seed_covar}), fv(n.seed)});
                   cbv_value = n.seed.node().cbv_value;
                 },
                 [&](const auto& n) {  // Succ, NumZero, NumSucc, InL, InR
                   free = fv(n.arg);
                   cbv_value = n.arg.node().cbv_value;
                 },
             },
             static_cast<const variant&>(*this));
}

void CoTermNode::init() {
  std::visit(overloaded{
                 [&](const CoVar& n) {
                   auto f = std::make_shared<FreeNames>();
                   f->covars.insert(n.name);
                   free = f;
                 },
                 [&](const MuTilde& n) {
                   free = without_vars(fv(n.body), {&n.var});
                   cbn_covalue = false;
                 },
                 [&](const Call& n) {
                   free = unite(fv(n.arg), fv(n.rest));
                   cbn_covalue = n.rest.node().cbn_covalue;
                 },
                 [&](const RecNat& n) {
                   free = unite({fv(n.zero_branch), without_vars(fv(n.succ_branch), {&n.pred_var, &n.result_var}),
                                 fv(n.ret)});
                   cbn_covalue = n.ret.node().cbn_covalue;
                 },
                 [&](const RecNum& n) {
                   free = unite({without_vars(fv(n.zero_branch), {&n.payload_var}),
                                 without_vars(fv(n.succ_branch), {&n.pred_var, &n.result_var}), fv(n.ret)});
                   cbn_covalue = n.ret.node().cbn_covalue;
                 },
                 [&](const SumCase& n) { free = unite(fv(n.left), fv(n.right)); },
                 [&](const auto& n) {  // Head, Tail, Fst, Snd
                   free = fv(n.rest);
                   cbn_covalue = n.rest.node().cbn_covalue;
                 },
             },
             static_cast<const variant&>(*this));
}

namespace build {

Term make(TermNode node) { return Term(std::make_shared<const TermNode>(std::move(node))); }
CoTerm make(CoTermNode node) { return CoTerm(std::make_shared<const CoTermNode>(std::move(node))); }

Term var(std::string name) { return make(Var{std::move(name)}); }

Term mu(std::string covar, Command body, std::optional<Type> annot) {
  return make(Mu{std::move(covar), std::move(annot), std::move(body)});
}

Term lam(std::string var, Term body, std::optional<Type> annot) {
  return make(Lam{std::move(var), std::move(annot), std::move(body)});
}

Term zero() {
  static const Term z = make(Zero{});
  return z;
}

Term succ(Term arg) { return make(Succ{std::move(arg)}); }

Term numeral(std::uint64_t n) {
  Term t = zero();
  for (std::uint64_t i = 0; i < n; ++i) t = succ(std::move(t));
  return t;
}

Term num_zero(Term arg) { return make(NumZero{std::move(arg)}); }
Term num_succ(Term arg) { return make(NumSucc{std::move(arg)}); }
Term pair(Term first, Term second) { return make(Pair{std::move(first), std::move(second)}); }
Term inl(Term arg, std::optional<Type> annot) { return make(InL{std::move(arg), std::move(annot)}); }
Term inr(Term arg, std::optional<Type> annot) { return make(InR{std::move(arg), std::move(annot)}); }

Term corec(std::string head_covar, CoTerm head_body, std::string tail_covar,
           std::string seed_covar, CoTerm tail_body, Term seed, std::optional<Type> elem,
           std::optional<Type> seed_type) {
  return make(CoRec{std::move(head_covar), std::move(elem), std::move(head_body),
                    std::move(tail_covar), std::move(seed_covar), std::move(seed_type),
                    std::move(tail_body), std::move(seed)});
}

CoTerm covar(std::string name) { return make(CoVar{std::move(name)}); }

CoTerm mutilde(std::string var, Command body, std::optional<Type> annot) {
  return make(MuTilde{std::move(var), std::move(annot), std::move(body)});
}

CoTerm call(Term arg, CoTerm rest) { return make(Call{std::move(arg), std::move(rest)}); }

CoTerm rec_nat(Term zero_branch, std::string pred_var, std::string result_var,
               Term succ_branch, CoTerm ret, std::optional<Type> result_type) {
  return make(RecNat{std::move(zero_branch), std::move(pred_var), std::move(result_var),
                     std::move(result_type), std::move(succ_branch), std::move(ret)});
}

CoTerm rec_num(std::string payload_var, Term zero_branch, std::string pred_var,
               std::string result_var, Term succ_branch, CoTerm ret,
               std::optional<Type> payload_type, std::optional<Type> result_type) {
  return make(RecNum{std::move(payload_var), std::move(payload_type), std::move(zero_branch),
                     std::move(pred_var), std::move(result_var), std::move(result_type),
                     std::move(succ_branch), std::move(ret)});
}

CoTerm head(CoTerm rest) { return make(Head{std::move(rest)}); }
CoTerm tail(CoTerm rest) { return make(Tail{std::move(rest)}); }

CoTerm tails(std::uint64_t n, CoTerm rest) {
  for (std::uint64_t i = 0; i < n; ++i) rest = tail(std::move(rest));
  return rest;
}

CoTerm fst(CoTerm rest, std::optional<Type> annot) { return make(Fst{std::move(rest), std::move(annot)}); }
CoTerm snd(CoTerm rest, std::optional<Type> annot) { return make(Snd{std::move(rest), std::move(annot)}); }

CoTerm sum_case(CoTerm left, CoTerm right, std::optional<Type> annot) {
  return make(SumCase{std::move(left), std::move(right), std::move(annot)});
}

Command cut(Term producer, CoTerm consumer) { return Command{std::move(producer), std::move(consumer)}; }

}  // namespace build

}  // namespace dualvm
