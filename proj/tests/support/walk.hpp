#pragma once

#include <functional>
#include <string>
#include <vector>

#include "dualvm/syntax.hpp"

namespace dualvm::testing {

struct Walker {
  std::function<void(const Term&)> on_term = [](const Term&) {};
  std::function<void(const CoTerm&)> on_coterm = [](const CoTerm&) {};

  void command(const Command& c) {
    term(c.producer);
    coterm(c.consumer);
  }

  void term(const Term& t) {
    on_term(t);
    visit(t, overloaded{
                 [&](const Mu& n) { command(n.body); },
                 [&](const Lam& n) { term(n.body); },
                 [&](const Succ& n) { term(n.arg); },
                 [&](const NumZero& n) { term(n.arg); },
                 [&](const NumSucc& n) { term(n.arg); },
                 [&](const Pair& n) {
                   term(n.first);
                   term(n.second);
                 },
                 [&](const InL& n) { term(n.arg); },
                 [&](const InR& n) { term(n.arg); },
                 [&](const CoRec& n) {
                   coterm(n.head_body);
                   coterm(n.tail_body);
                   term(n.seed);
                 },
                 [](const auto&) {},
             });
  }

  void coterm(const CoTerm& e) {
    on_coterm(e);
    visit(e, overloaded{
                 [&](const MuTilde& n) { command(n.body); },
                 [&](const Call& n) {
                   term(n.arg);
                   coterm(n.rest);
                 },
                 [&](const RecNat& n) {
                   term(n.zero_branch);
                   term(n.succ_branch);
                   coterm(n.ret);
                 },
                 [&](const RecNum& n) {
                   term(n.zero_branch);
                   term(n.succ_branch);
                   coterm(n.ret);
                 },
                 [&](const Head& n) { coterm(n.rest); },
                 [&](const Tail& n) { coterm(n.rest); },
                 [&](const Fst& n) { coterm(n.rest); },
                 [&](const Snd& n) { coterm(n.rest); },
                 [&](const SumCase& n) {
                   coterm(n.left);
                   coterm(n.right);
                 },
                 [](const auto&) {},
             });
  }
};

inline std::vector<Term> subterms(const Command& c) {
  std::vector<Term> out;
  Walker w;
  w.on_term = [&](const Term& t) { out.push_back(t); };
  w.command(c);
  return out;
}

inline std::vector<CoTerm> subcoterms(const Command& c) {
  std::vector<CoTerm> out;
  Walker w;
  w.on_coterm = [&](const CoTerm& e) { out.push_back(e); };
  w.command(c);
  return out;
}

/// Every variable and covariable bound somewhere in `c`.
inline std::vector<std::string> bound_vars(const Command& c) {
  std::vector<std::string> out;
  Walker w;
  w.on_term = [&](const Term& t) {
    if (auto l = t.as<Lam>()) out.push_back(l->var);
  };
  w.on_coterm = [&](const CoTerm& e) {
    if (auto m = e.as<MuTilde>()) out.push_back(m->var);
    if (auto r = e.as<RecNat>()) {
      out.push_back(r->pred_var);
      out.push_back(r->result_var);
    }
    if (auto r = e.as<RecNum>()) {
      out.push_back(r->payload_var);
      out.push_back(r->pred_var);
      out.push_back(r->result_var);
    }
  };
  w.command(c);
  return out;
}

inline std::vector<std::string> bound_covars(const Command& c) {
  std::vector<std::string> out;
  Walker w;
  w.on_term = [&](const Term& t) {
    if (auto m = t.as<Mu>()) out.push_back(m->covar);
    if (auto r = t.as<CoRec>()) {
      out.push_back(r->head_covar);
      out.push_back(r->tail_covar);
      out.push_back(r->seed_covar);
    }
  };
  w.command(c);
  return out;
}

}  // namespace dualvm::testing
