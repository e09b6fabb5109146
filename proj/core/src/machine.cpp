#include "dualvm/machine.hpp"

#include <cassert>
#include <functional>
#include <set>
#include <sstream>

#include "json.hpp"

#include "dualvm/kernel.hpp"

namespace dualvm {

namespace {

constexpr std::array<RuleTag, kRuleCount> kAllRules = {
    RuleTag::Mu,      RuleTag::MuTilde, RuleTag::BetaArrow, RuleTag::BetaZero,   RuleTag::BetaSucc,
    RuleTag::BetaHead, RuleTag::BetaTail, RuleTag::BetaFst,  RuleTag::BetaSnd,    RuleTag::BetaInL,
    RuleTag::BetaInR, RuleTag::BetaNumZero, RuleTag::BetaNumSucc,
};

}  // namespace

const std::array<RuleTag, kRuleCount>& all_rules() { return kAllRules; }

const char* to_string(RuleTag r) {
  switch (r) {
    case RuleTag::Mu: return "Mu";
    case RuleTag::MuTilde: return "MuTilde";
    case RuleTag::BetaArrow: return "BetaArrow";
    case RuleTag::BetaZero: return "BetaZero";
    case RuleTag::BetaSucc: return "BetaSucc";
    case RuleTag::BetaHead: return "BetaHead";
    case RuleTag::BetaTail: return "BetaTail";
    case RuleTag::BetaFst: return "BetaFst";
    case RuleTag::BetaSnd: return "BetaSnd";
    case RuleTag::BetaInL: return "BetaInL";
    case RuleTag::BetaInR: return "BetaInR";
    case RuleTag::BetaNumZero: return "BetaNumZero";
    case RuleTag::BetaNumSucc: return "BetaNumSucc";
  }
  return "?";
}

std::optional<RuleTag> rule_from_string(std::string_view name) {
  for (RuleTag r : kAllRules)
    if (name == to_string(r)) return r;
  return std::nullopt;
}

const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::Final: return "Final";
    case Outcome::OutOfFuel: return "OutOfFuel";
    case Outcome::Stuck: return "Stuck";
  }
  return "?";
}

void RunStats::absorb(const RunStats& other) {
  for (std::size_t i = 0; i < kRuleCount; ++i) per_rule[i] += other.per_rule[i];
  total += other.total;
  fuel_used += other.fuel_used;
  if (outcome == Outcome::Final) {
    outcome = other.outcome;
    stuck_reason = other.stuck_reason;
  }
}

// ---- single step ---------------------------------------------------------------------

namespace {

std::set<std::string> names_of(std::initializer_list<const std::set<std::string>*> sets) {
  std::set<std::string> out;
  for (const auto* s : sets) out.insert(s->begin(), s->end());
  return out;
}

// The continuation-growing half of β_Succ / β_NumSucc:
//   ⟨μα':A.⟨V ∥ rec'(α')⟩ ∥ μ̃y:A.⟨w{V/x} ∥ E⟩⟩
Command unfold_recursor(const Command& c, const Term& pred, const std::string& x, const std::string& y,
                        const Term& w, const CoTerm& ret, const std::optional<Type>& result,
                        const std::function<CoTerm(CoTerm)>& with_ret) {
  using namespace build;
  std::string a = fresh_name(free_names(c).covars, "a");
  Term inner = mu(a, cut(pred, with_ret(covar(a))), result);

  FreeNames fv_ret = free_names(ret);
  FreeNames fv_pred = free_names(pred);
  FreeNames fv_w = free_names(w);
  std::string y2 = y;
  Term body = w;
  if (fv_ret.vars.count(y) || (x != y && fv_pred.vars.count(y))) {
    std::set<std::string> avoid = names_of({&fv_ret.vars, &fv_pred.vars, &fv_w.vars});
    avoid.insert(x);
    avoid.insert(y);
    y2 = fresh_name(avoid, y);
    body = subst_var(body, y, var(y2));
  }
  if (x != y) body = subst_var(body, x, pred);
  return cut(inner, mutilde(y2, cut(body, ret), result));
}

Stepped beta_tail(const CoRec& n, const CoTerm& e) {
  using namespace build;
  FreeNames fv_e = free_names(e);
  FreeNames fv_seed = free_names(n.seed);
  FreeNames fv_f = free_names(n.tail_body);
  std::string g = n.seed_covar;
  CoTerm f = n.tail_body;
  if (fv_e.covars.count(g) || fv_seed.covars.count(g)) {
    std::set<std::string> avoid = names_of({&fv_e.covars, &fv_seed.covars, &fv_f.covars});
    avoid.insert(n.tail_covar);
    avoid.insert(g);
    std::string g2 = fresh_name(avoid, g);
    f = subst_covar(f, g, covar(g2));
    g = g2;
  }
  if (n.tail_covar != n.seed_covar) f = subst_covar(f, n.tail_covar, e);

  // The corecursor with its seed replaced by x.
  FreeNames fv_head = free_names(n.head_body);
  std::string x = fresh_name(names_of({&fv_e.vars, &fv_head.vars, &fv_f.vars}), "x");
  Term next = corec(n.head_covar, n.head_body, n.tail_covar, n.seed_covar, n.tail_body, var(x), n.elem, n.seed_type);
  Command out = cut(mu(g, cut(n.seed, f), n.seed_type), mutilde(x, cut(next, e), n.seed_type));
  return Stepped{out, RuleTag::BetaTail};
}

std::string stuck_text(const Command& c, const char* why) {
  std::ostringstream os;
  os << why << ": " << pretty(c);
  return os.str();
}

}  // namespace

StepOutcome step(const Command& c, Strategy s) {
  using namespace build;
  const Term& v = c.producer;
  const CoTerm& e = c.consumer;

  const auto* mu_node = v.as<Mu>();
  const auto* mt_node = e.as<MuTilde>();
  bool mu_fires = mu_node && is_covalue(e, s);
  bool mt_fires = mt_node && is_value(v, s);
  assert(!(mu_fires && mt_fires));
  if (mu_fires) return Stepped{subst_covar(mu_node->body, mu_node->covar, e), RuleTag::Mu};
  if (mt_fires) return Stepped{subst_var(mt_node->body, mt_node->var, v), RuleTag::MuTilde};
  if (mu_node || mt_node) return Stuck{stuck_text(c, "no strategy admits this cut")};

  if (const auto* lam_node = v.as<Lam>()) {
    const auto* k = e.as<Call>();
    if (!k) return Stuck{stuck_text(c, "function meets a non-call consumer")};
    if (!is_value(k->arg, s) || !is_covalue(k->rest, s)) return Stuck{stuck_text(c, "ill-formed call stack")};
    return Stepped{cut(subst_var(lam_node->body, lam_node->var, k->arg), k->rest), RuleTag::BetaArrow};
  }

  if (v.is<Zero>() || v.is<Succ>()) {
    if (e.is<CoVar>()) {
      if (v.is<Zero>()) return Final{FinalShape::Zero};
      if (is_value(v.as<Succ>()->arg, s)) return Final{FinalShape::Succ};
      return Stuck{stuck_text(c, "successor of a non-value")};
    }
    const auto* r = e.as<RecNat>();
    if (!r) return Stuck{stuck_text(c, "number meets a non-recursor consumer")};
    if (!is_covalue(r->ret, s)) return Stuck{stuck_text(c, "recursor continuation is not a covalue")};
    if (v.is<Zero>()) return Stepped{cut(r->zero_branch, r->ret), RuleTag::BetaZero};
    const Term& pred = v.as<Succ>()->arg;
    if (!is_value(pred, s)) return Stuck{stuck_text(c, "successor of a non-value")};
    auto with_ret = [r](CoTerm k) {
      return rec_nat(r->zero_branch, r->pred_var, r->result_var, r->succ_branch, std::move(k), r->result_type);
    };
    return Stepped{unfold_recursor(c, pred, r->pred_var, r->result_var, r->succ_branch, r->ret, r->result_type,
                                   with_ret),
                   RuleTag::BetaSucc};
  }

  if (v.is<NumZero>() || v.is<NumSucc>()) {
    const auto* r = e.as<RecNum>();
    if (!r) return Stuck{stuck_text(c, "numbered number meets a non-recursor consumer")};
    if (!is_covalue(r->ret, s)) return Stuck{stuck_text(c, "recursor continuation is not a covalue")};
    if (const auto* z = v.as<NumZero>()) {
      if (!is_value(z->arg, s)) return Stuck{stuck_text(c, "payload is not a value")};
      return Stepped{cut(subst_var(r->zero_branch, r->payload_var, z->arg), r->ret), RuleTag::BetaNumZero};
    }
    const Term& pred = v.as<NumSucc>()->arg;
    if (!is_value(pred, s)) return Stuck{stuck_text(c, "successor of a non-value")};
    auto with_ret = [r](CoTerm k) {
      return rec_num(r->payload_var, r->zero_branch, r->pred_var, r->result_var, r->succ_branch, std::move(k),
                     r->payload_type, r->result_type);
    };
    return Stepped{unfold_recursor(c, pred, r->pred_var, r->result_var, r->succ_branch, r->ret, r->result_type,
                                   with_ret),
                   RuleTag::BetaNumSucc};
  }

  if (const auto* cr = v.as<CoRec>()) {
    if (!is_value(cr->seed, s)) return Stuck{stuck_text(c, "corecursor seed is not a value")};
    if (const auto* h = e.as<Head>()) {
      if (!is_covalue(h->rest, s)) return Stuck{stuck_text(c, "head continuation is not a covalue")};
      return Stepped{cut(cr->seed, subst_covar(cr->head_body, cr->head_covar, h->rest)), RuleTag::BetaHead};
    }
    if (const auto* t = e.as<Tail>()) {
      if (!is_covalue(t->rest, s)) return Stuck{stuck_text(c, "tail continuation is not a covalue")};
      return beta_tail(*cr, t->rest);
    }
    return Stuck{stuck_text(c, "stream meets a non-observation consumer")};
  }

  if (const auto* p = v.as<Pair>()) {
    if (const auto* f = e.as<Fst>()) {
      if (!is_covalue(f->rest, s)) return Stuck{stuck_text(c, "projection continuation is not a covalue")};
      return Stepped{cut(p->first, f->rest), RuleTag::BetaFst};
    }
    if (const auto* f = e.as<Snd>()) {
      if (!is_covalue(f->rest, s)) return Stuck{stuck_text(c, "projection continuation is not a covalue")};
      return Stepped{cut(p->second, f->rest), RuleTag::BetaSnd};
    }
    return Stuck{stuck_text(c, "pair meets a non-projection consumer")};
  }

  if (v.is<InL>() || v.is<InR>()) {
    const auto* k = e.as<SumCase>();
    if (!k) return Stuck{stuck_text(c, "injection meets a non-case consumer")};
    if (const auto* l = v.as<InL>()) {
      if (!is_value(l->arg, s)) return Stuck{stuck_text(c, "injected term is not a value")};
      return Stepped{cut(l->arg, k->left), RuleTag::BetaInL};
    }
    const auto* r = v.as<InR>();
    if (!is_value(r->arg, s)) return Stuck{stuck_text(c, "injected term is not a value")};
    return Stepped{cut(r->arg, k->right), RuleTag::BetaInR};
  }

  return Stuck{stuck_text(c, "no rule applies")};
}

// ---- driver ---------------------------------------------------------------------------

RunResult run(const Command& c, Strategy s, const RunOptions& opts) {
  RunResult res{c, {}, {}, false};
  for (;;) {
    StepOutcome o = step(res.last, s);
    if (std::holds_alternative<Final>(o)) {
      res.stats.outcome = Outcome::Final;
      return res;
    }
    if (auto* st = std::get_if<Stuck>(&o)) {
      res.stats.outcome = Outcome::Stuck;
      res.stats.stuck_reason = st->reason;
      return res;
    }
    if (res.stats.fuel_used >= opts.fuel) {
      res.stats.outcome = Outcome::OutOfFuel;
      return res;
    }
    auto& next = std::get<Stepped>(o);
    res.stats.record(next.rule);
    res.last = std::move(next.next);
    if (opts.trace) {
      if (res.trace.size() < opts.trace_limit)
        res.trace.push_back(TraceEntry{res.stats.total, next.rule, pretty(res.last, opts.pretty)});
      else
        res.trace_truncated = true;
    }
  }
}

std::uint64_t force_numeral(const Term& v, Strategy s, std::uint64_t fuel, RunStats* stats) {
  std::uint64_t n = 0;
  std::uint64_t used = 0;
  Term cur = v;
  for (;;) {
    if (cur.is<Zero>()) return n;
    if (const auto* succ = cur.as<Succ>()) {
      ++n;
      cur = succ->arg;
      continue;
    }
    if (!cur.is<Mu>()) throw MachineError(MachineError::Kind::ElementNotNat, "not a number: " + pretty(cur));
    std::string k = fresh_name(free_names(cur).covars, "k");
    RunOptions opts;
    opts.fuel = fuel - used;
    RunResult r = run(build::cut(cur, build::covar(k)), s, opts);
    used += r.stats.total;
    if (stats) stats->absorb(r.stats);
    if (r.stats.outcome == Outcome::OutOfFuel) throw MachineError(MachineError::Kind::OutOfFuel, "out of fuel while forcing");
    if (r.stats.outcome == Outcome::Stuck) throw MachineError(MachineError::Kind::Stuck, r.stats.stuck_reason);
    cur = r.last.producer;
  }
}

Evaluation evaluate(const Command& c, Strategy s, std::uint64_t fuel) {
  Evaluation ev{run(c, s, RunOptions{fuel}), std::nullopt};
  if (ev.result.stats.outcome != Outcome::Final) return ev;
  try {
    RunStats forcing;
    std::uint64_t n = force_numeral(ev.result.last.producer, s, fuel - ev.result.stats.total, &forcing);
    ev.result.stats.absorb(forcing);
    ev.value = n;
  } catch (const MachineError& err) {
    ev.result.stats.outcome = err.kind == MachineError::Kind::OutOfFuel ? Outcome::OutOfFuel : Outcome::Stuck;
    ev.result.stats.stuck_reason = err.what();
  }
  return ev;
}

Command observation(const Term& v, std::uint64_t n) {
  return build::cut(v, build::tails(n, build::head(build::covar(kTopCovar))));
}

std::uint64_t observe_stream(const Term& v, std::uint64_t n, Strategy s, std::uint64_t fuel, RunStats* stats) {
  RunResult r = run(observation(v, n), s, RunOptions{fuel});
  if (stats) stats->absorb(r.stats);
  if (r.stats.outcome == Outcome::OutOfFuel) throw MachineError(MachineError::Kind::OutOfFuel, "out of fuel");
  if (r.stats.outcome == Outcome::Stuck) {
    const Command& last = r.last;
    if (last.consumer.is<CoVar>()) throw MachineError(MachineError::Kind::ElementNotNat, r.stats.stuck_reason);
    throw MachineError(MachineError::Kind::Stuck, r.stats.stuck_reason);
  }
  return force_numeral(r.last.producer, s, fuel - r.stats.total, stats);
}

// ---- JSON ---------------------------------------------------------------------------------

std::string trace_to_jsonl(const std::vector<TraceEntry>& trace) {
  std::string out;
  for (const auto& t : trace) {
    nlohmann::ordered_json j;
    j["i"] = t.index;
    j["rule"] = to_string(t.rule);
    j["cmd"] = t.command_text;
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::string stats_to_json(const RunStats& stats) {
  nlohmann::ordered_json j;
  j["outcome"] = to_string(stats.outcome);
  j["total"] = stats.total;
  nlohmann::ordered_json per = nlohmann::ordered_json::object();
  for (RuleTag r : kAllRules) per[to_string(r)] = stats.count(r);
  j["perRule"] = per;
  return j.dump();
}

}  // namespace dualvm
