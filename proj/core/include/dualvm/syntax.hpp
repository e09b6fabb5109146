#ifndef DUALVM_SYNTAX_HPP
#define DUALVM_SYNTAX_HPP

// Machine-language AST: producers (Term), consumers (CoTerm) and the cuts
// between them (Command). One AST serves both evaluation strategies; the
// strategy-indexed grammar is enforced separately by well_formed().
//
// Nodes are immutable and shared. Optional type annotations on binders are
// filled in by the elaborator (typecheck.hpp) and carried along by the
// machine so every intermediate state can be re-checked.

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <type_traits>
#include <variant>

#include "dualvm/type.hpp"

namespace dualvm {

enum class Strategy { CBV, CBN };

struct FreeNames {
  std::set<std::string> vars;
  std::set<std::string> covars;
};

const char* to_string(Strategy s);

struct TermNode;
struct CoTermNode;

class Term {
 public:
  explicit Term(std::shared_ptr<const TermNode> node) : node_(std::move(node)) {}

  const TermNode& node() const { return *node_; }
  template <class T>
  const T* as() const;
  template <class T>
  bool is() const { return as<T>() != nullptr; }

  bool same_node(const Term& other) const { return node_ == other.node_; }

 private:
  std::shared_ptr<const TermNode> node_;
};

class CoTerm {
 public:
  explicit CoTerm(std::shared_ptr<const CoTermNode> node) : node_(std::move(node)) {}

  const CoTermNode& node() const { return *node_; }
  template <class T>
  const T* as() const;
  template <class T>
  bool is() const { return as<T>() != nullptr; }

  bool same_node(const CoTerm& other) const { return node_ == other.node_; }

 private:
  std::shared_ptr<const CoTermNode> node_;
};

/// ⟨producer ∥ consumer⟩
struct Command {
  Term producer;
  CoTerm consumer;
};

// ---- producers -------------------------------------------------------------

struct Var {
  std::string name;
};
struct Mu {
  std::string covar;
  std::optional<Type> annot;
  Command body;
};
struct Lam {
  std::string var;
  std::optional<Type> annot;
  Term body;
};
struct Zero {};
struct Succ {
  Term arg;
};
/// `Zero V : Numbered A` for `V : A`.
struct NumZero {
  Term arg;
};
/// `Succ V : Numbered A` for `V : Numbered A`.
struct NumSucc {
  Term arg;
};
struct Pair {
  Term first;
  Term second;
};
/// `annot` is the whole sum type.
struct InL {
  Term arg;
  std::optional<Type> annot;
};
struct InR {
  Term arg;
  std::optional<Type> annot;
};
/// corec { head α -> e | tail β -> γ. f } with seed
///
/// `elem` types α (÷ A) and `seed_type` types γ (÷ B) and the seed.
struct CoRec {
  std::string head_covar;
  std::optional<Type> elem;
  CoTerm head_body;
  std::string tail_covar;
  std::string seed_covar;
  std::optional<Type> seed_type;
  CoTerm tail_body;
  Term seed;
};

// Each node caches its free names (shared with a child when equal) and its
// strategy-dependent classification.
struct TermNode : std::variant<Var, Mu, Lam, Zero, Succ, NumZero, NumSucc, Pair, InL, InR, CoRec> {
  template <class T>
    requires(!std::is_same_v<std::decay_t<T>, TermNode> && std::is_constructible_v<variant, T>)
  TermNode(T&& alt) : variant(std::forward<T>(alt)) {
    init();
  }

  std::shared_ptr<const FreeNames> free;
  bool cbv_value = true;

 private:
  void init();
};

// ---- consumers -------------------------------------------------------------

struct CoVar {
  std::string name;
};
struct MuTilde {
  std::string var;
  std::optional<Type> annot;
  Command body;
};
/// Call stack `arg · rest`.
struct Call {
  Term arg;
  CoTerm rest;
};
/// rec { Z -> zero_branch | S pred -> result. succ_branch } with ret
///
/// `result_type` is the type A returned to `ret` (and bound to `result`).
struct RecNat {
  Term zero_branch;
  std::string pred_var;
  std::string result_var;
  std::optional<Type> result_type;
  Term succ_branch;
  CoTerm ret;
};
/// rec { Z payload -> zero_branch | S pred -> result. succ_branch } with ret
struct RecNum {
  std::string payload_var;
  std::optional<Type> payload_type;
  Term zero_branch;
  std::string pred_var;
  std::string result_var;
  std::optional<Type> result_type;
  Term succ_branch;
  CoTerm ret;
};
struct Head {
  CoTerm rest;
};
struct Tail {
  CoTerm rest;
};
/// `annot` is the whole product type.
struct Fst {
  CoTerm rest;
  std::optional<Type> annot;
};
struct Snd {
  CoTerm rest;
  std::optional<Type> annot;
};
struct SumCase {
  CoTerm left;
  CoTerm right;
  std::optional<Type> annot;
};

struct CoTermNode
    : std::variant<CoVar, MuTilde, Call, RecNat, RecNum, Head, Tail, Fst, Snd, SumCase> {
  template <class T>
    requires(!std::is_same_v<std::decay_t<T>, CoTermNode> && std::is_constructible_v<variant, T>)
  CoTermNode(T&& alt) : variant(std::forward<T>(alt)) {
    init();
  }

  std::shared_ptr<const FreeNames> free;
  bool cbn_covalue = true;

 private:
  void init();
};

template <class T>
const T* Term::as() const {
  return std::get_if<T>(static_cast<const TermNode::variant*>(node_.get()));
}

template <class T>
const T* CoTerm::as() const {
  return std::get_if<T>(static_cast<const CoTermNode::variant*>(node_.get()));
}

template <class... Fs>
struct overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

template <class F>
decltype(auto) visit(const Term& t, F&& f) {
  return std::visit(std::forward<F>(f), static_cast<const TermNode::variant&>(t.node()));
}

template <class F>
decltype(auto) visit(const CoTerm& e, F&& f) {
  return std::visit(std::forward<F>(f), static_cast<const CoTermNode::variant&>(e.node()));
}

/// Smart constructors.
namespace build {

Term make(TermNode node);
CoTerm make(CoTermNode node);

Term var(std::string name);
Term mu(std::string covar, Command body, std::optional<Type> annot = std::nullopt);
Term lam(std::string var, Term body, std::optional<Type> annot = std::nullopt);
Term zero();
Term succ(Term arg);
/// Succ^n Zero
Term numeral(std::uint64_t n);
Term num_zero(Term arg);
Term num_succ(Term arg);
Term pair(Term first, Term second);
Term inl(Term arg, std::optional<Type> annot = std::nullopt);
Term inr(Term arg, std::optional<Type> annot = std::nullopt);
Term corec(std::string head_covar, CoTerm head_body, std::string tail_covar,
           std::string seed_covar, CoTerm tail_body, Term seed,
           std::optional<Type> elem = std::nullopt,
           std::optional<Type> seed_type = std::nullopt);

CoTerm covar(std::string name);
CoTerm mutilde(std::string var, Command body, std::optional<Type> annot = std::nullopt);
CoTerm call(Term arg, CoTerm rest);
CoTerm rec_nat(Term zero_branch, std::string pred_var, std::string result_var,
               Term succ_branch, CoTerm ret, std::optional<Type> result_type = std::nullopt);
CoTerm rec_num(std::string payload_var, Term zero_branch, std::string pred_var,
               std::string result_var, Term succ_branch, CoTerm ret,
               std::optional<Type> payload_type = std::nullopt,
               std::optional<Type> result_type = std::nullopt);
CoTerm head(CoTerm rest);
CoTerm tail(CoTerm rest);
/// Tail^n rest
CoTerm tails(std::uint64_t n, CoTerm rest);
CoTerm fst(CoTerm rest, std::optional<Type> annot = std::nullopt);
CoTerm snd(CoTerm rest, std::optional<Type> annot = std::nullopt);
CoTerm sum_case(CoTerm left, CoTerm right, std::optional<Type> annot = std::nullopt);

Command cut(Term producer, CoTerm consumer);

}  // namespace build

/// Name of the designated top-level covariable.
inline constexpr const char* kTopCovar = "a0";

}  // namespace dualvm

#endif  // DUALVM_SYNTAX_HPP
