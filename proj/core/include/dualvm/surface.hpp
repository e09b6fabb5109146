#ifndef DUALVM_SURFACE_HPP
#define DUALVM_SURFACE_HPP

// System T front end: terms, typing, translation into the machine language,
// and a direct small-step interpreter used as an independent oracle.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>

#include "dualvm/machine.hpp"
#include "dualvm/syntax.hpp"
#include "dualvm/typecheck.hpp"

namespace dualvm {

struct SurfaceNode;

class SurfaceTerm {
 public:
  explicit SurfaceTerm(std::shared_ptr<const SurfaceNode> node) : node_(std::move(node)) {}
  const SurfaceNode& node() const { return *node_; }
  template <class T>
  const T* as() const;
  template <class T>
  bool is() const { return as<T>() != nullptr; }
  bool same_node(const SurfaceTerm& o) const { return node_ == o.node_; }

 private:
  std::shared_ptr<const SurfaceNode> node_;
};

namespace surface {

struct Var {
  std::string name;
};
struct Lam {
  std::string var;
  std::optional<Type> annot;
  SurfaceTerm body;
};
struct App {
  SurfaceTerm fn;
  SurfaceTerm arg;
};
struct Zero {};
struct Succ {
  SurfaceTerm arg;
};
/// rec scrutinee as { Z -> zero | S pred -> result. succ }
struct Rec {
  SurfaceTerm scrutinee;
  SurfaceTerm zero_branch;
  std::string pred_var;
  std::string result_var;
  std::optional<Type> result_type;
  SurfaceTerm succ_branch;
};
struct NumLit {
  std::uint64_t value;
};
/// A reference to a top-level definition.
struct Ref {
  std::string name;
};

SurfaceTerm var(std::string name);
SurfaceTerm lam(std::string var, SurfaceTerm body, std::optional<Type> annot = std::nullopt);
SurfaceTerm app(SurfaceTerm fn, SurfaceTerm arg);
/// Left-nested application f a1 ... an.
SurfaceTerm apps(SurfaceTerm fn, std::initializer_list<SurfaceTerm> args);
SurfaceTerm zero();
SurfaceTerm succ(SurfaceTerm arg);
SurfaceTerm rec(SurfaceTerm scrutinee, SurfaceTerm zero_branch, std::string pred_var, std::string result_var,
                SurfaceTerm succ_branch, std::optional<Type> result_type = std::nullopt);
SurfaceTerm num(std::uint64_t n);
SurfaceTerm ref(std::string name);

}  // namespace surface

struct SurfaceNode : std::variant<surface::Var, surface::Lam, surface::App, surface::Zero, surface::Succ,
                                  surface::Rec, surface::NumLit, surface::Ref> {
  using variant::variant;
};

template <class T>
const T* SurfaceTerm::as() const {
  return std::get_if<T>(static_cast<const SurfaceNode::variant*>(node_.get()));
}

template <class F>
decltype(auto) visit(const SurfaceTerm& t, F&& f) {
  return std::visit(std::forward<F>(f), static_cast<const SurfaceNode::variant&>(t.node()));
}

std::string pretty(const SurfaceTerm& t);

/// Typing context for surface terms: variable types plus the definitions a
/// Ref may name (type and compiled machine term).
struct SurfaceEnv {
  struct Def {
    Type type;
    Term compiled;
  };
  std::map<std::string, Type> vars;
  std::map<std::string, Def> defs;
};

/// Γ ⊢ M : A (synthesis). Throws TypeCheckFailure.
Type surface_type(const SurfaceEnv& env, const SurfaceTerm& m);
/// Checks M against A. Throws TypeCheckFailure.
void surface_check(const SurfaceEnv& env, const SurfaceTerm& m, const Type& a);

/// Typed translation into the machine language. Every introduced binder
/// carries its type. With `expected` the term is checked rather than
/// synthesized, which lets unannotated lambdas through.
Term translate(const SurfaceTerm& m, Strategy s, const SurfaceEnv& env = {},
               const std::optional<Type>& expected = std::nullopt);

/// Replaces NumLit by Succ chains and Ref by the given bodies.
SurfaceTerm desugar(const SurfaceTerm& m, const std::map<std::string, SurfaceTerm>& defs = {});

/// Capture-avoiding M{N/x}.
SurfaceTerm surface_subst(const SurfaceTerm& m, const std::string& x, const SurfaceTerm& n);

bool surface_is_value(const SurfaceTerm& m, Strategy s);

struct ReferenceResult {
  SurfaceTerm normal_form;
  RunStats stats;  // BetaArrow, BetaZero, BetaSucc only
};

/// Small-step evaluation under the strategy's evaluation contexts until no
/// rule applies. `m` must be closed and free of Ref/NumLit (see desugar).
ReferenceResult reference_eval(const SurfaceTerm& m, Strategy s, std::uint64_t fuel = kDefaultFuel);

/// Evaluates and then keeps evaluating under Succ until the numeral is
/// known. Throws MachineError on fuel exhaustion or a non-numeral.
std::uint64_t reference_numeral(const SurfaceTerm& m, Strategy s, std::uint64_t fuel = kDefaultFuel,
                                RunStats* stats = nullptr);

}  // namespace dualvm

#endif  // DUALVM_SURFACE_HPP
