#ifndef DUALVM_TYPECHECK_HPP
#define DUALVM_TYPECHECK_HPP

#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include "dualvm/syntax.hpp"

namespace dualvm {

/// Γ: `x : A` entries for variables, `α ÷ A` entries for covariables.
struct TypeEnv {
  std::map<std::string, Type> vars;
  std::map<std::string, Type> covars;
};

enum class TypeErrorKind { UnboundName, AnnotationRequired, Mismatch, CutMismatch };

const char* to_string(TypeErrorKind k);

struct TypeError {
  TypeErrorKind kind;
  std::string path;
  std::optional<Type> expected;
  std::optional<Type> found;
  std::string message;

  std::string describe() const;
};

class TypeCheckFailure : public std::runtime_error {
 public:
  explicit TypeCheckFailure(TypeError e) : std::runtime_error(e.describe()), error(std::move(e)) {}
  TypeError error;
};

// Bidirectional checking. A node synthesizes its type when its annotations
// (or its subterms) determine it; otherwise it is checked against the type
// pushed in from the other side of the cut. Elaboration returns the same
// tree with every binder and constructor annotation filled in.

/// Γ ⊢ v : A. Throws TypeCheckFailure.
Type infer_term(const TypeEnv& env, const Term& v);
/// Γ ⊢ e ÷ A. Throws TypeCheckFailure.
Type infer_coterm(const TypeEnv& env, const CoTerm& e);
/// Γ ⊢ c. Returns the first error, if any.
std::optional<TypeError> check_command(const TypeEnv& env, const Command& c);
/// Γ ⊢ v : A in checking mode.
std::optional<TypeError> check_term(const TypeEnv& env, const Term& v, const Type& a);

Command elaborate(const TypeEnv& env, const Command& c);
Term elaborate(const TypeEnv& env, const Term& v, const Type& a);
CoTerm elaborate(const TypeEnv& env, const CoTerm& e, const Type& a);
/// Synthesis-mode elaboration.
std::pair<Term, Type> elaborate_synth(const TypeEnv& env, const Term& v);

/// Whether the type of a node is determined without outside information.
bool synthesizable(const Term& v);
bool synthesizable(const CoTerm& e);

}  // namespace dualvm

#endif  // DUALVM_TYPECHECK_HPP
