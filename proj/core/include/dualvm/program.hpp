#ifndef DUALVM_PROGRAM_HPP
#define DUALVM_PROGRAM_HPP

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "dualvm/surface.hpp"
#include "dualvm/syntax.hpp"
#include "dualvm/typecheck.hpp"

namespace dualvm {

struct Definition {
  std::string name;
  Type type;
  std::variant<Term, SurfaceTerm> body;
  int line = 0;
};

struct Declaration {
  std::string name;
  Type type;
};

using MainBody = std::variant<Command, Term, SurfaceTerm>;

/// Named top-level definitions (each may use only earlier ones) and an
/// optional main command or term.
struct Program {
  std::vector<Definition> defs;
  std::vector<Declaration> vars;
  std::vector<Declaration> covars;
  std::optional<MainBody> main;

  const Definition* find(const std::string& name) const;
};

class ProgramError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Definitions of `base` followed by those of `extra`; declarations and main
/// come from `extra`. Throws ProgramError on a duplicate name.
Program concat(const Program& base, const Program& extra);

/// Concrete syntax for the whole program, annotations included.
std::string pretty(const Program& p);

/// Definitions compiled for one strategy, each elaborated at its declared type.
struct CompiledProgram {
  Strategy strategy;
  SurfaceEnv surface;  // defs by name, for Ref lookup and inlining
  std::vector<std::string> order;
  TypeEnv env;         // free names of main
};

/// Throws TypeCheckFailure (with the definition name prefixed to the path).
CompiledProgram compile(const Program& p, Strategy s);

/// Replaces free variables naming definitions by their compiled bodies.
/// A body that is not a value under the strategy and would break the
/// grammar where it is used is bound with a μ̃ instead.
Command inline_defs(const Command& c, const CompiledProgram& cp);
Term inline_defs(const Term& t, const CompiledProgram& cp, const std::optional<Type>& type);

/// Translates/inlines/elaborates a standalone body. Terms without an
/// expected type must synthesize.
std::pair<Term, Type> compile_term(const std::variant<Term, SurfaceTerm>& body, const CompiledProgram& cp,
                                   const std::optional<Type>& expected = std::nullopt);

/// The main body as an elaborated command; a main term is cut against the
/// top covariable. Throws ProgramError when there is no main.
Command compile_main(const Program& p, const CompiledProgram& cp);

/// Free names of main with their declared types; a0 : Nat unless declared.
TypeEnv main_env(const Program& p);

}  // namespace dualvm

#endif  // DUALVM_PROGRAM_HPP
