#ifndef DUALVM_PRELUDE_HPP
#define DUALVM_PRELUDE_HPP

#include <string>

#include "dualvm/program.hpp"

namespace dualvm {

/// Text of the standard prelude (also shipped as programs/prelude.ct).
const std::string& prelude_source();

/// The prelude parsed from prelude_source().
const Program& prelude();

/// The same definitions built directly with the AST constructors.
Program prelude_ast();

/// `user` with the prelude definitions in front.
Program with_prelude(const Program& user);

}  // namespace dualvm

#endif  // DUALVM_PRELUDE_HPP
