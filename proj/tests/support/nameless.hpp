#pragma once

// Locally-nameless view of machine syntax, independent of the kernel's
// named substitution. Bound occurrences become indices into the enclosing
// binder stack, free ones keep their names, annotations are dropped.

#include <string>
#include <vector>

#include "dualvm/syntax.hpp"

namespace dualvm::testing {

struct Nameless {
  enum class Leaf { None, Bound, FreeVar, FreeCovar };
  std::string label;
  Leaf leaf = Leaf::None;
  std::size_t index = 0;
  std::string name;
  std::vector<Nameless> kids;
};

Nameless nameless(const Term& t);
Nameless nameless(const CoTerm& e);
Nameless nameless(const Command& c);

/// Replaces free variable (or covariable) `name` by `repl`. `repl` is
/// locally closed, so no shifting is needed.
Nameless replace_free(const Nameless& n, bool covar, const std::string& name, const Nameless& repl);

std::string serialize(const Nameless& n);

/// Alpha-equivalence by comparing serializations.
template <class A>
bool nameless_eq(const A& a, const A& b) {
  return serialize(nameless(a)) == serialize(nameless(b));
}

}  // namespace dualvm::testing
