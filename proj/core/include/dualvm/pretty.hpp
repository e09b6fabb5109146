#ifndef DUALVM_PRETTY_HPP
#define DUALVM_PRETTY_HPP

#include <string>

#include "dualvm/syntax.hpp"

namespace dualvm {

struct PrettyOptions {
  bool annotations = false;  // print binder/constructor type annotations
  bool numerals = true;      // print Succ^n Zero as a decimal literal
};

// Output uses the concrete syntax accepted by parser.hpp, so
// parse(pretty(x)) is alpha-equivalent to x.
std::string pretty(const Type& t);
std::string pretty(const Term& t, PrettyOptions opts = {});
std::string pretty(const CoTerm& e, PrettyOptions opts = {});
std::string pretty(const Command& c, PrettyOptions opts = {});

// Type printed so that it can sit before `->` without being split.
std::string pretty_type_arg(const Type& t);

}  // namespace dualvm

#endif  // DUALVM_PRETTY_HPP
