#ifndef DUALVM_PARSER_HPP
#define DUALVM_PARSER_HPP

#include <stdexcept>
#include <string>
#include <string_view>

#include "dualvm/program.hpp"
#include "dualvm/surface.hpp"
#include "dualvm/syntax.hpp"

namespace dualvm {

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int col, const std::string& msg);
  int line;
  int col;
  std::string message;
};

Type parse_type(std::string_view text);
Term parse_term(std::string_view text);
CoTerm parse_coterm(std::string_view text);
Command parse_command(std::string_view text);
SurfaceTerm parse_surface(std::string_view text);

/// A `.ct` file:
///
///   def NAME : TYPE = BODY ;     machine term or System T term
///   var x : TYPE ;               free variable of main
///   covar a : TYPE ;             free covariable of main (default a0 : Nat)
///   main = COMMAND ;  |  main = BODY ;
///
/// A body is read as machine syntax when it uses any machine-only form
/// (mu, comu, corec, pair, inl, ..., `with`, `<`) and as System T otherwise.
Program parse_program(std::string_view text);

/// Classifies the text of a single body the same way parse_program does and
/// parses it; free names that are definitions of `known` become references.
std::variant<Command, Term, SurfaceTerm> parse_body(std::string_view text, const Program& known);

}  // namespace dualvm

#endif  // DUALVM_PARSER_HPP
