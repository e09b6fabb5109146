#ifndef DUALVM_DUALITY_HPP
#define DUALVM_DUALITY_HPP

// Syntactic duality between the Numbered and Stream fragments: terms become
// coterms and back, constructors swap with destructors, and call-by-value
// swaps with call-by-name.

#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include "dualvm/machine.hpp"
#include "dualvm/syntax.hpp"
#include "dualvm/typecheck.hpp"

namespace dualvm {

class NotDualizable : public std::runtime_error {
 public:
  NotDualizable(std::string path, std::string what)
      : std::runtime_error(path + ": " + what + " has no dual"), path(std::move(path)), subject(std::move(what)) {}
  std::string path;
  std::string subject;
};

/// Pairs each variable in scope with the covariable that replaces it, and
/// the other way round. Names not in the context keep their spelling.
class DualityContext {
 public:
  void pair(const std::string& var, const std::string& covar);
  std::string covar_for(const std::string& var) const;
  std::string var_for(const std::string& covar) const;

 private:
  std::map<std::string, std::string> var_to_covar_;
  std::map<std::string, std::string> covar_to_var_;
};

Type dual_type(const Type& a);
CoTerm dual_term(const Term& v, const DualityContext& ctx = {});
Term dual_coterm(const CoTerm& e, const DualityContext& ctx = {});
Command dual_command(const Command& c, const DualityContext& ctx = {});
Strategy dual_strategy(Strategy s);
/// Nullopt for the function and Nat rules, which have no dual.
std::optional<RuleTag> dual_rule(RuleTag r);
/// Every x : A becomes x ÷ dual A and every α ÷ A becomes α : dual A.
TypeEnv dual_env(const TypeEnv& env, const DualityContext& ctx = {});

/// Whether dual_command would succeed.
bool dualizable(const Command& c);

}  // namespace dualvm

#endif  // DUALVM_DUALITY_HPP
