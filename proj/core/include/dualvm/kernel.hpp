#ifndef DUALVM_KERNEL_HPP
#define DUALVM_KERNEL_HPP

#include <set>
#include <string>
#include <vector>

#include "dualvm/syntax.hpp"

namespace dualvm {

// ---- strategy-dependent classification ----------------------------------

/// CBN: every term. CBV: everything except μ, with constructor arguments
/// (Succ, NumZero, NumSucc, InL, InR) and corecursor seeds themselves values.
/// Pairs are values in both strategies whatever their components.
bool is_value(const Term& t, Strategy s);

/// CBV: every coterm. CBN: everything except μ̃, with call-stack tails,
/// recursor return continuations, and Head/Tail/Fst/Snd tails covalues.
/// Sum cases are covalues in both strategies whatever their branches.
bool is_covalue(const CoTerm& e, Strategy s);

// ---- names -----------------------------------------------------------------

FreeNames free_names(const Term& t);
FreeNames free_names(const CoTerm& e);
FreeNames free_names(const Command& c);

/// `hint` if it is not in `avoid`, otherwise the hint's alphabetic stem plus
/// the smallest numeric suffix that is not in `avoid`.
std::string fresh_name(const std::set<std::string>& avoid, const std::string& hint);

// ---- substitution ------------------------------------------------------------
//
// Capture-avoiding; bound names that would capture a free name of the
// replacement are renamed with fresh_name(). Unchanged subtrees are shared.

Command subst_var(const Command& c, const std::string& x, const Term& v);
Term subst_var(const Term& t, const std::string& x, const Term& v);
CoTerm subst_var(const CoTerm& e, const std::string& x, const Term& v);

Command subst_covar(const Command& c, const std::string& a, const CoTerm& e);
Term subst_covar(const Term& t, const std::string& a, const CoTerm& e);
CoTerm subst_covar(const CoTerm& e, const std::string& a, const CoTerm& k);

// ---- alpha-equivalence ---------------------------------------------------------
//
// Annotations are compared only where both sides carry one.

bool alpha_eq(const Term& a, const Term& b);
bool alpha_eq(const CoTerm& a, const CoTerm& b);
bool alpha_eq(const Command& a, const Command& b);

// ---- well-formedness -------------------------------------------------------------

struct Violation {
  std::string path;
  std::string message;
};

/// Checks the strategy-indexed grammar. An empty result means well formed.
std::vector<Violation> well_formed(const Command& c, Strategy s);
std::vector<Violation> well_formed(const Term& t, Strategy s);
std::vector<Violation> well_formed(const CoTerm& e, Strategy s);

/// Number of AST nodes; used for sizing generators and reports.
std::size_t size(const Term& t);
std::size_t size(const CoTerm& e);
std::size_t size(const Command& c);

}  // namespace dualvm

#endif  // DUALVM_KERNEL_HPP
