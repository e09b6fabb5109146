#ifndef DUALVM_ENCODINGS_HPP
#define DUALVM_ENCODINGS_HPP

// Special cases of the (co)recursors, and the encodings of full (co)recursion
// by iteration through pairs and sums.

#include <optional>
#include <string>

#include "dualvm/syntax.hpp"

namespace dualvm {

/// case { Z -> v | S x -> w } with E: the recursive-result binder is unused.
CoTerm desugar_case(Term zero_branch, std::string pred_var, Term succ_branch, CoTerm ret,
                    std::optional<Type> result_type = std::nullopt);
/// iter { Z -> v | S -> y. w } with E: the predecessor binder is unused.
CoTerm desugar_iter(Term zero_branch, std::string result_var, Term succ_branch, CoTerm ret,
                    std::optional<Type> result_type = std::nullopt);
/// cocase { head a -> e | tail b -> f } with V: no seed update.
Term desugar_cocase(std::string head_covar, CoTerm head_body, std::string tail_covar, CoTerm tail_body, Term seed,
                    std::optional<Type> elem = std::nullopt, std::optional<Type> seed_type = std::nullopt);
/// coiter { head a -> e | tail -> g. f } with V: never returns a stream directly.
Term desugar_coiter(std::string head_covar, CoTerm head_body, std::string seed_covar, CoTerm tail_body, Term seed,
                    std::optional<Type> elem = std::nullopt, std::optional<Type> seed_type = std::nullopt);

/// rec { Z -> v | S x -> y. w } with E  as
/// iter { Z -> pair(Z, v) | S -> (x, y). pair(S x, w) } with snd E.
/// Throws std::invalid_argument unless `rec` is a RecNat.
CoTerm encode_rec_via_iter(const CoTerm& rec);

/// corec { head a -> e | tail b -> g. f } with V  as
/// coiter { head a -> case[head a, e] | tail -> [b, g]. case[tail b, f] } with inr V.
/// Throws std::invalid_argument unless `corec` is a CoRec.
Term encode_corec_via_coiter(const Term& corec);

/// Applies the encodings to every RecNat (resp. CoRec) node, innermost first.
Command encode_recs(const Command& c);
Term encode_recs(const Term& t);
Command encode_corecs(const Command& c);
Term encode_corecs(const Term& t);

}  // namespace dualvm

#endif  // DUALVM_ENCODINGS_HPP
