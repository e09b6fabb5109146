#ifndef DUALVM_TYPE_HPP
#define DUALVM_TYPE_HPP

#include <memory>
#include <string>

namespace dualvm {

/// Object-language types.
///
/// `Atom` is an opaque base type with no constructors; it exists so the
/// Numbered/Stream fragment has closed types to talk about. Its dual is the
/// same atom with the polarity bit flipped (printed `X` and `~X`).
class Type {
 public:
  enum class Kind { Nat, Stream, Fn, Prod, Sum, Numbered, Atom };

  static Type nat();
  static Type stream(Type elem);
  static Type fn(Type arg, Type ret);
  static Type prod(Type left, Type right);
  static Type sum(Type left, Type right);
  static Type numbered(Type payload);
  static Type atom(std::string name, bool negated = false);

  Kind kind() const;
  bool is(Kind k) const { return kind() == k; }

  // Accessors; calling the wrong one for the kind is a logic error.
  const Type& elem() const;     // Stream, Numbered
  const Type& arg() const;      // Fn
  const Type& ret() const;      // Fn
  const Type& left() const;     // Prod, Sum
  const Type& right() const;    // Prod, Sum
  const std::string& atom_name() const;
  bool atom_negated() const;

  friend bool operator==(const Type& a, const Type& b);
  friend bool operator!=(const Type& a, const Type& b) { return !(a == b); }

 private:
  struct Node;
  explicit Type(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

std::string to_string(const Type& t);

}  // namespace dualvm

#endif  // DUALVM_TYPE_HPP
