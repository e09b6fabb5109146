#include "dualvm/type.hpp"

#include <cassert>
#include <optional>

#include "dualvm/pretty.hpp"

namespace dualvm {

struct Type::Node {
  Kind kind;
  std::optional<Type> a;
  std::optional<Type> b;
  std::string name;
  bool negated = false;
};

Type Type::nat() {
  static const auto node = std::make_shared<const Node>(Node{Kind::Nat, {}, {}, {}, false});
  return Type(node);
}

Type Type::stream(Type elem) {
  return Type(std::make_shared<const Node>(Node{Kind::Stream, std::move(elem), {}, {}, false}));
}

Type Type::fn(Type arg, Type ret) {
  return Type(std::make_shared<const Node>(Node{Kind::Fn, std::move(arg), std::move(ret), {}, false}));
}

Type Type::prod(Type left, Type right) {
  return Type(std::make_shared<const Node>(Node{Kind::Prod, std::move(left), std::move(right), {}, false}));
}

Type Type::sum(Type left, Type right) {
  return Type(std::make_shared<const Node>(Node{Kind::Sum, std::move(left), std::move(right), {}, false}));
}

Type Type::numbered(Type payload) {
  return Type(std::make_shared<const Node>(Node{Kind::Numbered, std::move(payload), {}, {}, false}));
}

Type Type::atom(std::string name, bool negated) {
  return Type(std::make_shared<const Node>(Node{Kind::Atom, {}, {}, std::move(name), negated}));
}

Type::Kind Type::kind() const { return node_->kind; }

const Type& Type::elem() const {
  assert(kind() == Kind::Stream || kind() == Kind::Numbered);
  return *node_->a;
}
const Type& Type::arg() const {
  assert(kind() == Kind::Fn);
  return *node_->a;
}
const Type& Type::ret() const {
  assert(kind() == Kind::Fn);
  return *node_->b;
}
const Type& Type::left() const {
  assert(kind() == Kind::Prod || kind() == Kind::Sum);
  return *node_->a;
}
const Type& Type::right() const {
  assert(kind() == Kind::Prod || kind() == Kind::Sum);
  return *node_->b;
}
const std::string& Type::atom_name() const { return node_->name; }
bool Type::atom_negated() const { return node_->negated; }

bool operator==(const Type& x, const Type& y) {
  if (x.node_ == y.node_) return true;
  if (x.kind() != y.kind()) return false;
  switch (x.kind()) {
    case Type::Kind::Nat:
      return true;
    case Type::Kind::Atom:
      return x.atom_name() == y.atom_name() && x.atom_negated() == y.atom_negated();
    case Type::Kind::Stream:
    case Type::Kind::Numbered:
      return x.elem() == y.elem();
    case Type::Kind::Fn:
    case Type::Kind::Prod:
    case Type::Kind::Sum:
      return *x.node_->a == *y.node_->a && *x.node_->b == *y.node_->b;
  }
  return false;
}

std::string to_string(const Type& t) { return pretty(t); }

}  // namespace dualvm
