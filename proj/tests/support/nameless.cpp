#include "nameless.hpp"

#include <algorithm>
#include <type_traits>
#include <stdexcept>

namespace dualvm::testing {

namespace {

struct Binder {
  bool covar;
  std::string name;
};

class Builder {
 public:
  Nameless term(const Term& t) {
    return visit(t, overloaded{
                        [&](const Var& n) { return leaf(false, n.name); },
                        [&](const Zero&) { return node("Z", {}); },
                        [&](const Mu& n) { return node("mu", {under({{true, n.covar}}, n.body)}); },
                        [&](const Lam& n) { return node("lam", {under({{false, n.var}}, n.body)}); },
                        [&](const Succ& n) { return node("S", {term(n.arg)}); },
                        [&](const NumZero& n) { return node("NZ", {term(n.arg)}); },
                        [&](const NumSucc& n) { return node("NS", {term(n.arg)}); },
                        [&](const Pair& n) { return node("pair", {term(n.first), term(n.second)}); },
                        [&](const InL& n) { return node("inl", {term(n.arg)}); },
                        [&](const InR& n) { return node("inr", {term(n.arg)}); },
                        [&](const CoRec& n) {
                          return node("corec", {under({{true, n.head_covar}}, n.head_body),
                                                under({{true, n.tail_covar}, {true, n.seed_covar}}, n.tail_body),
                                                term(n.seed)});
                        },
                    });
  }

  Nameless coterm(const CoTerm& e) {
    return visit(e, overloaded{
                        [&](const CoVar& n) { return leaf(true, n.name); },
                        [&](const MuTilde& n) { return node("mut", {under({{false, n.var}}, n.body)}); },
                        [&](const Call& n) { return node("call", {term(n.arg), coterm(n.rest)}); },
                        [&](const RecNat& n) {
                          return node("rec", {term(n.zero_branch),
                                              under({{false, n.pred_var}, {false, n.result_var}}, n.succ_branch),
                                              coterm(n.ret)});
                        },
                        [&](const RecNum& n) {
                          return node("recn", {under({{false, n.payload_var}}, n.zero_branch),
                                               under({{false, n.pred_var}, {false, n.result_var}}, n.succ_branch),
                                               coterm(n.ret)});
                        },
                        [&](const Head& n) { return node("head", {coterm(n.rest)}); },
                        [&](const Tail& n) { return node("tail", {coterm(n.rest)}); },
                        [&](const Fst& n) { return node("fst", {coterm(n.rest)}); },
                        [&](const Snd& n) { return node("snd", {coterm(n.rest)}); },
                        [&](const SumCase& n) { return node("case", {coterm(n.left), coterm(n.right)}); },
                    });
  }

  Nameless command(const Command& c) { return node("cut", {term(c.producer), coterm(c.consumer)}); }

 private:
  std::vector<Binder> stack_;

  static Nameless node(std::string label, std::vector<Nameless> kids) {
    Nameless n;
    n.label = std::move(label);
    n.kids = std::move(kids);
    return n;
  }

  Nameless leaf(bool covar, const std::string& name) {
    for (std::size_t i = stack_.size(); i-- > 0;) {
      if (stack_[i].covar == covar && stack_[i].name == name) {
        Nameless n;
        n.leaf = Nameless::Leaf::Bound;
        n.index = stack_.size() - 1 - i;
        return n;
      }
    }
    Nameless n;
    n.leaf = covar ? Nameless::Leaf::FreeCovar : Nameless::Leaf::FreeVar;
    n.name = name;
    return n;
  }

  template <class Body>
  Nameless under(std::vector<Binder> bs, const Body& body) {
    for (auto& b : bs) stack_.push_back(b);
    Nameless out;
    if constexpr (std::is_same_v<Body, Term>)
      out = term(body);
    else if constexpr (std::is_same_v<Body, CoTerm>)
      out = coterm(body);
    else
      out = command(body);
    stack_.resize(stack_.size() - bs.size());
    // the binder count is part of the shape
    return node("bind" + std::to_string(bs.size()), {std::move(out)});
  }
};

void write(const Nameless& n, std::string& out) {
  switch (n.leaf) {
    case Nameless::Leaf::Bound:
      out += "#" + std::to_string(n.index) + " ";
      return;
    case Nameless::Leaf::FreeVar:
      out += "v:" + n.name + " ";
      return;
    case Nameless::Leaf::FreeCovar:
      out += "k:" + n.name + " ";
      return;
    case Nameless::Leaf::None:
      break;
  }
  out += "(" + n.label + " ";
  for (const auto& k : n.kids) write(k, out);
  out += ") ";
}

}  // namespace

Nameless nameless(const Term& t) { return Builder{}.term(t); }
Nameless nameless(const CoTerm& e) { return Builder{}.coterm(e); }
Nameless nameless(const Command& c) { return Builder{}.command(c); }

Nameless replace_free(const Nameless& n, bool covar, const std::string& name, const Nameless& repl) {
  auto want = covar ? Nameless::Leaf::FreeCovar : Nameless::Leaf::FreeVar;
  if (n.leaf == want && n.name == name) return repl;
  Nameless out = n;
  for (auto& k : out.kids) k = replace_free(k, covar, name, repl);
  return out;
}

std::string serialize(const Nameless& n) {
  std::string out;
  write(n, out);
  return out;
}

}  // namespace dualvm::testing
