#include "dualvm/pretty.hpp"

#include <optional>
#include <sstream>
#include <type_traits>

namespace dualvm {

namespace {

// Type precedence: arrow < sum < product < Stream/Num < atomic.
int type_level(const Type& t) {
  switch (t.kind()) {
    case Type::Kind::Fn:
      return 0;
    case Type::Kind::Sum:
      return 1;
    case Type::Kind::Prod:
      return 2;
    case Type::Kind::Stream:
    case Type::Kind::Numbered:
      return 3;
    default:
      return 4;
  }
}

void print_type(std::ostream& os, const Type& t, int prec) {
  bool parens = type_level(t) < prec;
  if (parens) os << '(';
  switch (t.kind()) {
    case Type::Kind::Nat:
      os << "Nat";
      break;
    case Type::Kind::Atom:
      if (t.atom_negated()) os << '~';
      os << t.atom_name();
      break;
    case Type::Kind::Stream:
      os << "Stream ";
      print_type(os, t.elem(), 3);
      break;
    case Type::Kind::Numbered:
      os << "Num ";
      print_type(os, t.elem(), 3);
      break;
    case Type::Kind::Fn:
      print_type(os, t.arg(), 1);
      os << " -> ";
      print_type(os, t.ret(), 0);
      break;
    case Type::Kind::Sum:
      print_type(os, t.left(), 2);
      os << " + ";
      print_type(os, t.right(), 1);
      break;
    case Type::Kind::Prod:
      print_type(os, t.left(), 3);
      os << " * ";
      print_type(os, t.right(), 2);
      break;
  }
  if (parens) os << ')';
}

// Counts a Succ chain ending in Zero.
std::optional<std::uint64_t> as_numeral(const Term& t) {
  std::uint64_t n = 0;
  const Term* cur = &t;
  while (const auto* s = cur->as<Succ>()) {
    ++n;
    cur = &s->arg;
  }
  if (cur->is<Zero>()) return n;
  return std::nullopt;
}

class Printer {
 public:
  Printer(std::ostream& os, PrettyOptions opts) : os_(os), opts_(opts) {}

  // level 0: anything; 1: argument of a prefix constructor or call stack;
  // 2: atomic only.
  void term(const Term& t, int level) {
    if (opts_.numerals && !t.is<Zero>()) {
      if (auto n = as_numeral(t)) {
        os_ << *n;
        return;
      }
    }
    visit(t, overloaded{
                 [&](const Var& n) { os_ << n.name; },
                 [&](const Zero&) { os_ << 'Z'; },
                 [&](const Pair& n) {
                   os_ << "pair(";
                   term(n.first, 0);
                   os_ << ", ";
                   term(n.second, 0);
                   os_ << ')';
                 },
                 [&](const auto& n) {
                   bool parens = needs_parens(n, level);
                   if (parens) os_ << '(';
                   compound(n);
                   if (parens) os_ << ')';
                 },
             });
  }

  void coterm(const CoTerm& e) {
    visit(e, overloaded{
                 [&](const CoVar& n) { os_ << n.name; },
                 [&](const MuTilde& n) {
                   os_ << "comu " << n.var;
                   annot(n.annot);
                   os_ << ". ";
                   command(n.body);
                 },
                 [&](const Call& n) {
                   term(n.arg, 1);
                   os_ << " . ";
                   coterm(n.rest);
                 },
                 [&](const RecNat& n) {
                   os_ << "rec { Z -> ";
                   term(n.zero_branch, 0);
                   os_ << " | S " << n.pred_var << " -> " << n.result_var;
                   annot(n.result_type);
                   os_ << ". ";
                   term(n.succ_branch, 0);
                   os_ << " } with ";
                   coterm(n.ret);
                 },
                 [&](const RecNum& n) {
                   os_ << "rec { Z " << n.payload_var;
                   arrow_safe_annot(n.payload_type);
                   os_ << " -> ";
                   term(n.zero_branch, 0);
                   os_ << " | S " << n.pred_var << " -> " << n.result_var;
                   annot(n.result_type);
                   os_ << ". ";
                   term(n.succ_branch, 0);
                   os_ << " } with ";
                   coterm(n.ret);
                 },
                 [&](const Head& n) {
                   os_ << "head ";
                   coterm(n.rest);
                 },
                 [&](const Tail& n) {
                   os_ << "tail ";
                   coterm(n.rest);
                 },
                 [&](const Fst& n) {
                   os_ << "fst ";
                   braced_annot(n.annot);
                   coterm(n.rest);
                 },
                 [&](const Snd& n) {
                   os_ << "snd ";
                   braced_annot(n.annot);
                   coterm(n.rest);
                 },
                 [&](const SumCase& n) {
                   os_ << "case ";
                   braced_annot(n.annot);
                   os_ << '[';
                   coterm(n.left);
                   os_ << ", ";
                   coterm(n.right);
                   os_ << ']';
                 },
             });
  }

  void command(const Command& c) {
    os_ << '<';
    term(c.producer, 0);
    os_ << " | ";
    coterm(c.consumer);
    os_ << '>';
  }

 private:
  template <class N>
  static bool needs_parens(const N&, int level) {
    if constexpr (std::is_same_v<N, Lam> || std::is_same_v<N, CoRec>) return level >= 1;
    return level >= 2;
  }

  void compound(const Mu& n) {
    os_ << "mu " << n.covar;
    annot(n.annot);
    os_ << ". ";
    command(n.body);
  }
  void compound(const Lam& n) {
    os_ << "fun " << n.var;
    annot(n.annot);
    os_ << " => ";
    term(n.body, 0);
  }
  void compound(const Succ& n) {
    os_ << "S ";
    term(n.arg, 2);
  }
  void compound(const NumZero& n) {
    os_ << "nzero ";
    term(n.arg, 2);
  }
  void compound(const NumSucc& n) {
    os_ << "nsucc ";
    term(n.arg, 2);
  }
  void compound(const InL& n) {
    os_ << "inl ";
    braced_annot(n.annot);
    term(n.arg, 2);
  }
  void compound(const InR& n) {
    os_ << "inr ";
    braced_annot(n.annot);
    term(n.arg, 2);
  }
  void compound(const CoRec& n) {
    os_ << "corec { head " << n.head_covar;
    arrow_safe_annot(n.elem);
    os_ << " -> ";
    coterm(n.head_body);
    os_ << " | tail " << n.tail_covar << " -> " << n.seed_covar;
    annot(n.seed_type);
    os_ << ". ";
    coterm(n.tail_body);
    os_ << " } with ";
    term(n.seed, 0);
  }

  void annot(const std::optional<Type>& t) {
    if (!opts_.annotations || !t) return;
    os_ << " : ";
    print_type(os_, *t, 0);
  }
  void arrow_safe_annot(const std::optional<Type>& t) {
    if (!opts_.annotations || !t) return;
    os_ << " : ";
    print_type(os_, *t, 1);
  }
  void braced_annot(const std::optional<Type>& t) {
    if (!opts_.annotations || !t) return;
    os_ << '{';
    print_type(os_, *t, 0);
    os_ << "} ";
  }

  std::ostream& os_;
  PrettyOptions opts_;
};

}  // namespace

std::string pretty(const Type& t) {
  std::ostringstream os;
  print_type(os, t, 0);
  return os.str();
}

std::string pretty_type_arg(const Type& t) {
  std::ostringstream os;
  print_type(os, t, 1);
  return os.str();
}

std::string pretty(const Term& t, PrettyOptions opts) {
  std::ostringstream os;
  Printer(os, opts).term(t, 0);
  return os.str();
}

std::string pretty(const CoTerm& e, PrettyOptions opts) {
  std::ostringstream os;
  Printer(os, opts).coterm(e);
  return os.str();
}

std::string pretty(const Command& c, PrettyOptions opts) {
  std::ostringstream os;
  Printer(os, opts).command(c);
  return os.str();
}

}  // namespace dualvm
