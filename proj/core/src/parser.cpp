#include "dualvm/parser.hpp"

#include <cctype>
#include <set>
#include <sstream>
#include <vector>

#include "dualvm/kernel.hpp"

namespace dualvm {

ParseError::ParseError(int l, int c, const std::string& msg)
    : std::runtime_error(std::to_string(l) + ":" + std::to_string(c) + ": " + msg), line(l), col(c), message(msg) {}

namespace {

enum class Tok { Ident, Number, Symbol, End };

struct Token {
  Tok kind;
  std::string text;
  int line;
  int col;
};

const std::set<std::string>& keywords() {
  static const std::set<std::string> k = {
      "def",  "main", "var", "covar", "fun",  "mu",    "comu",  "corec", "rec",  "with", "as",
      "head", "tail", "fst", "snd",   "case", "nzero", "nsucc", "pair",  "inl",  "inr",  "Z",
      "S",    "Nat",  "Stream", "Num",
  };
  return k;
}

// Tokens that only occur in machine-language bodies.
const std::set<std::string>& machine_markers() {
  static const std::set<std::string> k = {"mu",  "comu", "corec", "nzero", "nsucc", "pair", "inl", "inr",
                                          "head", "tail", "fst",  "snd",   "case",  "with", "<"};
  return k;
}

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '-' && i + 1 < src.size() && src[i + 1] == '-') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    int l = line, cl = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_' || src[j] == '\''))
        ++j;
      out.push_back({Tok::Ident, std::string(src.substr(i, j - i)), l, cl});
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      out.push_back({Tok::Number, std::string(src.substr(i, j - i)), l, cl});
      advance(j - i);
      continue;
    }
    if (i + 1 < src.size()) {
      std::string two(src.substr(i, 2));
      if (two == "->" || two == "=>") {
        out.push_back({Tok::Symbol, two, l, cl});
        advance(2);
        continue;
      }
    }
    static const std::string singles = "(){}[]<>|.,;:=+*~";
    if (singles.find(c) != std::string::npos) {
      out.push_back({Tok::Symbol, std::string(1, c), l, cl});
      advance(1);
      continue;
    }
    throw ParseError(l, cl, std::string("unexpected character '") + c + "'");
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  // ---- token helpers ----

  const Token& peek(std::size_t k = 0) const {
    std::size_t p = pos_ + k;
    return p < toks_.size() ? toks_[p] : toks_.back();
  }
  bool at(const char* text) const {
    const Token& t = peek();
    return (t.kind == Tok::Symbol || t.kind == Tok::Ident) && t.text == text;
  }
  bool at_end() const { return peek().kind == Tok::End; }
  Token next() {
    Token t = peek();
    if (pos_ < toks_.size()) ++pos_;
    return t;
  }
  bool accept(const char* text) {
    if (!at(text)) return false;
    ++pos_;
    return true;
  }
  void expect(const char* text) {
    if (!accept(text)) error(std::string("expected '") + text + "'");
  }
  std::string ident() {
    const Token& t = peek();
    if (t.kind != Tok::Ident || keywords().count(t.text)) error("expected an identifier");
    return next().text;
  }
  bool at_ident() const { return peek().kind == Tok::Ident && !keywords().count(peek().text); }
  [[noreturn]] void error(const std::string& msg) const {
    const Token& t = peek();
    std::string found = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    throw ParseError(t.line, t.col, msg + ", found " + found);
  }
  std::size_t position() const { return pos_; }
  const std::vector<Token>& tokens() const { return toks_; }
  void seek(std::size_t p) { pos_ = p; }

  // ---- types ----

  Type type() {
    Type left = type_sum();
    if (accept("->")) return Type::fn(left, type());
    return left;
  }
  Type type_sum() {
    Type left = type_prod();
    if (accept("+")) return Type::sum(left, type_sum());
    return left;
  }
  Type type_prod() {
    Type left = type_app();
    if (accept("*")) return Type::prod(left, type_prod());
    return left;
  }
  Type type_app() {
    if (accept("Stream")) return Type::stream(type_app());
    if (accept("Num")) return Type::numbered(type_app());
    if (accept("Nat")) return Type::nat();
    if (accept("~")) return Type::atom(ident(), true);
    if (accept("(")) {
      Type t = type();
      expect(")");
      return t;
    }
    if (at_ident()) return Type::atom(ident(), false);
    error("expected a type");
  }
  std::optional<Type> opt_annot() {
    if (accept(":")) return type();
    return std::nullopt;
  }
  std::optional<Type> opt_annot_noarrow() {
    if (accept(":")) return type_sum();
    return std::nullopt;
  }
  std::optional<Type> opt_braced() {
    if (accept("{")) {
      Type t = type();
      expect("}");
      return t;
    }
    return std::nullopt;
  }

  // ---- machine terms ----

  Term term() {
    using namespace build;
    if (accept("fun")) {
      std::string x = ident();
      auto a = opt_annot();
      expect("=>");
      return lam(x, term(), a);
    }
    if (accept("corec")) {
      expect("{");
      expect("head");
      std::string h = ident();
      auto elem = opt_annot_noarrow();
      expect("->");
      CoTerm hb = coterm();
      expect("|");
      expect("tail");
      std::string b = ident();
      expect("->");
      std::string g = ident();
      auto seed_type = opt_annot();
      expect(".");
      CoTerm tb = coterm();
      expect("}");
      expect("with");
      Term seed = term();
      return corec(h, hb, b, g, tb, seed, elem, seed_type);
    }
    if (at("rec")) error("'rec ... as' is System T syntax and cannot appear in a machine term");
    Term t = unary();
    if (starts_unary()) error("application is only available in System T terms");
    return t;
  }

  bool starts_unary() const {
    const Token& t = peek();
    if (t.kind == Tok::Number) return true;
    if (t.kind == Tok::Ident)
      return !keywords().count(t.text) || t.text == "S" || t.text == "Z" || t.text == "nzero" ||
             t.text == "nsucc" || t.text == "inl" || t.text == "inr" || t.text == "pair" || t.text == "mu";
    return t.kind == Tok::Symbol && t.text == "(";
  }

  Term unary() {
    using namespace build;
    if (accept("S")) return succ(unary());
    if (accept("nzero")) return num_zero(unary());
    if (accept("nsucc")) return num_succ(unary());
    if (accept("inl")) {
      auto a = opt_braced();
      return inl(unary(), a);
    }
    if (accept("inr")) {
      auto a = opt_braced();
      return inr(unary(), a);
    }
    return atom();
  }

  Term atom() {
    using namespace build;
    if (peek().kind == Tok::Number) return numeral(number());
    if (accept("Z")) return zero();
    if (accept("(")) {
      Term t = term();
      expect(")");
      return t;
    }
    if (accept("pair")) {
      expect("(");
      Term a = term();
      expect(",");
      Term b = term();
      expect(")");
      return pair(a, b);
    }
    if (accept("mu")) {
      std::string a = ident();
      auto annot = opt_annot();
      expect(".");
      return mu(a, command(), annot);
    }
    if (at_ident()) return var(ident());
    error("expected a term");
  }

  std::uint64_t number() {
    Token t = next();
    try {
      return std::stoull(t.text);
    } catch (const std::exception&) {
      throw ParseError(t.line, t.col, "numeral out of range");
    }
  }

  CoTerm coterm() {
    using namespace build;
    if (at_ident() && !(peek(1).kind == Tok::Symbol && peek(1).text == ".")) return covar(ident());
    if (accept("comu")) {
      std::string x = ident();
      auto annot = opt_annot();
      expect(".");
      return mutilde(x, command(), annot);
    }
    if (accept("head")) return head(coterm());
    if (accept("tail")) return tail(coterm());
    if (accept("fst")) {
      auto a = opt_braced();
      return fst(coterm(), a);
    }
    if (accept("snd")) {
      auto a = opt_braced();
      return snd(coterm(), a);
    }
    if (accept("case")) {
      auto a = opt_braced();
      expect("[");
      CoTerm l = coterm();
      expect(",");
      CoTerm r = coterm();
      expect("]");
      return sum_case(l, r, a);
    }
    if (accept("rec")) {
      expect("{");
      expect("Z");
      if (accept("->")) {
        Term z = term();
        expect("|");
        expect("S");
        std::string x = ident();
        expect("->");
        std::string y = ident();
        auto rt = opt_annot();
        expect(".");
        Term sb = term();
        expect("}");
        expect("with");
        return rec_nat(z, x, y, sb, coterm(), rt);
      }
      std::string p = ident();
      auto pt = opt_annot_noarrow();
      expect("->");
      Term z = term();
      expect("|");
      expect("S");
      std::string x = ident();
      expect("->");
      std::string y = ident();
      auto rt = opt_annot();
      expect(".");
      Term sb = term();
      expect("}");
      expect("with");
      return rec_num(p, z, x, y, sb, coterm(), pt, rt);
    }
    if (starts_unary()) {
      Term arg = unary();
      expect(".");
      return call(arg, coterm());
    }
    error("expected a coterm");
  }

  Command command() {
    expect("<");
    Term t = term();
    expect("|");
    CoTerm e = coterm();
    expect(">");
    return build::cut(t, e);
  }

  // ---- System T ----

  SurfaceTerm sterm() {
    if (accept("fun")) {
      std::string x = ident();
      auto a = opt_annot();
      expect("=>");
      return surface::lam(x, sterm(), a);
    }
    if (accept("rec")) {
      SurfaceTerm scrut = sterm();
      expect("as");
      expect("{");
      expect("Z");
      expect("->");
      SurfaceTerm z = sterm();
      expect("|");
      expect("S");
      std::string x = ident();
      expect("->");
      std::string y = ident();
      auto rt = opt_annot();
      expect(".");
      SurfaceTerm sb = sterm();
      expect("}");
      return surface::rec(scrut, z, x, y, sb, rt);
    }
    SurfaceTerm t = sunary();
    while (starts_sunary()) t = surface::app(t, sunary());
    return t;
  }

  bool starts_sunary() const {
    const Token& t = peek();
    if (t.kind == Tok::Number) return true;
    if (t.kind == Tok::Ident) return !keywords().count(t.text) || t.text == "S" || t.text == "Z";
    return t.kind == Tok::Symbol && t.text == "(";
  }

  SurfaceTerm sunary() {
    if (accept("S")) return surface::succ(sunary());
    if (peek().kind == Tok::Number) return surface::num(number());
    if (accept("Z")) return surface::zero();
    if (accept("(")) {
      SurfaceTerm t = sterm();
      expect(")");
      return t;
    }
    if (at_ident()) return surface::var(ident());
    error("expected a System T term");
  }

  void finish() {
    if (!at_end()) error("unexpected trailing input");
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

// Turns free variables that name known definitions into references.
SurfaceTerm link_refs(const SurfaceTerm& m, const std::set<std::string>& defs, std::vector<std::string>& bound) {
  namespace S = surface;
  auto is_bound = [&](const std::string& n) { return std::find(bound.begin(), bound.end(), n) != bound.end(); };
  return visit(m, overloaded{
                      [&](const S::Var& v) -> SurfaceTerm {
                        if (!is_bound(v.name) && defs.count(v.name)) return S::ref(v.name);
                        return m;
                      },
                      [&](const S::Lam& l) -> SurfaceTerm {
                        bound.push_back(l.var);
                        SurfaceTerm b = link_refs(l.body, defs, bound);
                        bound.pop_back();
                        return S::lam(l.var, b, l.annot);
                      },
                      [&](const S::App& a) -> SurfaceTerm {
                        return S::app(link_refs(a.fn, defs, bound), link_refs(a.arg, defs, bound));
                      },
                      [&](const S::Succ& s) -> SurfaceTerm { return S::succ(link_refs(s.arg, defs, bound)); },
                      [&](const S::Rec& r) -> SurfaceTerm {
                        SurfaceTerm scrut = link_refs(r.scrutinee, defs, bound);
                        SurfaceTerm z = link_refs(r.zero_branch, defs, bound);
                        bound.push_back(r.pred_var);
                        bound.push_back(r.result_var);
                        SurfaceTerm sb = link_refs(r.succ_branch, defs, bound);
                        bound.pop_back();
                        bound.pop_back();
                        return S::rec(scrut, z, r.pred_var, r.result_var, sb, r.result_type);
                      },
                      [&](const auto&) -> SurfaceTerm { return m; },
                  });
}

// Scans from the current position to the closing ';' (or the end).
bool body_is_machine(const Parser& p) {
  const auto& toks = p.tokens();
  for (std::size_t i = p.position(); i < toks.size(); ++i) {
    const Token& t = toks[i];
    if (t.kind == Tok::End || (t.kind == Tok::Symbol && t.text == ";")) break;
    if ((t.kind == Tok::Ident || t.kind == Tok::Symbol) && machine_markers().count(t.text)) return true;
  }
  return false;
}

std::variant<Command, Term, SurfaceTerm> body(Parser& p, const std::set<std::string>& defs,
                                              const std::set<std::string>& locals) {
  if (p.at("<")) return p.command();
  if (body_is_machine(p)) return p.term();
  std::vector<std::string> bound(locals.begin(), locals.end());
  return link_refs(p.sterm(), defs, bound);
}

template <class T, class F>
T parse_whole(std::string_view text, F f) {
  Parser p(lex(text));
  T out = f(p);
  p.finish();
  return out;
}

}  // namespace

Type parse_type(std::string_view text) {
  return parse_whole<Type>(text, [](Parser& p) { return p.type(); });
}
Term parse_term(std::string_view text) {
  return parse_whole<Term>(text, [](Parser& p) { return p.term(); });
}
CoTerm parse_coterm(std::string_view text) {
  return parse_whole<CoTerm>(text, [](Parser& p) { return p.coterm(); });
}
Command parse_command(std::string_view text) {
  return parse_whole<Command>(text, [](Parser& p) { return p.command(); });
}
SurfaceTerm parse_surface(std::string_view text) {
  return parse_whole<SurfaceTerm>(text, [](Parser& p) { return p.sterm(); });
}

std::variant<Command, Term, SurfaceTerm> parse_body(std::string_view text, const Program& known) {
  std::set<std::string> defs;
  for (const auto& d : known.defs) defs.insert(d.name);
  std::set<std::string> locals;
  for (const auto& v : known.vars) locals.insert(v.name);
  Parser p(lex(text));
  auto out = body(p, defs, locals);
  p.finish();
  return out;
}

Program parse_program(std::string_view text) {
  Parser p(lex(text));
  Program prog;
  std::set<std::string> names;
  std::set<std::string> locals;
  auto claim = [&](const std::string& name, int line, int col) {
    if (!names.insert(name).second) throw ParseError(line, col, "duplicate name " + name);
  };
  std::set<std::string> covar_names;
  while (!p.at_end()) {
    int line = p.peek().line, col = p.peek().col;
    if (p.accept("def")) {
      std::string name = p.ident();
      claim(name, line, col);
      p.expect(":");
      Type t = p.type();
      p.expect("=");
      std::set<std::string> earlier;
      for (const auto& d : prog.defs) earlier.insert(d.name);
      auto b = body(p, earlier, {});
      p.expect(";");
      if (std::holds_alternative<Command>(b)) throw ParseError(line, col, "a definition body must be a term");
      std::variant<Term, SurfaceTerm> db = std::holds_alternative<Term>(b)
                                               ? std::variant<Term, SurfaceTerm>(std::get<Term>(b))
                                               : std::variant<Term, SurfaceTerm>(std::get<SurfaceTerm>(b));
      prog.defs.push_back(Definition{name, t, db, line});
    } else if (p.accept("var")) {
      std::string name = p.ident();
      claim(name, line, col);
      p.expect(":");
      prog.vars.push_back({name, p.type()});
      locals.insert(name);
      p.expect(";");
    } else if (p.accept("covar")) {
      std::string name = p.ident();
      if (!covar_names.insert(name).second) throw ParseError(line, col, "duplicate covariable " + name);
      p.expect(":");
      prog.covars.push_back({name, p.type()});
      p.expect(";");
    } else if (p.accept("main")) {
      if (prog.main) throw ParseError(line, col, "main is defined twice");
      p.expect("=");
      std::set<std::string> defs;
      for (const auto& d : prog.defs) defs.insert(d.name);
      prog.main = body(p, defs, locals);
      p.expect(";");
    } else {
      p.error("expected 'def', 'var', 'covar' or 'main'");
    }
  }
  return prog;
}

}  // namespace dualvm
