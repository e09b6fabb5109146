#include "dualvm/program.hpp"

#include <set>
#include <sstream>

#include "dualvm/kernel.hpp"
#include "dualvm/pretty.hpp"

namespace dualvm {

const Definition* Program::find(const std::string& name) const {
  for (const auto& d : defs)
    if (d.name == name) return &d;
  return nullptr;
}

Program concat(const Program& base, const Program& extra) {
  Program out = extra;
  out.defs = base.defs;
  std::set<std::string> names;
  for (const auto& d : base.defs) names.insert(d.name);
  for (const auto& d : extra.defs) {
    if (!names.insert(d.name).second) throw ProgramError("duplicate definition " + d.name);
    out.defs.push_back(d);
  }
  for (const auto& v : extra.vars)
    if (names.count(v.name)) throw ProgramError("variable " + v.name + " shadows a definition");
  return out;
}

std::string pretty(const Program& p) {
  PrettyOptions ann{true, true};
  std::ostringstream os;
  for (const auto& d : p.defs) {
    os << "def " << d.name << " : " << pretty(d.type) << " =\n  ";
    if (auto t = std::get_if<Term>(&d.body))
      os << pretty(*t, ann);
    else
      os << pretty(std::get<SurfaceTerm>(d.body));
    os << ";\n";
  }
  for (const auto& v : p.vars) os << "var " << v.name << " : " << pretty(v.type) << ";\n";
  for (const auto& v : p.covars) os << "covar " << v.name << " : " << pretty(v.type) << ";\n";
  if (p.main) {
    os << "main = ";
    std::visit(overloaded{
                   [&](const Command& c) { os << pretty(c, ann); },
                   [&](const Term& t) { os << pretty(t, ann); },
                   [&](const SurfaceTerm& m) { os << pretty(m); },
               },
               *p.main);
    os << ";\n";
  }
  return os.str();
}

TypeEnv main_env(const Program& p) {
  TypeEnv env;
  env.covars.insert_or_assign(kTopCovar, Type::nat());
  for (const auto& v : p.vars) env.vars.insert_or_assign(v.name, v.type);
  for (const auto& a : p.covars) env.covars.insert_or_assign(a.name, a.type);
  return env;
}

namespace {

std::vector<std::string> referenced_defs(const FreeNames& fv, const CompiledProgram& cp) {
  // later definitions first, so a let-bound body sits outside its users
  std::vector<std::string> out;
  for (auto it = cp.order.rbegin(); it != cp.order.rend(); ++it)
    if (fv.vars.count(*it)) out.push_back(*it);
  return out;
}

TypeError prefixed(TypeError e, const Definition& d) {
  e.path = "def " + d.name + (d.line > 0 ? " (line " + std::to_string(d.line) + ")" : "") + ": " + e.path;
  return e;
}

}  // namespace

Command inline_defs(const Command& c, const CompiledProgram& cp) {
  Command out = c;
  for (const auto& name : referenced_defs(free_names(c), cp)) {
    const auto& d = cp.surface.defs.at(name);
    Command candidate = subst_var(out, name, d.compiled);
    if (is_value(d.compiled, cp.strategy) ||
        well_formed(candidate, cp.strategy).size() <= well_formed(out, cp.strategy).size()) {
      out = candidate;
    } else {
      out = build::cut(d.compiled, build::mutilde(name, out, d.type));
    }
  }
  return out;
}

Term inline_defs(const Term& t, const CompiledProgram& cp, const std::optional<Type>& type) {
  Term out = t;
  for (const auto& name : referenced_defs(free_names(t), cp)) {
    const auto& d = cp.surface.defs.at(name);
    Term candidate = subst_var(out, name, d.compiled);
    if (!type || is_value(d.compiled, cp.strategy) ||
        well_formed(candidate, cp.strategy).size() <= well_formed(out, cp.strategy).size()) {
      out = candidate;
    } else {
      std::set<std::string> avoid = free_names(out).covars;
      std::string a = fresh_name(avoid, "a");
      out = build::mu(a, build::cut(d.compiled, build::mutilde(name, build::cut(out, build::covar(a)), d.type)), type);
    }
  }
  return out;
}

CompiledProgram compile(const Program& p, Strategy s) {
  CompiledProgram cp{s, {}, {}, main_env(p)};
  for (const auto& d : p.defs) {
    try {
      Term compiled = std::visit(overloaded{
                                     [&](const SurfaceTerm& m) { return translate(m, s, cp.surface, d.type); },
                                     [&](const Term& t) { return inline_defs(t, cp, d.type); },
                                 },
                                 d.body);
      compiled = elaborate(TypeEnv{}, compiled, d.type);
      cp.surface.defs.insert_or_assign(d.name, SurfaceEnv::Def{d.type, compiled});
      cp.order.push_back(d.name);
    } catch (const TypeCheckFailure& f) {
      throw TypeCheckFailure(prefixed(f.error, d));
    }
  }
  return cp;
}

std::pair<Term, Type> compile_term(const std::variant<Term, SurfaceTerm>& body, const CompiledProgram& cp,
                                   const std::optional<Type>& expected) {
  if (auto m = std::get_if<SurfaceTerm>(&body)) {
    SurfaceEnv env = cp.surface;
    env.vars = cp.env.vars;
    Type a = expected ? *expected : surface_type(env, *m);
    Term t = translate(*m, cp.strategy, env, a);
    return {elaborate(cp.env, t, a), a};
  }
  Term t = inline_defs(std::get<Term>(body), cp, expected);
  if (expected) return {elaborate(cp.env, t, *expected), *expected};
  return elaborate_synth(cp.env, t);
}

Command compile_main(const Program& p, const CompiledProgram& cp) {
  if (!p.main) throw ProgramError("program has no main");
  return std::visit(overloaded{
                        [&](const Command& c) { return elaborate(cp.env, inline_defs(c, cp)); },
                        [&](const auto& t) {
                          Type top = cp.env.covars.at(kTopCovar);
                          auto [term, type] = compile_term(t, cp, top);
                          return build::cut(term, build::covar(kTopCovar));
                        },
                    },
                    *p.main);
}

}  // namespace dualvm
