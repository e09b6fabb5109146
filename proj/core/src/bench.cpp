#include "dualvm/bench.hpp"

#include <iomanip>
#include <map>
#include <sstream>

#include "dualvm/encodings.hpp"
#include "dualvm/prelude.hpp"
#include "json.hpp"

namespace dualvm {

const char* to_string(GrowthClass g) {
  switch (g) {
    case GrowthClass::Constant: return "Constant";
    case GrowthClass::Linear: return "Linear";
    case GrowthClass::Quadratic: return "Quadratic";
    case GrowthClass::Other: return "Other";
  }
  return "Other";
}

std::vector<std::int64_t> CostCurve::totals() const {
  std::vector<std::int64_t> out;
  for (const auto& p : points) out.push_back(p.total);
  return out;
}

std::vector<std::int64_t> CostCurve::counts(RuleTag r) const {
  std::vector<std::int64_t> out;
  for (const auto& p : points) out.push_back(p.count(r));
  return out;
}

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = {"pred-native", "pred-via-iter", "scons-overhead", "countNow",
                                                 "corec-via-coiter"};
  return names;
}

namespace {

const CompiledProgram& compiled_prelude(Strategy s) {
  static const CompiledProgram cbv = compile(prelude(), Strategy::CBV);
  static const CompiledProgram cbn = compile(prelude(), Strategy::CBN);
  return s == Strategy::CBV ? cbv : cbn;
}

Term def(Strategy s, const std::string& name) { return compiled_prelude(s).surface.defs.at(name).compiled; }

// ⟨zeroes ∥ μ̃s.⟨scons ∥ Z · s · tail^(n+1) (head a0)⟩⟩
Command scons_over_zeroes(const Term& scons, Strategy s, std::uint64_t n) {
  using namespace build;
  CoTerm obs = tails(n + 1, head(covar(kTopCovar)));
  return cut(def(s, "zeroes"),
             mutilde("s", cut(scons, call(zero(), call(var("s"), obs))), Type::stream(Type::nat())));
}

Command zeroes_at(Strategy s, std::uint64_t n) {
  return build::cut(def(s, "zeroes"), build::tails(n, build::head(build::covar(kTopCovar))));
}

void check_name(const std::string& name) {
  for (const auto& n : experiment_names())
    if (n == name) return;
  throw UnknownExperiment(name);
}

}  // namespace

Command experiment_command(const std::string& name, Strategy s, std::uint64_t n) {
  using namespace build;
  check_name(name);
  if (name == "pred-native") return cut(def(s, "pred"), call(numeral(n), covar(kTopCovar)));
  if (name == "pred-via-iter") return cut(encode_recs(def(s, "pred")), call(numeral(n), covar(kTopCovar)));
  if (name == "scons-overhead") return scons_over_zeroes(def(s, "scons"), s, n);
  if (name == "countNow")
    return cut(def(s, "countNow"), call(numeral(n), tails(n, head(covar(kTopCovar)))));
  return scons_over_zeroes(encode_corecs(def(s, "scons")), s, n);
}

std::optional<Command> experiment_baseline(const std::string& name, Strategy s, std::uint64_t n) {
  check_name(name);
  if (name == "scons-overhead" || name == "corec-via-coiter") return zeroes_at(s, n);
  return std::nullopt;
}

CostCurve run_experiment(const std::string& name, Strategy s, const std::vector<std::uint64_t>& sizes,
                         std::uint64_t fuel) {
  check_name(name);
  for (std::size_t i = 1; i < sizes.size(); ++i)
    if (sizes[i] <= sizes[i - 1]) throw std::invalid_argument("sizes must be strictly increasing");
  CostCurve curve{name, s, {}};
  for (std::uint64_t n : sizes) {
    CostPoint p;
    p.n = n;
    RunStats main = evaluate(experiment_command(name, s, n), s, fuel).result.stats;
    p.outcome = main.outcome;
    p.total = static_cast<std::int64_t>(main.total);
    for (std::size_t r = 0; r < kRuleCount; ++r) p.per_rule[r] = static_cast<std::int64_t>(main.per_rule[r]);
    if (auto base = experiment_baseline(name, s, n)) {
      RunStats b = evaluate(*base, s, fuel).result.stats;
      if (b.outcome != Outcome::Final) p.outcome = b.outcome;
      p.total -= static_cast<std::int64_t>(b.total);
      for (std::size_t r = 0; r < kRuleCount; ++r) p.per_rule[r] -= static_cast<std::int64_t>(b.per_rule[r]);
    }
    curve.points.push_back(p);
  }
  return curve;
}

GrowthClass classify(const std::vector<std::int64_t>& values) {
  if (values.size() < kMinPoints) return GrowthClass::Other;
  std::vector<std::int64_t> v(values.begin() + kWarmup, values.end());
  auto diff = [](const std::vector<std::int64_t>& xs) {
    std::vector<std::int64_t> d;
    for (std::size_t i = 1; i < xs.size(); ++i) d.push_back(xs[i] - xs[i - 1]);
    return d;
  };
  auto all_equal = [](const std::vector<std::int64_t>& xs) {
    for (auto x : xs)
      if (x != xs.front()) return false;
    return true;
  };
  auto d1 = diff(v);
  if (all_equal(d1)) return d1.front() == 0 ? GrowthClass::Constant : GrowthClass::Linear;
  auto d2 = diff(d1);
  if (all_equal(d2) && d2.front() != 0) return GrowthClass::Quadratic;
  return GrowthClass::Other;
}

GrowthClass classify(const CostCurve& curve) { return classify(curve.totals()); }

std::string report_json(const CostCurve& curve) {
  nlohmann::ordered_json j;
  j["experiment"] = curve.experiment;
  j["strategy"] = to_string(curve.strategy);
  nlohmann::ordered_json pts = nlohmann::ordered_json::array();
  for (const auto& p : curve.points) {
    nlohmann::ordered_json pj;
    pj["n"] = p.n;
    pj["total"] = p.total;
    nlohmann::ordered_json per = nlohmann::ordered_json::object();
    for (RuleTag r : all_rules())
      if (p.count(r) != 0) per[to_string(r)] = p.count(r);
    pj["perRule"] = per;
    if (p.outcome != Outcome::Final) pj["outcome"] = to_string(p.outcome);
    pts.push_back(pj);
  }
  j["points"] = pts;
  j["class"] = to_string(classify(curve));
  return j.dump();
}

std::string report_csv(const CostCurve& curve) {
  std::ostringstream os;
  os << "n,total";
  for (RuleTag r : all_rules()) os << ',' << to_string(r);
  os << '\n';
  for (const auto& p : curve.points) {
    os << p.n << ',' << p.total;
    for (RuleTag r : all_rules()) os << ',' << p.count(r);
    os << '\n';
  }
  return os.str();
}

std::string report_table(const CostCurve& curve) {
  std::vector<RuleTag> used;
  for (RuleTag r : all_rules())
    for (const auto& p : curve.points)
      if (p.count(r) != 0) {
        used.push_back(r);
        break;
      }
  std::ostringstream os;
  os << curve.experiment << " (" << to_string(curve.strategy) << ")\n";
  os << std::setw(6) << "n" << std::setw(10) << "total";
  for (RuleTag r : used) os << std::setw(13) << to_string(r);
  os << '\n';
  for (const auto& p : curve.points) {
    os << std::setw(6) << p.n << std::setw(10) << p.total;
    for (RuleTag r : used) os << std::setw(13) << p.count(r);
    if (p.outcome != Outcome::Final) os << "  " << to_string(p.outcome);
    os << '\n';
  }
  os << "class: " << to_string(classify(curve)) << '\n';
  return os.str();
}

}  // namespace dualvm
