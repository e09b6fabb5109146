#ifndef DUALVM_BENCH_HPP
#define DUALVM_BENCH_HPP

// Step-count experiments over the prelude, with growth classification by
// exact finite differences.

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "dualvm/machine.hpp"

namespace dualvm {

inline constexpr std::uint64_t kBenchFuel = 10'000'000;

enum class GrowthClass { Constant, Linear, Quadratic, Other };
const char* to_string(GrowthClass g);

struct CostPoint {
  std::uint64_t n = 0;
  // Signed: the overhead experiments report a difference of two runs.
  std::int64_t total = 0;
  std::array<std::int64_t, kRuleCount> per_rule{};
  Outcome outcome = Outcome::Final;

  std::int64_t count(RuleTag r) const { return per_rule[static_cast<std::size_t>(r)]; }
};

struct CostCurve {
  std::string experiment;
  Strategy strategy;
  std::vector<CostPoint> points;

  std::vector<std::int64_t> totals() const;
  std::vector<std::int64_t> counts(RuleTag r) const;
};

class UnknownExperiment : public std::invalid_argument {
 public:
  explicit UnknownExperiment(const std::string& name) : std::invalid_argument("unknown experiment " + name) {}
};

/// pred-native, pred-via-iter, scons-overhead, countNow, corec-via-coiter.
const std::vector<std::string>& experiment_names();

/// The command measured at size n. The overhead experiments measure two
/// commands; this returns the first (scons over zeroes at depth n + 1).
Command experiment_command(const std::string& name, Strategy s, std::uint64_t n);
/// The subtracted baseline of an overhead experiment, if it has one.
std::optional<Command> experiment_baseline(const std::string& name, Strategy s, std::uint64_t n);

/// Each point counts the run to a final state plus the steps spent forcing
/// the answer to a numeral. Sizes must be strictly increasing.
CostCurve run_experiment(const std::string& name, Strategy s, const std::vector<std::uint64_t>& sizes,
                         std::uint64_t fuel = kBenchFuel);

inline constexpr std::size_t kWarmup = 2;
inline constexpr std::size_t kMinPoints = 5;

/// Drops the first kWarmup values, then: Constant if the first differences
/// are all zero, Linear if they are all equal, Quadratic if the second
/// differences are all equal and nonzero, Other otherwise (or with fewer
/// than kMinPoints values).
GrowthClass classify(const std::vector<std::int64_t>& values);
GrowthClass classify(const CostCurve& curve);

/// {"experiment","strategy","points":[{"n","total","perRule"}],"class"}
std::string report_json(const CostCurve& curve);
/// Columns n,total,<rule>... one row per size.
std::string report_csv(const CostCurve& curve);
/// Aligned text table followed by the growth class.
std::string report_table(const CostCurve& curve);

}  // namespace dualvm

#endif  // DUALVM_BENCH_HPP
