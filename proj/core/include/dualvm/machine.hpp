#ifndef DUALVM_MACHINE_HPP
#define DUALVM_MACHINE_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "dualvm/pretty.hpp"
#include "dualvm/syntax.hpp"

namespace dualvm {

enum class RuleTag {
  Mu,
  MuTilde,
  BetaArrow,
  BetaZero,
  BetaSucc,
  BetaHead,
  BetaTail,
  BetaFst,
  BetaSnd,
  BetaInL,
  BetaInR,
  BetaNumZero,
  BetaNumSucc,
};

inline constexpr std::size_t kRuleCount = 13;
const std::array<RuleTag, kRuleCount>& all_rules();
const char* to_string(RuleTag r);
std::optional<RuleTag> rule_from_string(std::string_view name);

inline constexpr std::uint64_t kDefaultFuel = 1'000'000;
inline constexpr std::size_t kTraceLimit = 10'000;

struct Stepped {
  Command next;
  RuleTag rule;
};
enum class FinalShape { Zero, Succ };
struct Final {
  FinalShape shape;
};
struct Stuck {
  std::string reason;
};
using StepOutcome = std::variant<Stepped, Final, Stuck>;

/// One machine transition. At most one rule applies; ⟨Z ∥ α⟩ and ⟨S V ∥ α⟩
/// are final; anything else that cannot move is stuck.
StepOutcome step(const Command& c, Strategy s);

enum class Outcome { Final, OutOfFuel, Stuck };
const char* to_string(Outcome o);

struct RunStats {
  std::array<std::uint64_t, kRuleCount> per_rule{};
  std::uint64_t total = 0;
  std::uint64_t fuel_used = 0;
  Outcome outcome = Outcome::Final;
  std::string stuck_reason;

  std::uint64_t count(RuleTag r) const { return per_rule[static_cast<std::size_t>(r)]; }
  void record(RuleTag r) {
    ++per_rule[static_cast<std::size_t>(r)];
    ++total;
    ++fuel_used;
  }
  /// Adds another run's counters; the outcome becomes the other's unless it was Final.
  void absorb(const RunStats& other);
};

struct TraceEntry {
  std::size_t index;
  RuleTag rule;
  std::string command_text;
};

struct RunOptions {
  std::uint64_t fuel = kDefaultFuel;
  bool trace = false;
  std::size_t trace_limit = kTraceLimit;
  PrettyOptions pretty{};
};

struct RunResult {
  Command last;
  RunStats stats;
  std::vector<TraceEntry> trace;
  bool trace_truncated = false;
};

RunResult run(const Command& c, Strategy s, const RunOptions& opts = {});

class MachineError : public std::runtime_error {
 public:
  enum class Kind { OutOfFuel, Stuck, ElementNotNat };
  MachineError(Kind k, const std::string& msg) : std::runtime_error(msg), kind(k) {}
  Kind kind;
};

/// Counts Succ constructors, running any delayed argument against a fresh
/// covariable. Steps taken are added to `stats` when given.
std::uint64_t force_numeral(const Term& v, Strategy s, std::uint64_t fuel = kDefaultFuel,
                            RunStats* stats = nullptr);

struct Evaluation {
  RunResult result;            // stats include the forcing steps
  std::optional<std::uint64_t> value;
};

/// run() followed by force_numeral() of the final producer.
Evaluation evaluate(const Command& c, Strategy s, std::uint64_t fuel = kDefaultFuel);

/// ⟨v ∥ tail^n (head a0)⟩, forced to a numeral. Throws MachineError.
std::uint64_t observe_stream(const Term& v, std::uint64_t n, Strategy s, std::uint64_t fuel = kDefaultFuel,
                             RunStats* stats = nullptr);
Command observation(const Term& v, std::uint64_t n);

// JSON renderings: one {"i","rule","cmd"} object per trace line, and
// {"outcome","total","perRule"} for stats.
std::string trace_to_jsonl(const std::vector<TraceEntry>& trace);
std::string stats_to_json(const RunStats& stats);

}  // namespace dualvm

#endif  // DUALVM_MACHINE_HPP
