#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "orthoseries/coefficients.hpp"
#include "orthoseries/majorants.hpp"
#include "orthoseries/systems.hpp"

namespace orthoseries {

enum class CheckId {
  Lemma1,
  Eq12,
  Thm1,
  Eq15,
  Eq20,
  Eq24,
  OrliczChain,
  ExhaustivePerm,
  RieszRatio,
  Oracle,
};

std::string to_string(CheckId id);
CheckId check_id_from_string(const std::string& name);
const std::vector<CheckId>& all_checks();

inline constexpr int kConfigSchemaVersion = 1;
inline constexpr int kReportSchemaVersion = 1;
inline constexpr double kDefaultSlack = 1e-12;
inline constexpr double kOracleTolerance = 1e-13;
inline constexpr double kParsevalTolerance = 1e-10;
/// Materialization budget of the oracle majorant: N * total_dim entries.
inline constexpr double kOracleBudget = 1e7;
inline constexpr std::size_t kMaxExhaustive = 8;
/// A Riesz mix whose Gram has a smaller lowest eigenvalue counts as singular.
inline constexpr double kRieszSingular = 1e-6;

/// A verification run. Trial t uses systems[t % systems.size()] with sub-seed
/// derive_seed(seed, t); RandomQR and VaryingDim systems are reseeded per trial
/// from derive_seed(sub_seed, 1).
struct TrialConfig {
  std::vector<SystemSpec> systems;
  bool vary_n = false;                       // draw N uniformly in [1, n_functions] per trial
  std::optional<SequenceSpec> coefficients;  // default: seeded N(0,1) scaled by 1/n
  std::optional<WeightSpec> weight;          // default: LogPower gamma drawn per trial
  std::size_t n_trials = 1;
  std::uint64_t seed = 0;
  std::set<CheckId> checks;
  std::map<CheckId, double> tolerances;      // relative slack, default kDefaultSlack
  std::size_t eq24_shuffles = 20;
  std::size_t exhaustive_n = 6;              // sub-system size for ExhaustivePerm (<= 8)
  std::uint64_t orlicz_truncation = 65536;
  double riesz_condition = 4.0;              // condition number of the Riesz mix

  double slack(CheckId id) const;
  void validate() const;
};

struct Reproducer {
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  SystemSpec system;
  std::size_t n = 0;
  nlohmann::json detail;
};

struct CheckResult {
  CheckId id = CheckId::Lemma1;
  bool passed = true;
  std::size_t evaluations = 0;
  std::size_t skipped = 0;
  std::size_t failures = 0;
  double worst_ratio = 0.0;
  std::optional<Reproducer> worst;
  std::optional<Reproducer> first_failure;
  nlohmann::json notes = nlohmann::json::object();
};

struct VerifyReport {
  std::uint64_t seed = 0;
  std::size_t n_trials = 0;
  std::map<CheckId, CheckResult> checks;
  double wall_seconds = 0.0;

  bool passed() const;
};

/// Materializes every prefix element and takes per-atom maxima directly.
template <typename T>
MajorantProfile oracle_majorant(const OrthonormalSystem<T>& system, std::span<const T> a, std::size_t n,
                                const FiberedSpace& space);

/// The (2 + log2 N) maximal bound under every permutation of the first N <= 8 terms.
template <typename T>
CheckResult exhaustive_permutation_check(const OrthonormalSystem<T>& system, std::span<const T> a,
                                         std::size_t n, const FiberedSpace& space,
                                         double slack = kDefaultSlack);

/// Runs every requested check over cfg.n_trials trials on `threads` workers
/// (0 = hardware concurrency). The report does not depend on `threads`.
VerifyReport run_suite(const TrialConfig& cfg, unsigned threads = 0);

VerifyReport check_lemma1(TrialConfig cfg, unsigned threads = 0);
VerifyReport check_theorem1(TrialConfig cfg, unsigned threads = 0);
VerifyReport check_eq24(TrialConfig cfg, unsigned threads = 0);
VerifyReport check_riesz_ratio(TrialConfig cfg, unsigned threads = 0);

/// 4 + 2 log2(nu_k (nu_k - 1)) <= 8 log2 nu_k for k = 0..5 (nu_5 = 2^32).
struct BlockArithmeticRow {
  std::size_t k;
  double lhs;
  double rhs;
};
std::vector<BlockArithmeticRow> block_arithmetic_rows();

TrialConfig config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const TrialConfig& cfg);
/// Report JSON. Timing lives under "timing" only.
nlohmann::json to_json(const VerifyReport& report);
nlohmann::json to_json(const CheckResult& result);

/// Ratio lhs / rhs with 0/0 = 0 and x/0 = inf.
double bound_ratio(double lhs, double rhs);

}  // namespace orthoseries
