#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "orthoseries/direct_integral.hpp"

namespace orthoseries {

/// a_n = scale * n^(-alpha) * (log2(n+1))^(-beta), n >= 1.
struct PowerLog {
  double scale = 1.0;
  double alpha = 1.0;
  double beta = 0.0;
};

/// Finite list a_1, a_2, ...; `zero_tail` declares the sequence zero past the list.
/// Without it the list is a truncation of an unknown sequence.
struct ExplicitSequence {
  std::vector<Complex> values;
  bool zero_tail = false;
};

class SequenceSpec {
 public:
  using Form = std::variant<ExplicitSequence, PowerLog>;

  explicit SequenceSpec(Form form);

  static SequenceSpec explicit_values(std::vector<Complex> values, bool zero_tail = false);
  static SequenceSpec explicit_real(const std::vector<double>& values, bool zero_tail = false);
  static SequenceSpec power_log(double scale, double alpha, double beta);

  const Form& form() const noexcept { return form_; }
  bool is_explicit() const noexcept { return std::holds_alternative<ExplicitSequence>(form_); }

  /// |a_n| for n >= 1; zero past an explicit list.
  double magnitude(std::uint64_t n) const;
  /// a_n as a complex number.
  Complex value(std::uint64_t n) const;
  /// Explicit list length, if explicit.
  std::optional<std::size_t> length() const;

 private:
  Form form_;
};

/// omega_n = max(1, log2(n + shift))^gamma, clamped below by omega_1 so the
/// sequence is nondecreasing for every gamma (constant when gamma <= 0).
struct LogPower {
  double gamma = 1.0;
  double shift = 0.0;
};

class WeightSpec {
 public:
  using Form = std::variant<std::vector<double>, LogPower>;

  /// Validates positivity and monotonicity of explicit lists.
  explicit WeightSpec(Form form);

  static WeightSpec log_power(double gamma, double shift = 0.0);
  static WeightSpec explicit_values(std::vector<double> values);
  static WeightSpec constant_one() { return log_power(0.0); }

  const Form& form() const noexcept { return form_; }
  bool is_explicit() const noexcept { return std::holds_alternative<std::vector<double>>(form_); }

  double at(std::uint64_t n) const;
  /// omega at index 2^exponent (analytic for LogPower, no overflow).
  double at_power_of_two(double exponent) const;
  std::optional<std::size_t> length() const;

 private:
  Form form_;
};

enum class ConditionId { MR3, Tandori7, Orlicz8, Orlicz9, Condensed2n, CondensedNu };
enum class Classification { Converges, Diverges, UnknownFromTruncation };

std::string to_string(ConditionId id);
std::string to_string(Classification c);

/// Running partial sums of a nonnegative series.
///
/// `indices[i]` is the summation index at which `partial_sums[i]` was taken.
/// Every index is recorded up to kDenseCheckpoints; past that only powers of two
/// and the final index.
struct ConditionReport {
  ConditionId condition = ConditionId::MR3;
  std::vector<std::uint64_t> indices;
  std::vector<double> partial_sums;
  double total = 0.0;
  Classification classification = Classification::UnknownFromTruncation;
  std::uint64_t truncation = 0;
};

inline constexpr std::uint64_t kDenseCheckpoints = std::uint64_t{1} << 16;
inline constexpr std::uint64_t kMaxTruncation = std::uint64_t{1} << 32;

/// nu_k = 2^(2^k) and blocks M_k = {nu_k + 1, ..., nu_{k+1}} cut at the truncation.
struct TandoriBlocks {
  struct Block {
    std::size_t k = 0;
    std::uint64_t first = 0;  // inclusive, 1-based
    std::uint64_t last = 0;   // inclusive, 1-based
    bool partial = false;     // cut by the truncation
  };
  std::vector<std::uint64_t> nu;
  std::vector<Block> blocks;
  std::size_t k_max = 0;
  bool capped = false;  // nu_{k+1} of the last stored threshold does not fit in 64 bits
  std::uint64_t truncation = 0;

  /// Block index containing 1-based index n, if any.
  std::optional<std::size_t> block_of(std::uint64_t n) const;
};

/// Bertrand rule for sum n^(-p) (log n)^(-q).
Classification bertrand(double p, double q);

/// L = sum_{n>=1} |a_n|^2 log2^2(n+1).
ConditionReport weyl_L(const SequenceSpec& a, std::uint64_t truncation);

TandoriBlocks tandori_blocks(std::uint64_t truncation);

/// A_k = sum_{n in M_k} |a_n|^2 log2^2 n for every block within the truncation.
std::vector<double> tandori_block_sums(const SequenceSpec& a, const TandoriBlocks& blocks);

/// Partial sums over k of sqrt(A_k); a_1 and a_2 never enter.
ConditionReport tandori_sum(const SequenceSpec& a, std::uint64_t truncation);

struct OrliczConditions {
  ConditionReport eq8;
  ConditionReport eq9;
};

/// sum_{n>=2} |a_n|^2 log2^2(n) omega_n and sum_{n>=2} 1/(n log2(n) omega_n).
OrliczConditions orlicz_conditions(const SequenceSpec& a, const WeightSpec& w,
                                   std::uint64_t truncation);

struct CondensationChain {
  ConditionReport direct;     // sum_{n=2}^{T} 1/(n log2(n) omega_n)
  ConditionReport dyadic;     // sum_{n=1}^{T} 1/(n omega_{2^n})
  ConditionReport iterated;   // sum_{n=0}^{T} 1/omega_{nu_n}; its total is c
};

/// The three series of the condensation equivalence, each summed up to index `terms` inclusive.
CondensationChain condensation_chain(const WeightSpec& w, std::uint64_t terms);

struct OrliczReduction {
  std::vector<double> block_sums;     // A_k
  std::vector<double> omega_nu;       // omega_{nu_k}
  double c_partial = 0.0;             // sum_k 1/omega_{nu_k} over the same blocks
  double tandori_lhs = 0.0;           // (sum_k sqrt(A_k))^2
  double weighted_blocks = 0.0;       // sum_k A_k omega_{nu_k}
  double weighted_tail = 0.0;         // sum_{n=3}^{T} |a_n|^2 log2^2(n) omega_n
  bool cauchy_schwarz_holds = false;  // lhs <= c_partial * weighted_blocks
  bool monotone_step_holds = false;   // weighted_blocks <= weighted_tail
  bool all_hold = false;
  Classification classification = Classification::UnknownFromTruncation;
  OrliczConditions conditions;
  std::uint64_t truncation = 0;
};

/// Relative slack used for the reduction inequalities.
inline constexpr double kReductionSlack = 1e-12;

OrliczReduction orlicz_reduction(const SequenceSpec& a, const WeightSpec& w,
                                 std::uint64_t truncation);

/// lhs <= rhs * (1 + slack) + 1e-300.
bool holds_with_slack(double lhs, double rhs, double slack);

nlohmann::json to_json(const ConditionReport& report, bool full_partials = false);
nlohmann::json to_json(const TandoriBlocks& blocks);
nlohmann::json to_json(const OrliczReduction& reduction, bool full_partials = false);
nlohmann::json to_json(const CondensationChain& chain, bool full_partials = false);

}  // namespace orthoseries
