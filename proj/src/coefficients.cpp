#include "orthoseries/coefficients.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

#include "orthoseries/summation.hpp"

namespace orthoseries {

namespace {

double log2sq(double x) {
  const double l = std::log2(x);
  return l * l;
}

bool checkpoint(std::uint64_t n, std::uint64_t truncation) {
  return n <= kDenseCheckpoints || std::has_single_bit(n) || n == truncation;
}

// Accumulates a nonnegative series and records checkpoints.
class PartialSums {
 public:
  PartialSums(ConditionId id, std::uint64_t truncation) {
    report_.condition = id;
    report_.truncation = truncation;
  }

  void add(std::uint64_t n, double term) {
    sum_ += term;
    if (checkpoint(n, report_.truncation)) {
      report_.indices.push_back(n);
      report_.partial_sums.push_back(sum_.value());
    }
  }

  ConditionReport finish(Classification c) {
    report_.total = sum_.value();
    report_.classification = c;
    return std::move(report_);
  }

 private:
  ConditionReport report_;
  CompensatedSum sum_;
};

void check_truncation(std::uint64_t truncation, std::uint64_t minimum, const char* op) {
  if (truncation < minimum) {
    throw StructuralError(std::string(op) + " needs truncation >= " + std::to_string(minimum));
  }
  if (truncation > kMaxTruncation) {
    throw StructuralError(std::string(op) + ": truncation is limited to 2^32");
  }
}

// gamma <= 0 gives a constant weight after clamping.
double effective_gamma(const LogPower& w) { return std::max(0.0, w.gamma); }

const PowerLog* as_power_log(const SequenceSpec& a) { return std::get_if<PowerLog>(&a.form()); }
const LogPower* as_log_power(const WeightSpec& w) { return std::get_if<LogPower>(&w.form()); }

bool finite_support(const SequenceSpec& a) {
  const auto* e = std::get_if<ExplicitSequence>(&a.form());
  return (e != nullptr && e->zero_tail) || (as_power_log(a) != nullptr && as_power_log(a)->scale == 0.0);
}

}  // namespace

std::string to_string(ConditionId id) {
  switch (id) {
    case ConditionId::MR3: return "MR3";
    case ConditionId::Tandori7: return "Tandori7";
    case ConditionId::Orlicz8: return "Orlicz8";
    case ConditionId::Orlicz9: return "Orlicz9";
    case ConditionId::Condensed2n: return "Condensed2n";
    case ConditionId::CondensedNu: return "CondensedNu";
  }
  return "?";
}

std::string to_string(Classification c) {
  switch (c) {
    case Classification::Converges: return "Converges";
    case Classification::Diverges: return "Diverges";
    case Classification::UnknownFromTruncation: return "UnknownFromTruncation";
  }
  return "?";
}

SequenceSpec::SequenceSpec(Form form) : form_(std::move(form)) {
  if (const auto* e = std::get_if<ExplicitSequence>(&form_)) {
    if (e->values.empty()) throw StructuralError("explicit sequence must be nonempty");
    for (std::size_t i = 0; i < e->values.size(); ++i) {
      if (!std::isfinite(e->values[i].real()) || !std::isfinite(e->values[i].imag())) {
        throw StructuralError("explicit sequence entry " + std::to_string(i + 1) + " is not finite");
      }
    }
  } else {
    const auto& p = std::get<PowerLog>(form_);
    if (!(p.scale >= 0.0) || !std::isfinite(p.alpha) || !std::isfinite(p.beta)) {
      throw StructuralError("PowerLog needs scale >= 0 and finite exponents");
    }
  }
}

SequenceSpec SequenceSpec::explicit_values(std::vector<Complex> values, bool zero_tail) {
  return SequenceSpec(ExplicitSequence{std::move(values), zero_tail});
}

SequenceSpec SequenceSpec::explicit_real(const std::vector<double>& values, bool zero_tail) {
  return explicit_values(std::vector<Complex>(values.begin(), values.end()), zero_tail);
}

SequenceSpec SequenceSpec::power_log(double scale, double alpha, double beta) {
  return SequenceSpec(PowerLog{scale, alpha, beta});
}

Complex SequenceSpec::value(std::uint64_t n) const {
  if (n == 0) throw StructuralError("sequences are indexed from 1");
  if (const auto* e = std::get_if<ExplicitSequence>(&form_)) {
    return n <= e->values.size() ? e->values[n - 1] : Complex{};
  }
  const auto& p = std::get<PowerLog>(form_);
  const double x = static_cast<double>(n);
  return p.scale * std::pow(x, -p.alpha) * std::pow(std::log2(x + 1.0), -p.beta);
}

double SequenceSpec::magnitude(std::uint64_t n) const { return std::abs(value(n)); }

std::optional<std::size_t> SequenceSpec::length() const {
  if (const auto* e = std::get_if<ExplicitSequence>(&form_)) return e->values.size();
  return std::nullopt;
}

WeightSpec::WeightSpec(Form form) : form_(std::move(form)) {
  if (const auto* values = std::get_if<std::vector<double>>(&form_)) {
    if (values->empty()) throw StructuralError("explicit weight list must be nonempty");
    for (std::size_t i = 0; i < values->size(); ++i) {
      if (!((*values)[i] > 0.0) || !std::isfinite((*values)[i])) {
        throw StructuralError("weight omega_" + std::to_string(i + 1) + " must be positive");
      }
      if (i > 0 && (*values)[i] < (*values)[i - 1]) {
        throw StructuralError("weights must be nondecreasing; omega_" + std::to_string(i + 1) +
                              " < omega_" + std::to_string(i));
      }
    }
  } else {
    const auto& w = std::get<LogPower>(form_);
    if (!std::isfinite(w.gamma) || !(w.shift > -1.0)) {
      throw StructuralError("LogPower needs finite gamma and shift > -1");
    }
  }
}

WeightSpec WeightSpec::log_power(double gamma, double shift) { return WeightSpec(LogPower{gamma, shift}); }

WeightSpec WeightSpec::explicit_values(std::vector<double> values) { return WeightSpec(std::move(values)); }

namespace {

double log_power_raw(const LogPower& w, double log2_index) {
  return std::pow(std::max(1.0, log2_index), w.gamma);
}

double log_power_at_log2(const LogPower& w, double log2_index) {
  const double first = log_power_raw(w, std::log2(1.0 + w.shift));
  return std::max(first, log_power_raw(w, log2_index));
}

}  // namespace

double WeightSpec::at(std::uint64_t n) const {
  if (n == 0) throw StructuralError("weights are indexed from 1");
  if (const auto* values = std::get_if<std::vector<double>>(&form_)) {
    if (n > values->size()) {
      throw StructuralError("explicit weight list of length " + std::to_string(values->size()) +
                            " has no omega_" + std::to_string(n));
    }
    return (*values)[n - 1];
  }
  const auto& w = std::get<LogPower>(form_);
  return log_power_at_log2(w, std::log2(static_cast<double>(n) + w.shift));
}

double WeightSpec::at_power_of_two(double exponent) const {
  if (const auto* values = std::get_if<std::vector<double>>(&form_)) {
    if (exponent >= 63.0 || std::exp2(exponent) > static_cast<double>(values->size())) {
      throw StructuralError("explicit weight list of length " + std::to_string(values->size()) +
                            " is too short for index 2^" + std::to_string(exponent));
    }
    return at(static_cast<std::uint64_t>(std::exp2(exponent)));
  }
  const auto& w = std::get<LogPower>(form_);
  // log2(2^e + shift) = e + log2(1 + shift 2^-e)
  const double log2_index = exponent + std::log1p(w.shift * std::exp2(-exponent)) / std::numbers::ln2;
  return log_power_at_log2(w, log2_index);
}

std::optional<std::size_t> WeightSpec::length() const {
  if (const auto* values = std::get_if<std::vector<double>>(&form_)) return values->size();
  return std::nullopt;
}

std::optional<std::size_t> TandoriBlocks::block_of(std::uint64_t n) const {
  for (const auto& b : blocks) {
    if (n >= b.first && n <= b.last) return b.k;
  }
  return std::nullopt;
}

bool holds_with_slack(double lhs, double rhs, double slack) {
  return lhs <= rhs * (1.0 + slack) + 1e-300;
}

Classification bertrand(double p, double q) {
  if (p > 1.0) return Classification::Converges;
  if (p < 1.0) return Classification::Diverges;
  return q > 1.0 ? Classification::Converges : Classification::Diverges;
}

ConditionReport weyl_L(const SequenceSpec& a, std::uint64_t truncation) {
  check_truncation(truncation, 1, "weyl_L");
  PartialSums sums(ConditionId::MR3, truncation);
  for (std::uint64_t n = 1; n <= truncation; ++n) {
    const double m = a.magnitude(n);
    sums.add(n, m * m * log2sq(static_cast<double>(n) + 1.0));
  }
  Classification c = Classification::UnknownFromTruncation;
  if (finite_support(a)) {
    c = Classification::Converges;
  } else if (const auto* p = as_power_log(a)) {
    // |a_n|^2 log^2(n+1) ~ n^(-2 alpha) (log n)^(2 - 2 beta)
    c = bertrand(2.0 * p->alpha, 2.0 * p->beta - 2.0);
  }
  return sums.finish(c);
}

TandoriBlocks tandori_blocks(std::uint64_t truncation) {
  if (truncation < 3) throw StructuralError("no Tandori block intersects support");
  check_truncation(truncation, 3, "tandori_blocks");
  TandoriBlocks out;
  out.truncation = truncation;
  std::uint64_t nu = 2;
  while (nu <= truncation) {
    out.nu.push_back(nu);
    if (nu > (std::uint64_t{1} << 32)) break;
    if (nu == (std::uint64_t{1} << 32)) {
      out.capped = true;
      break;
    }
    nu = nu * nu;
  }
  for (std::size_t k = 0; k < out.nu.size(); ++k) {
    const std::uint64_t lo = out.nu[k];
    if (lo >= truncation) break;
    const std::uint64_t hi = lo * lo;  // lo <= 2^16 here
    out.blocks.push_back({k, lo + 1, std::min(hi, truncation), hi > truncation});
    out.k_max = k;
  }
  return out;
}

std::vector<double> tandori_block_sums(const SequenceSpec& a, const TandoriBlocks& blocks) {
  std::vector<double> sums;
  sums.reserve(blocks.blocks.size());
  for (const auto& b : blocks.blocks) {
    CompensatedSum s;
    for (std::uint64_t n = b.first; n <= b.last; ++n) {
      const double m = a.magnitude(n);
      s += m * m * log2sq(static_cast<double>(n));
    }
    sums.push_back(s.value());
  }
  return sums;
}

namespace {

// Block condition for a power-log sequence. Converges when the weighted sum
// converges for some LogPower weight with gamma > 0; diverges when sqrt(A_k)
// stays bounded below.
Classification classify_tandori(const PowerLog& p) {
  if (p.scale == 0.0) return Classification::Converges;
  const double two_alpha = 2.0 * p.alpha;
  if (two_alpha > 1.0) return Classification::Converges;
  if (two_alpha < 1.0) return Classification::Diverges;
  // alpha = 1/2: A_k ~ 2^(k (3 - 2 beta)) up to constants.
  return p.beta > 1.5 ? Classification::Converges : Classification::Diverges;
}

}  // namespace

ConditionReport tandori_sum(const SequenceSpec& a, std::uint64_t truncation) {
  const TandoriBlocks blocks = tandori_blocks(truncation);
  const auto sums = tandori_block_sums(a, blocks);
  ConditionReport report;
  report.condition = ConditionId::Tandori7;
  report.truncation = truncation;
  CompensatedSum total;
  for (std::size_t i = 0; i < sums.size(); ++i) {
    total += std::sqrt(sums[i]);
    report.indices.push_back(blocks.blocks[i].k);
    report.partial_sums.push_back(total.value());
  }
  report.total = total.value();
  if (finite_support(a)) {
    report.classification = Classification::Converges;
  } else if (const auto* p = as_power_log(a)) {
    report.classification = classify_tandori(*p);
  }
  return report;
}

OrliczConditions orlicz_conditions(const SequenceSpec& a, const WeightSpec& w,
                                   std::uint64_t truncation) {
  check_truncation(truncation, 2, "orlicz_conditions");
  if (const auto len = w.length(); len && *len < truncation) {
    throw StructuralError("explicit weight list is shorter than the truncation");
  }
  PartialSums eq8(ConditionId::Orlicz8, truncation);
  PartialSums eq9(ConditionId::Orlicz9, truncation);
  for (std::uint64_t n = 2; n <= truncation; ++n) {
    const double x = static_cast<double>(n);
    const double omega = w.at(n);
    const double m = a.magnitude(n);
    eq8.add(n, m * m * log2sq(x) * omega);
    eq9.add(n, 1.0 / (x * std::log2(x) * omega));
  }
  Classification c8 = Classification::UnknownFromTruncation;
  Classification c9 = Classification::UnknownFromTruncation;
  const auto* lp = as_log_power(w);
  if (lp != nullptr) c9 = bertrand(1.0, 1.0 + effective_gamma(*lp));
  if (finite_support(a)) {
    c8 = Classification::Converges;
  } else if (const auto* p = as_power_log(a); p != nullptr && lp != nullptr) {
    c8 = bertrand(2.0 * p->alpha, 2.0 * p->beta - 2.0 - effective_gamma(*lp));
  }
  return {eq8.finish(c8), eq9.finish(c9)};
}

CondensationChain condensation_chain(const WeightSpec& w, std::uint64_t terms) {
  if (terms < 1) throw StructuralError("condensation_chain needs terms >= 1");
  if (terms > 62 && w.is_explicit()) throw StructuralError("explicit weights cannot reach index 2^63");

  PartialSums direct(ConditionId::Orlicz9, terms);
  for (std::uint64_t n = 2; n <= terms; ++n) {
    const double x = static_cast<double>(n);
    direct.add(n, 1.0 / (x * std::log2(x) * w.at(n)));
  }
  PartialSums dyadic(ConditionId::Condensed2n, terms);
  for (std::uint64_t n = 1; n <= terms; ++n) {
    dyadic.add(n, 1.0 / (static_cast<double>(n) * w.at_power_of_two(static_cast<double>(n))));
  }
  PartialSums iterated(ConditionId::CondensedNu, terms);
  for (std::uint64_t n = 0; n <= terms; ++n) {
    // nu_n = 2^(2^n)
    iterated.add(n, 1.0 / w.at_power_of_two(std::exp2(static_cast<double>(n))));
  }

  Classification c_direct = Classification::UnknownFromTruncation;
  Classification c_dyadic = Classification::UnknownFromTruncation;
  Classification c_iterated = Classification::UnknownFromTruncation;
  if (const auto* lp = as_log_power(w)) {
    const double g = effective_gamma(*lp);
    // 1/(n log n (log n)^g): Bertrand with p = 1, q = 1 + g.
    c_direct = bertrand(1.0, 1.0 + g);
    // 1/(n * n^g): p-series.
    c_dyadic = 1.0 + g > 1.0 ? Classification::Converges : Classification::Diverges;
    // 1/(2^n)^g: geometric with ratio 2^(-g).
    c_iterated = std::exp2(-g) < 1.0 ? Classification::Converges : Classification::Diverges;
  }
  return {direct.finish(c_direct), dyadic.finish(c_dyadic), iterated.finish(c_iterated)};
}

OrliczReduction orlicz_reduction(const SequenceSpec& a, const WeightSpec& w,
                                 std::uint64_t truncation) {
  OrliczReduction out;
  out.truncation = truncation;
  out.conditions = orlicz_conditions(a, w, truncation);
  const TandoriBlocks blocks = tandori_blocks(truncation);
  out.block_sums = tandori_block_sums(a, blocks);

  CompensatedSum root_sum;
  CompensatedSum c;
  CompensatedSum weighted_blocks;
  for (std::size_t i = 0; i < blocks.blocks.size(); ++i) {
    const double omega = w.at(blocks.nu[blocks.blocks[i].k]);
    out.omega_nu.push_back(omega);
    root_sum += std::sqrt(out.block_sums[i]);
    c += 1.0 / omega;
    weighted_blocks += out.block_sums[i] * omega;
  }
  CompensatedSum tail;
  for (std::uint64_t n = 3; n <= truncation; ++n) {
    const double m = a.magnitude(n);
    tail += m * m * log2sq(static_cast<double>(n)) * w.at(n);
  }
  out.c_partial = c.value();
  out.tandori_lhs = root_sum.value() * root_sum.value();
  out.weighted_blocks = weighted_blocks.value();
  out.weighted_tail = tail.value();
  out.cauchy_schwarz_holds =
      holds_with_slack(out.tandori_lhs, out.c_partial * out.weighted_blocks, kReductionSlack);
  out.monotone_step_holds = holds_with_slack(out.weighted_blocks, out.weighted_tail, kReductionSlack);
  out.all_hold = out.cauchy_schwarz_holds && out.monotone_step_holds;

  if (out.conditions.eq8.classification == Classification::Converges &&
      out.conditions.eq9.classification == Classification::Converges) {
    out.classification = Classification::Converges;
  } else {
    out.classification = tandori_sum(a, truncation).classification;
  }
  return out;
}

nlohmann::json to_json(const ConditionReport& report, bool full_partials) {
  nlohmann::json j{{"condition", to_string(report.condition)},
                   {"total", report.total},
                   {"classification", to_string(report.classification)},
                   {"truncation", report.truncation}};
  nlohmann::json partials = nlohmann::json::array();
  for (std::size_t i = 0; i < report.indices.size(); ++i) {
    const std::uint64_t n = report.indices[i];
    if (full_partials || std::has_single_bit(n) || n == report.indices.back() || n == 0 ||
        report.indices.size() <= 64) {
      partials.push_back({n, report.partial_sums[i]});
    }
  }
  j["partial_sums"] = std::move(partials);
  return j;
}

nlohmann::json to_json(const TandoriBlocks& blocks) {
  nlohmann::json list = nlohmann::json::array();
  for (const auto& b : blocks.blocks) {
    list.push_back({{"k", b.k}, {"first", b.first}, {"last", b.last}, {"partial", b.partial}});
  }
  return {{"nu", blocks.nu}, {"blocks", list}, {"k_max", blocks.k_max}, {"capped", blocks.capped},
          {"truncation", blocks.truncation}};
}

nlohmann::json to_json(const OrliczReduction& r, bool full_partials) {
  return {{"block_sums", r.block_sums},
          {"omega_nu", r.omega_nu},
          {"c_partial", r.c_partial},
          {"tandori_lhs", r.tandori_lhs},
          {"c_times_weighted_blocks", r.c_partial * r.weighted_blocks},
          {"c_times_weighted_tail", r.c_partial * r.weighted_tail},
          {"weighted_blocks", r.weighted_blocks},
          {"weighted_tail", r.weighted_tail},
          {"cauchy_schwarz_holds", r.cauchy_schwarz_holds},
          {"monotone_step_holds", r.monotone_step_holds},
          {"all_hold", r.all_hold},
          {"classification", to_string(r.classification)},
          {"eq8", to_json(r.conditions.eq8, full_partials)},
          {"eq9", to_json(r.conditions.eq9, full_partials)},
          {"truncation", r.truncation}};
}

nlohmann::json to_json(const CondensationChain& chain, bool full_partials) {
  return {{"direct", to_json(chain.direct, full_partials)},
          {"dyadic", to_json(chain.dyadic, full_partials)},
          {"iterated", to_json(chain.iterated, full_partials)},
          {"c", chain.iterated.total}};
}

}  // namespace orthoseries
