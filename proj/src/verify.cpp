#include "orthoseries/verify.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numeric>
#include <thread>

#include "orthoseries/rng.hpp"
#include "orthoseries/summation.hpp"

namespace orthoseries {

using nlohmann::json;

namespace {

struct CheckName {
  CheckId id;
  const char* name;
};

constexpr CheckName kNames[] = {
    {CheckId::Lemma1, "lemma1"},
    {CheckId::Eq12, "eq12"},
    {CheckId::Thm1, "thm1"},
    {CheckId::Eq15, "eq15"},
    {CheckId::Eq20, "eq20"},
    {CheckId::Eq24, "eq24"},
    {CheckId::OrliczChain, "orlicz_chain"},
    {CheckId::ExhaustivePerm, "exhaustive_perm"},
    {CheckId::RieszRatio, "riesz_ratio"},
    {CheckId::Oracle, "oracle"},
};

}  // namespace

std::string to_string(CheckId id) {
  for (const auto& n : kNames) {
    if (n.id == id) return n.name;
  }
  return "?";
}

CheckId check_id_from_string(const std::string& name) {
  for (const auto& n : kNames) {
    if (name == n.name) return n.id;
  }
  throw StructuralError("unknown check '" + name + "'");
}

const std::vector<CheckId>& all_checks() {
  static const std::vector<CheckId> ids = [] {
    std::vector<CheckId> v;
    for (const auto& n : kNames) v.push_back(n.id);
    return v;
  }();
  return ids;
}

double bound_ratio(double lhs, double rhs) {
  if (std::isnan(lhs) || std::isnan(rhs)) return std::numeric_limits<double>::quiet_NaN();
  if (rhs == 0.0) return lhs == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return lhs / rhs;
}

double TrialConfig::slack(CheckId id) const {
  auto it = tolerances.find(id);
  return it == tolerances.end() ? kDefaultSlack : it->second;
}

void TrialConfig::validate() const {
  if (!checks.empty() && systems.empty()) throw StructuralError("config lists no systems");
  if (exhaustive_n < 1 || exhaustive_n > kMaxExhaustive) {
    throw StructuralError("exhaustive_n must lie in [1, " + std::to_string(kMaxExhaustive) + "]");
  }
  if (orlicz_truncation < 3 || orlicz_truncation > kMaxTruncation) {
    throw StructuralError("orlicz_truncation must lie in [3, 2^32]");
  }
  if (!(riesz_condition >= 1.0) || !std::isfinite(riesz_condition)) {
    throw StructuralError("riesz_condition must be a finite number >= 1");
  }
  for (const auto& [id, tol] : tolerances) {
    // Negative slack is allowed: it forces failures when exercising the reporting path.
    if (!std::isfinite(tol) || tol <= -1.0) {
      throw StructuralError("tolerance for " + to_string(id) + " must be finite and > -1");
    }
  }
  for (const auto& s : systems) {
    if (s.n_functions == 0) throw StructuralError("a system needs at least one function");
  }
}

bool VerifyReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& kv) { return kv.second.passed; });
}

// ---------------------------------------------------------------------------
// Oracle

template <typename T>
MajorantProfile oracle_majorant(const OrthonormalSystem<T>& system, std::span<const T> a, std::size_t n,
                                const FiberedSpace& space) {
  if (n == 0 || n > system.size() || a.size() < n) {
    throw StructuralError("oracle majorant needs 1 <= N <= system size and N coefficients");
  }
  space.check_length(system.rows(), "system element");
  const double work = static_cast<double>(n) * static_cast<double>(space.total_dim());
  if (work > kOracleBudget) {
    throw StructuralError("oracle majorant budget exceeded: N * total_dim = " + std::to_string(work));
  }
  // Column j of `prefixes` is S_(j+1) = Phi * (a_1, ..., a_(j+1), 0, ...).
  Matrix<T> coeff = Matrix<T>::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t m = 0; m <= j; ++m) {
      coeff(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(j)) = a[m];
    }
  }
  const Matrix<T> prefixes = system.matrix().leftCols(static_cast<Eigen::Index>(n)) * coeff;

  MajorantProfile out;
  out.values.assign(space.atoms(), 0.0);
  out.argmax_prefix.assign(space.atoms(), 1);
  for (std::size_t i = 0; i < space.atoms(); ++i) {
    const auto off = static_cast<Eigen::Index>(space.offset(i));
    const auto dim = static_cast<Eigen::Index>(space.dim(i));
    double best = -1.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double v = prefixes.col(static_cast<Eigen::Index>(j)).segment(off, dim).norm();
      if (v > best) {
        best = v;
        out.argmax_prefix[i] = j + 1;
      }
    }
    out.values[i] = best;
  }
  out.l2_norm = profile_l2(out.values, space.measure());
  return out;
}

namespace {

double coefficient_l2(std::span<const double> a) {
  CompensatedSum s;
  for (double x : a) s += x * x;
  return std::sqrt(s.value());
}

template <typename T>
double coefficient_l2(std::span<const T> a) {
  CompensatedSum s;
  for (const T& x : a) s += scalar::abs2(x);
  return std::sqrt(s.value());
}

double lemma1_factor(std::size_t n) { return 2.0 + std::log2(static_cast<double>(n)); }

/// One evaluation of one inequality in one trial.
struct Observation {
  double ratio = 0.0;
  bool passed = true;
  json detail;
};

/// Everything one trial produced, keyed by check.
struct TrialOutcome {
  SystemSpec system;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::map<CheckId, std::vector<Observation>> observations;
  std::map<CheckId, std::size_t> skipped;
  std::exception_ptr error;
};

Observation bound_observation(double lhs, double rhs, double slack, json detail = json::object()) {
  Observation o;
  o.ratio = bound_ratio(lhs, rhs);
  o.passed = !std::isnan(o.ratio) && holds_with_slack(lhs, rhs, slack);
  detail["lhs"] = lhs;
  detail["rhs"] = rhs;
  o.detail = std::move(detail);
  return o;
}

template <typename T>
T from_complex(const Complex& z) {
  if constexpr (is_complex_v<T>) {
    return z;
  } else {
    return z.real();
  }
}

template <typename T>
std::vector<T> trial_coefficients(const TrialConfig& cfg, std::size_t n, Rng& rng) {
  std::vector<T> a(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (cfg.coefficients) {
      a[i] = from_complex<T>(cfg.coefficients->value(i + 1));
    } else {
      a[i] = rng.gaussian<T>() / static_cast<double>(i + 1);
    }
  }
  return a;
}

template <typename T>
void run_exhaustive(const OrthonormalSystem<T>& system, std::span<const T> a, std::size_t m,
                    const FiberedSpace& space, double slack, std::vector<Observation>& sink) {
  const auto sub = system.truncated(m);
  const std::span<const T> head = a.first(m);
  const double rhs = lemma1_factor(m) * coefficient_l2(head);
  std::vector<std::size_t> sigma(m);
  std::iota(sigma.begin(), sigma.end(), std::size_t{0});
  // One observation per sub-system: the worst ordering, plus the failure count.
  Observation worst;
  worst.ratio = -1.0;
  std::size_t orderings = 0;
  std::size_t failures = 0;
  do {
    const auto plan = PermutationPlan::explicit_plan(sigma);
    const auto profile = permuted_majorant(sub, head, plan, m, space);
    auto o = bound_observation(profile.l2_norm, rhs, slack);
    ++orderings;
    if (!o.passed) ++failures;
    if (o.ratio > worst.ratio || std::isnan(o.ratio)) {
      json sigma1 = json::array();
      for (auto s : sigma) sigma1.push_back(s + 1);
      o.detail["sigma"] = sigma1;
      worst = std::move(o);
    }
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  worst.passed = failures == 0;
  worst.detail["orderings"] = orderings;
  worst.detail["failing_orderings"] = failures;
  worst.detail["m"] = m;
  sink.push_back(std::move(worst));
}

/// Phi' = Phi U diag(s) V^H with singular values s spread geometrically over [1, kappa].
template <typename T>
OrthonormalSystem<T> riesz_mix(const OrthonormalSystem<T>& system, std::size_t n, double kappa,
                               std::uint64_t seed) {
  const auto base = system.truncated(n);
  if (kappa == 1.0) return base;
  const Vector<double> ones = Vector<double>::Ones(static_cast<Eigen::Index>(n));
  const Matrix<T> u = weighted_random_orthonormal<T>(n, n, ones, derive_seed(seed, 0));
  const Matrix<T> v = weighted_random_orthonormal<T>(n, n, ones, derive_seed(seed, 1));
  Vector<double> s(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const double t = n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
    s(static_cast<Eigen::Index>(i)) = std::pow(kappa, t);
  }
  const Matrix<T> mix = u * s.cast<T>().asDiagonal() * v.adjoint();
  return OrthonormalSystem<T>(base.matrix() * mix);
}

template <typename T>
void run_trial(const TrialConfig& cfg, const SystemModel<T>& model, std::span<const T> a,
               std::size_t n, Rng& rng, std::uint64_t sub_seed, TrialOutcome& out) {
  const auto& space = model.space;
  const auto& system = model.system;
  const auto wants = [&](CheckId id) { return cfg.checks.count(id) > 0; };
  auto& obs = out.observations;

  std::optional<MajorantProfile> profile;
  if (wants(CheckId::Lemma1) || wants(CheckId::Oracle)) profile = majorant(system, a, n, space);

  if (wants(CheckId::Lemma1)) {
    obs[CheckId::Lemma1].push_back(bound_observation(
        profile->l2_norm, lemma1_factor(n) * coefficient_l2(a.first(n)), cfg.slack(CheckId::Lemma1)));
  }

  if (wants(CheckId::Oracle)) {
    const double work = static_cast<double>(n) * static_cast<double>(space.total_dim());
    if (work > kOracleBudget) {
      ++out.skipped[CheckId::Oracle];
    } else {
      const auto reference = oracle_majorant(system, a, n, space);
      double worst = 0.0;
      for (std::size_t i = 0; i < space.atoms(); ++i) {
        const double scale = std::max(1.0, std::abs(reference.values[i]));
        worst = std::max(worst, std::abs(reference.values[i] - profile->values[i]) / scale);
      }
      worst = std::max(worst, std::abs(reference.l2_norm - profile->l2_norm) /
                                  std::max(1.0, reference.l2_norm));
      Observation o;
      o.ratio = worst / kOracleTolerance;
      o.passed = worst <= kOracleTolerance;
      o.detail = {{"max_deviation", worst}, {"oracle_l2", reference.l2_norm},
                  {"streaming_l2", profile->l2_norm}};
      obs[CheckId::Oracle].push_back(std::move(o));
    }
  }

  if (wants(CheckId::Eq12)) {
    const unsigned r = static_cast<unsigned>(rng.below(11));
    const std::size_t j = 1 + static_cast<std::size_t>(rng.below(std::uint64_t{1} << r));
    const std::size_t dim = 1 + static_cast<std::size_t>(rng.below(8));
    std::vector<T> vectors(j * dim);
    for (auto& v : vectors) v = rng.gaussian<T>();
    const auto pair = dyadic_pointwise_bound<T>(vectors, dim, r);
    obs[CheckId::Eq12].push_back(bound_observation(pair.lhs, pair.rhs, cfg.slack(CheckId::Eq12),
                                                   {{"r", r}, {"j", j}, {"dim", dim}}));
  }

  if (wants(CheckId::Thm1) || wants(CheckId::Eq15) || wants(CheckId::Eq20)) {
    const std::size_t padded_n = dyadic_complete_size(n);
    const auto padded = system.truncated(n).padded(padded_n);
    std::vector<T> padded_a(padded_n, T{});
    std::copy(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(n), padded_a.begin());
    const auto d = chaining_diagnostics<T>(padded, padded_a, padded_n, space);
    const json where = {{"padded_n", padded_n}};
    if (wants(CheckId::Thm1)) {
      const double slack = cfg.slack(CheckId::Thm1);
      auto tagged = [&](const BoundPair& p, const char* which) {
        json detail = where;
        detail["inequality"] = which;
        return bound_observation(p.lhs, p.rhs, slack, detail);
      };
      auto& sink = obs[CheckId::Thm1];
      sink.push_back(tagged(d.bound_4, "majorant_vs_4_sqrt_L"));
      sink.push_back(tagged(d.triangle, "triangle"));
      sink.push_back(tagged(d.bound_19, "dyadic_vs_chi_sum"));
      sink.push_back(tagged(d.s_circ_square, "circ_sup_vs_sum"));
      for (std::size_t k = 0; k < d.chi_norms.size(); ++k) {
        const double lhs = d.chi_norms[k] * d.chi_norms[k];
        const double energy = d.chi_block_energy[k];
        const double dev = std::abs(lhs - energy);
        Observation o;
        const double allowed = kParsevalTolerance * energy;
        o.ratio = allowed > 0.0 ? dev / allowed : (dev == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
        o.passed = dev <= allowed;
        o.detail = where;
        o.detail["inequality"] = "parseval";
        o.detail["k"] = k;
        o.detail["chi_norm_sq"] = lhs;
        o.detail["energy"] = energy;
        sink.push_back(std::move(o));
      }
    }
    if (wants(CheckId::Eq15)) {
      obs[CheckId::Eq15].push_back(
          bound_observation(d.bound_15.lhs, d.bound_15.rhs, cfg.slack(CheckId::Eq15), where));
    }
    if (wants(CheckId::Eq20)) {
      obs[CheckId::Eq20].push_back(
          bound_observation(d.bound_20.lhs, d.bound_20.rhs, cfg.slack(CheckId::Eq20), where));
    }
  }

  if (wants(CheckId::Eq24)) {
    if (n < 5) {
      ++out.skipped[CheckId::Eq24];
    } else {
      std::vector<PermutationPlan> plans;
      plans.push_back(PermutationPlan::identity(n));
      for (std::size_t s = 0; s < cfg.eq24_shuffles; ++s) {
        plans.push_back(PermutationPlan::seeded_shuffle(n, derive_seed(sub_seed, 100 + s)));
      }
      plans.push_back(adversarial_permutation(system, a, n, AdversarialStrategy::GreedyMaxPrefix, space));
      plans.push_back(PermutationPlan::block_reversal(n));
      const double slack = cfg.slack(CheckId::Eq24);
      auto& sink = obs[CheckId::Eq24];
      for (const auto& plan : plans) {
        const bool heuristic = plan.provenance == PlanProvenance::GreedyAdversarial ||
                               plan.provenance == PlanProvenance::BlockReversal;
        for (const auto& e : tandori_deltas(system, a, plan, n, space)) {
          json detail = {{"plan", to_string(plan.provenance)},
                         {"plan_seed", plan.seed},
                         {"k", e.k},
                         {"mode", to_string(e.mode)},
                         {"heuristic_lower_bound", heuristic}};
          auto o = bound_observation(e.delta_l2, e.rhs_24, slack, detail);
          // The intermediate steps must hold too.
          const bool two_sided = e.two_sided_within_bound;
          const bool maximal = holds_with_slack(e.delta_l2, e.rhs_maximal, slack);
          o.detail["two_sided_within_bound"] = two_sided;
          o.detail["within_maximal_bound"] = maximal;
          o.detail["rhs_maximal"] = e.rhs_maximal;
          o.passed = o.passed && two_sided && maximal;
          sink.push_back(std::move(o));
        }
      }
    }
  }

  if (wants(CheckId::ExhaustivePerm)) {
    const std::size_t m = std::min(n, cfg.exhaustive_n);
    run_exhaustive(system, a, m, space, cfg.slack(CheckId::ExhaustivePerm), obs[CheckId::ExhaustivePerm]);
  }

  if (wants(CheckId::RieszRatio)) {
    const auto mixed = riesz_mix(system, n, cfg.riesz_condition, derive_seed(sub_seed, 2));
    const auto gram = gram_matrix(mixed, space);
    const auto p = majorant(mixed, a, n, space);
    const double denom = std::log2(static_cast<double>(n) + 1.0) * coefficient_l2(a.first(n));
    Observation o;
    o.ratio = bound_ratio(p.l2_norm, denom);
    o.passed = std::isfinite(o.ratio) && gram.riesz_lower > kRieszSingular;
    o.detail = {{"majorant_l2", p.l2_norm},
                {"denominator", denom},
                {"riesz_lower", gram.riesz_lower},
                {"riesz_upper", gram.riesz_upper},
                {"condition", cfg.riesz_condition}};
    obs[CheckId::RieszRatio].push_back(std::move(o));
  }
}

void run_orlicz_trial(const TrialConfig& cfg, Rng& rng, TrialOutcome& out) {
  const SequenceSpec a = cfg.coefficients
                             ? *cfg.coefficients
                             : SequenceSpec::power_log(1.0, 0.5 + rng.uniform(), 3.0 * rng.uniform());
  static constexpr double kGammas[] = {-0.5, 0.0, 0.25, 0.5, 1.0, 2.0};
  const WeightSpec w = cfg.weight ? *cfg.weight : WeightSpec::log_power(kGammas[rng.below(6)]);
  const auto red = orlicz_reduction(a, w, cfg.orlicz_truncation);
  const double slack = cfg.slack(CheckId::OrliczChain);
  auto& sink = out.observations[CheckId::OrliczChain];

  json base = json::object();
  if (const auto* pl = std::get_if<PowerLog>(&a.form())) {
    base["coefficients"] = {{"scale", pl->scale}, {"alpha", pl->alpha}, {"beta", pl->beta}};
  }
  if (const auto* lp = std::get_if<LogPower>(&w.form())) {
    base["weight"] = {{"gamma", lp->gamma}, {"shift", lp->shift}};
  }
  json cs = base;
  cs["inequality"] = "cauchy_schwarz";
  sink.push_back(bound_observation(red.tandori_lhs, red.c_partial * red.weighted_blocks, slack, cs));
  json mono = base;
  mono["inequality"] = "monotone_step";
  sink.push_back(bound_observation(red.weighted_blocks, red.weighted_tail, slack, mono));

  // Convergent weighted sum and reciprocal weight series force a convergent block series.
  const auto tandori = tandori_sum(a, cfg.orlicz_truncation);
  Observation implication;
  const bool premise = red.conditions.eq8.classification == Classification::Converges &&
                       red.conditions.eq9.classification == Classification::Converges;
  implication.passed = !premise || tandori.classification == Classification::Converges;
  implication.ratio = implication.passed ? 0.0 : std::numeric_limits<double>::infinity();
  implication.detail = base;
  implication.detail["inequality"] = "classification_implication";
  implication.detail["eq8"] = to_string(red.conditions.eq8.classification);
  implication.detail["eq9"] = to_string(red.conditions.eq9.classification);
  implication.detail["tandori"] = to_string(tandori.classification);
  sink.push_back(std::move(implication));
}

TrialOutcome run_one(const TrialConfig& cfg, std::size_t t) {
  TrialOutcome out;
  try {
    const std::uint64_t sub_seed = derive_seed(cfg.seed, t);
    out.seed = sub_seed;
    Rng rng(sub_seed);
    SystemSpec spec = cfg.systems[t % cfg.systems.size()];
    if (spec.kind == SystemKind::RandomQR || spec.kind == SystemKind::VaryingDim) {
      spec.seed = derive_seed(sub_seed, 1);
    }
    if (cfg.vary_n) spec.n_functions = 1 + static_cast<std::size_t>(rng.below(spec.n_functions));
    out.system = spec;
    out.n = spec.n_functions;

    const bool needs_system = std::any_of(cfg.checks.begin(), cfg.checks.end(),
                                          [](CheckId id) { return id != CheckId::OrliczChain; });
    if (needs_system) {
      if (spec.field == Field::Real) {
        const auto model = generate<double>(spec);
        const auto a = trial_coefficients<double>(cfg, out.n, rng);
        run_trial<double>(cfg, model, a, out.n, rng, sub_seed, out);
      } else {
        const auto model = generate<Complex>(spec);
        const auto a = trial_coefficients<Complex>(cfg, out.n, rng);
        run_trial<Complex>(cfg, model, a, out.n, rng, sub_seed, out);
      }
    }
    if (cfg.checks.count(CheckId::OrliczChain)) run_orlicz_trial(cfg, rng, out);
  } catch (...) {
    out.error = std::current_exception();
  }
  return out;
}

json reproducer_json(const Reproducer& r) {
  return {{"trial", r.trial}, {"seed", r.seed}, {"system", r.system}, {"n", r.n}, {"detail", r.detail}};
}

}  // namespace

template <typename T>
CheckResult exhaustive_permutation_check(const OrthonormalSystem<T>& system, std::span<const T> a,
                                         std::size_t n, const FiberedSpace& space, double slack) {
  if (n < 1 || n > kMaxExhaustive) {
    throw StructuralError("exhaustive permutation search needs 1 <= N <= " + std::to_string(kMaxExhaustive));
  }
  if (n > system.size() || a.size() < n) throw StructuralError("N exceeds the system or coefficient list");
  std::vector<Observation> sink;
  run_exhaustive(system, a, n, space, slack, sink);
  CheckResult r;
  r.id = CheckId::ExhaustivePerm;
  r.evaluations = sink.front().detail["orderings"].template get<std::size_t>();
  r.failures = sink.front().detail["failing_orderings"].template get<std::size_t>();
  r.passed = r.failures == 0;
  r.worst_ratio = sink.front().ratio;
  Reproducer rep;
  rep.n = n;
  rep.detail = sink.front().detail;
  r.worst = rep;
  if (!r.passed) r.first_failure = rep;
  return r;
}

std::vector<BlockArithmeticRow> block_arithmetic_rows() {
  std::vector<BlockArithmeticRow> rows;
  for (std::size_t k = 0; k <= 5; ++k) {
    const double log_nu = std::exp2(static_cast<double>(k));  // log2 nu_k
    const double nu = std::exp2(log_nu);
    // log2(nu (nu - 1)) = log_nu + log2(nu - 1)
    const double lhs = 4.0 + 2.0 * (log_nu + std::log2(nu - 1.0));
    rows.push_back({k, lhs, 8.0 * log_nu});
  }
  return rows;
}

VerifyReport run_suite(const TrialConfig& cfg, unsigned threads) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  VerifyReport report;
  report.seed = cfg.seed;
  report.n_trials = cfg.n_trials;
  for (CheckId id : cfg.checks) {
    report.checks[id].id = id;
  }
  if (cfg.checks.empty()) return report;

  std::vector<TrialOutcome> outcomes(cfg.n_trials);
  unsigned workers = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(1, cfg.n_trials)));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t t = next++; t < cfg.n_trials; t = next++) outcomes[t] = run_one(cfg, t);
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }

  // Merge strictly in trial order so the report does not depend on scheduling.
  for (std::size_t t = 0; t < outcomes.size(); ++t) {
    auto& o = outcomes[t];
    if (o.error) std::rethrow_exception(o.error);
    for (auto& [id, list] : o.observations) {
      auto& r = report.checks[id];
      for (auto& obs : list) {
        ++r.evaluations;
        Reproducer rep{t, o.seed, o.system, o.n, obs.detail};
        if (!obs.passed) {
          ++r.failures;
          r.passed = false;
          if (!r.first_failure) r.first_failure = rep;
        }
        // NaN ranks above everything; the first occurrence wins ties.
        const bool current_nan = r.worst && std::isnan(r.worst_ratio);
        const bool worse = !r.worst || (!current_nan && (std::isnan(obs.ratio) || obs.ratio > r.worst_ratio));
        if (worse) {
          r.worst_ratio = obs.ratio;
          r.worst = std::move(rep);
        }
      }
    }
    for (const auto& [id, count] : o.skipped) report.checks[id].skipped += count;
  }

  if (cfg.checks.count(CheckId::Eq24)) {
    auto& r = report.checks[CheckId::Eq24];
    json rows = json::array();
    bool ok = true;
    for (const auto& row : block_arithmetic_rows()) {
      const bool holds = row.lhs <= row.rhs;
      ok = ok && holds;
      rows.push_back({{"k", row.k}, {"lhs", row.lhs}, {"rhs", row.rhs}, {"holds", holds}});
    }
    r.notes["block_arithmetic"] = rows;
    if (!ok) r.passed = false;
    r.notes["plans"] = {{"shuffles", cfg.eq24_shuffles},
                        {"heuristic", json::array({"GreedyAdversarial", "BlockReversal"})},
                        {"heuristic_results_are_lower_bounds", true}};
  }
  if (cfg.checks.count(CheckId::ExhaustivePerm)) {
    report.checks[CheckId::ExhaustivePerm].notes["exhaustive_n"] = cfg.exhaustive_n;
  }
  if (cfg.checks.count(CheckId::RieszRatio)) {
    report.checks[CheckId::RieszRatio].notes["condition"] = cfg.riesz_condition;
    report.checks[CheckId::RieszRatio].notes["supremum_ratio"] = report.checks[CheckId::RieszRatio].worst_ratio;
  }
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

namespace {

VerifyReport only(TrialConfig cfg, std::initializer_list<CheckId> ids, unsigned threads) {
  cfg.checks = std::set<CheckId>(ids);
  return run_suite(cfg, threads);
}

}  // namespace

VerifyReport check_lemma1(TrialConfig cfg, unsigned threads) {
  return only(std::move(cfg), {CheckId::Lemma1}, threads);
}
VerifyReport check_theorem1(TrialConfig cfg, unsigned threads) {
  return only(std::move(cfg), {CheckId::Thm1, CheckId::Eq15, CheckId::Eq20}, threads);
}
VerifyReport check_eq24(TrialConfig cfg, unsigned threads) {
  return only(std::move(cfg), {CheckId::Eq24}, threads);
}
VerifyReport check_riesz_ratio(TrialConfig cfg, unsigned threads) {
  return only(std::move(cfg), {CheckId::RieszRatio}, threads);
}

// ---------------------------------------------------------------------------
// JSON

namespace {

SequenceSpec sequence_from_json(const json& j) {
  const auto type = j.at("type").get<std::string>();
  if (type == "powerlog") {
    return SequenceSpec::power_log(j.value("scale", 1.0), j.at("alpha").get<double>(), j.value("beta", 0.0));
  }
  if (type == "explicit") {
    std::vector<Complex> values;
    for (const auto& v : j.at("values")) {
      if (v.is_array()) {
        values.emplace_back(v.at(0).get<double>(), v.at(1).get<double>());
      } else {
        values.emplace_back(v.get<double>(), 0.0);
      }
    }
    return SequenceSpec::explicit_values(std::move(values), j.value("zero_tail", false));
  }
  throw StructuralError("unknown coefficient type '" + type + "'");
}

json sequence_to_json(const SequenceSpec& s) {
  if (const auto* pl = std::get_if<PowerLog>(&s.form())) {
    return {{"type", "powerlog"}, {"scale", pl->scale}, {"alpha", pl->alpha}, {"beta", pl->beta}};
  }
  const auto& ex = std::get<ExplicitSequence>(s.form());
  json values = json::array();
  for (const auto& z : ex.values) {
    if (z.imag() == 0.0) {
      values.push_back(z.real());
    } else {
      values.push_back({z.real(), z.imag()});
    }
  }
  return {{"type", "explicit"}, {"values", values}, {"zero_tail", ex.zero_tail}};
}

WeightSpec weight_from_json(const json& j) {
  const auto type = j.at("type").get<std::string>();
  if (type == "logpower") return WeightSpec::log_power(j.at("gamma").get<double>(), j.value("shift", 0.0));
  if (type == "explicit") return WeightSpec::explicit_values(j.at("values").get<std::vector<double>>());
  throw StructuralError("unknown weight type '" + type + "'");
}

json weight_to_json(const WeightSpec& w) {
  if (const auto* lp = std::get_if<LogPower>(&w.form())) {
    return {{"type", "logpower"}, {"gamma", lp->gamma}, {"shift", lp->shift}};
  }
  return {{"type", "explicit"}, {"values", std::get<std::vector<double>>(w.form())}};
}

}  // namespace

TrialConfig config_from_json(const json& j) {
  static const std::set<std::string> known = {
      "schema_version", "seed",          "n_trials",    "vary_n",           "systems",
      "coefficients",   "weight",        "checks",      "tolerances",       "eq24_shuffles",
      "exhaustive_n",   "orlicz_truncation", "riesz_condition"};
  if (!j.is_object()) throw StructuralError("config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) throw StructuralError("unknown config key '" + key + "'");
  }
  const int version = j.value("schema_version", kConfigSchemaVersion);
  if (version != kConfigSchemaVersion) {
    throw StructuralError("unsupported config schema_version " + std::to_string(version));
  }
  TrialConfig cfg;
  cfg.seed = j.value("seed", std::uint64_t{0});
  cfg.n_trials = j.value("n_trials", std::size_t{1});
  cfg.vary_n = j.value("vary_n", false);
  if (j.contains("systems")) cfg.systems = j.at("systems").get<std::vector<SystemSpec>>();
  if (j.contains("coefficients")) cfg.coefficients = sequence_from_json(j.at("coefficients"));
  if (j.contains("weight")) cfg.weight = weight_from_json(j.at("weight"));
  if (j.contains("checks")) {
    const auto& c = j.at("checks");
    if (c.is_string() && c.get<std::string>() == "all") {
      cfg.checks = std::set<CheckId>(all_checks().begin(), all_checks().end());
    } else {
      for (const auto& name : c) cfg.checks.insert(check_id_from_string(name.get<std::string>()));
    }
  }
  if (j.contains("tolerances")) {
    for (const auto& [name, tol] : j.at("tolerances").items()) {
      cfg.tolerances[check_id_from_string(name)] = tol.get<double>();
    }
  }
  cfg.eq24_shuffles = j.value("eq24_shuffles", cfg.eq24_shuffles);
  cfg.exhaustive_n = j.value("exhaustive_n", cfg.exhaustive_n);
  cfg.orlicz_truncation = j.value("orlicz_truncation", cfg.orlicz_truncation);
  cfg.riesz_condition = j.value("riesz_condition", cfg.riesz_condition);
  cfg.validate();
  return cfg;
}

json to_json(const TrialConfig& cfg) {
  json checks = json::array();
  for (CheckId id : cfg.checks) checks.push_back(to_string(id));
  json tolerances = json::object();
  for (const auto& [id, tol] : cfg.tolerances) tolerances[to_string(id)] = tol;
  json j = {{"schema_version", kConfigSchemaVersion},
            {"seed", cfg.seed},
            {"n_trials", cfg.n_trials},
            {"vary_n", cfg.vary_n},
            {"systems", cfg.systems},
            {"checks", checks},
            {"tolerances", tolerances},
            {"eq24_shuffles", cfg.eq24_shuffles},
            {"exhaustive_n", cfg.exhaustive_n},
            {"orlicz_truncation", cfg.orlicz_truncation},
            {"riesz_condition", cfg.riesz_condition}};
  if (cfg.coefficients) j["coefficients"] = sequence_to_json(*cfg.coefficients);
  if (cfg.weight) j["weight"] = weight_to_json(*cfg.weight);
  return j;
}

json to_json(const CheckResult& r) {
  json j = {{"passed", r.passed},
            {"evaluations", r.evaluations},
            {"skipped", r.skipped},
            {"failures", r.failures},
            {"worst_ratio", r.worst_ratio},
            {"worst", r.worst ? reproducer_json(*r.worst) : json(nullptr)},
            {"first_failure", r.first_failure ? reproducer_json(*r.first_failure) : json(nullptr)}};
  if (!r.notes.empty()) j["notes"] = r.notes;
  return j;
}

json to_json(const VerifyReport& report) {
  json checks = json::object();
  for (const auto& [id, r] : report.checks) checks[to_string(id)] = to_json(r);
  json env = {{"pointer_bits", sizeof(void*) * 8},
              {"double_mantissa_bits", std::numeric_limits<double>::digits},
              {"iec559", std::numeric_limits<double>::is_iec559},
              {"rounding", std::numeric_limits<double>::round_style == std::round_to_nearest
                               ? "to_nearest"
                               : "other"},
#if defined(__VERSION__)
              {"compiler", __VERSION__}
#else
              {"compiler", "unknown"}
#endif
  };
  return {{"schema_version", kReportSchemaVersion},
          {"seed", report.seed},
          {"n_trials", report.n_trials},
          {"passed", report.passed()},
          {"checks", checks},
          {"environment", env},
          {"timing", {{"wall_seconds", report.wall_seconds}}}};
}

template MajorantProfile oracle_majorant<double>(const OrthonormalSystem<double>&, std::span<const double>,
                                                 std::size_t, const FiberedSpace&);
template MajorantProfile oracle_majorant<Complex>(const OrthonormalSystem<Complex>&, std::span<const Complex>,
                                                  std::size_t, const FiberedSpace&);
template CheckResult exhaustive_permutation_check<double>(const OrthonormalSystem<double>&,
                                                          std::span<const double>, std::size_t,
                                                          const FiberedSpace&, double);
template CheckResult exhaustive_permutation_check<Complex>(const OrthonormalSystem<Complex>&,
                                                           std::span<const Complex>, std::size_t,
                                                           const FiberedSpace&, double);

}  // namespace orthoseries
