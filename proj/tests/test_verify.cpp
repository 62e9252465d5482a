#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "orthoseries/rng.hpp"
#include "orthoseries/verify.hpp"

using namespace orthoseries;

namespace {

SystemSpec spec(SystemKind kind, std::size_t n, std::size_t res = 0, std::size_t dim = 1,
                Field field = Field::Real) {
  SystemSpec s;
  s.kind = kind;
  s.n_functions = n;
  s.resolution = res;
  s.fiber_dim = dim;
  s.field = field;
  return s;
}

TrialConfig small_config() {
  TrialConfig cfg;
  cfg.seed = 3;
  cfg.n_trials = 12;
  cfg.systems = {spec(SystemKind::RandomQR, 20, 8, 3), spec(SystemKind::Haar, 16),
                 spec(SystemKind::VaryingDim, 12, 0, 1, Field::Complex)};
  cfg.checks = std::set<CheckId>(all_checks().begin(), all_checks().end());
  cfg.orlicz_truncation = 4096;
  cfg.eq24_shuffles = 4;
  return cfg;
}

}  // namespace

TEST_CASE("sub-seeds depend on both seed and index") {
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0) != derive_seed(2, 0));
  CHECK(derive_seed(7, 5) == derive_seed(7, 5));
}

TEST_CASE("check names round trip") {
  for (CheckId id : all_checks()) CHECK(check_id_from_string(to_string(id)) == id);
  CHECK_THROWS_AS(check_id_from_string("nope"), StructuralError);
}

TEST_CASE("oracle agrees with the streaming majorant on the standard basis") {
  const auto m = generate<double>(spec(SystemKind::StandardBasis, 2));
  const std::vector<double> a{3.0, 4.0};
  const auto p = oracle_majorant<double>(m.system, a, 2, m.space);
  CHECK(p.values == std::vector<double>{3.0, 4.0});
  const std::vector<double> zero{0.0, 0.0};
  CHECK(oracle_majorant<double>(m.system, zero, 2, m.space).l2_norm == 0.0);
}

TEST_CASE("maximal bound ratios by hand") {
  const auto m = generate<double>(spec(SystemKind::StandardBasis, 2));
  const std::vector<double> a{3.0, 4.0};
  const auto p = majorant<double>(m.system, a, 2, m.space);
  CHECK(bound_ratio(p.l2_norm, 3.0 * 5.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  const auto one = generate<double>(spec(SystemKind::StandardBasis, 1));
  const std::vector<double> b{-2.0};
  CHECK(bound_ratio(majorant<double>(one.system, b, 1, one.space).l2_norm, 2.0 * 2.0) == 0.5);
}

TEST_CASE("exhaustive permutations") {
  const auto m = generate<double>(spec(SystemKind::StandardBasis, 2));
  const std::vector<double> a{3.0, 4.0};
  const auto r = exhaustive_permutation_check<double>(m.system, a, 2, m.space);
  CHECK(r.passed);
  CHECK(r.evaluations == 2);
  CHECK(r.worst_ratio == doctest::Approx(1.0 / 3.0).epsilon(1e-15));

  const auto rad = generate<double>(spec(SystemKind::Rademacher, 6));
  std::vector<double> h(6);
  for (std::size_t n = 0; n < 6; ++n) h[n] = 1.0 / static_cast<double>(n + 1);
  const auto rr = exhaustive_permutation_check<double>(rad.system, h, 6, rad.space);
  CHECK(rr.passed);
  CHECK(rr.evaluations == 720);

  const auto single = exhaustive_permutation_check<double>(m.system, a, 1, m.space);
  CHECK(single.evaluations == 1);
  CHECK_THROWS_AS(exhaustive_permutation_check<double>(m.system, a, 9, m.space), StructuralError);
}

TEST_CASE("arithmetic inequality for the block lemma") {
  const auto rows = block_arithmetic_rows();
  REQUIRE(rows.size() == 6);
  for (const auto& row : rows) CHECK(row.lhs <= row.rhs);
  CHECK(rows[1].lhs == doctest::Approx(4.0 + 2.0 * std::log2(12.0)).epsilon(1e-15));
  CHECK(rows[1].rhs == 16.0);
}

TEST_CASE("empty check set gives an empty passing report") {
  TrialConfig cfg;
  const auto r = run_suite(cfg, 1);
  CHECK(r.passed());
  CHECK(r.checks.empty());
}

TEST_CASE("all checks pass on a small mixed config") {
  const auto r = run_suite(small_config(), 1);
  for (const auto& [id, c] : r.checks) {
    CAPTURE(to_string(id));
    CHECK(c.passed);
    CHECK(c.evaluations > 0);
  }
}

TEST_CASE("report does not depend on the thread count") {
  const auto cfg = small_config();
  auto a = to_json(run_suite(cfg, 1));
  auto b = to_json(run_suite(cfg, 4));
  a.erase("timing");
  b.erase("timing");
  CHECK(a.dump() == b.dump());
}

TEST_CASE("a forced failure carries a reproducer") {
  TrialConfig cfg = small_config();
  cfg.checks = {CheckId::Lemma1};
  cfg.tolerances[CheckId::Lemma1] = -0.99;
  const auto r = run_suite(cfg, 1);
  CHECK_FALSE(r.passed());
  const auto& c = r.checks.at(CheckId::Lemma1);
  REQUIRE(c.first_failure.has_value());
  CHECK(c.first_failure->seed == derive_seed(cfg.seed, c.first_failure->trial));
  const auto j = to_json(r);
  CHECK(j["checks"]["lemma1"]["first_failure"]["seed"].get<std::uint64_t>() == c.first_failure->seed);
}

TEST_CASE("Riesz ratio: identity mix and unperturbed identity") {
  TrialConfig cfg;
  cfg.seed = 9;
  cfg.n_trials = 3;
  cfg.systems = {spec(SystemKind::RandomQR, 16, 8, 2)};
  cfg.riesz_condition = 1.0;
  const auto riesz = check_riesz_ratio(cfg, 1);
  const auto lemma = check_lemma1(cfg, 1);
  const auto& rc = riesz.checks.at(CheckId::RieszRatio);
  CHECK(rc.passed);
  const auto& detail = rc.worst->detail;
  CHECK(detail["riesz_lower"].get<double>() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(detail["riesz_upper"].get<double>() == doctest::Approx(1.0).epsilon(1e-9));
  // Same trial stream: the two normalizations differ by (2 + log2 N) / log2(N + 1).
  const double scale = (2.0 + std::log2(16.0)) / std::log2(17.0);
  CHECK(rc.worst_ratio == doctest::Approx(lemma.checks.at(CheckId::Lemma1).worst_ratio * scale).epsilon(1e-12));
}

TEST_CASE("Riesz ratio with condition number 4 is finite") {
  TrialConfig cfg;
  cfg.seed = 2;
  cfg.n_trials = 20;
  cfg.systems = {spec(SystemKind::RandomQR, 64, 32, 4), spec(SystemKind::Haar, 64)};
  const auto r = check_riesz_ratio(cfg, 1);
  const auto& c = r.checks.at(CheckId::RieszRatio);
  CHECK(c.passed);
  CHECK(std::isfinite(c.worst_ratio));
  const double lower = c.worst->detail["riesz_lower"].get<double>();
  const double upper = c.worst->detail["riesz_upper"].get<double>();
  CHECK(upper / lower == doctest::Approx(16.0).epsilon(1e-8));
}

TEST_CASE("config JSON round trip and validation") {
  const auto cfg = small_config();
  const auto back = config_from_json(to_json(cfg));
  CHECK(to_json(back).dump() == to_json(cfg).dump());
  auto bad = to_json(cfg);
  bad["mystery"] = 1;
  CHECK_THROWS_AS(config_from_json(bad), StructuralError);
  auto version = to_json(cfg);
  version["schema_version"] = 2;
  CHECK_THROWS_AS(config_from_json(version), StructuralError);
  auto unknown = to_json(cfg);
  unknown["checks"] = {"lemma1", "lemma7"};
  CHECK_THROWS_AS(config_from_json(unknown), StructuralError);
}
