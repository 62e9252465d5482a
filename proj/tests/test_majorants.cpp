#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "orthoseries/majorants.hpp"
#include "orthoseries/rng.hpp"
#include "orthoseries/systems.hpp"

using namespace orthoseries;

namespace {

SystemModel<double> basis(std::size_t n) {
  SystemSpec s;
  s.kind = SystemKind::StandardBasis;
  s.n_functions = n;
  return generate<double>(s);
}

SystemModel<double> rademacher(std::size_t n) {
  SystemSpec s;
  s.kind = SystemKind::Rademacher;
  s.n_functions = n;
  return generate<double>(s);
}

SystemModel<double> random_qr(std::size_t n, std::size_t atoms, std::size_t dim, std::uint64_t seed) {
  SystemSpec s;
  s.kind = SystemKind::RandomQR;
  s.n_functions = n;
  s.resolution = atoms;
  s.fiber_dim = dim;
  s.seed = seed;
  return generate<double>(s);
}

/// Direct enumeration: every prefix summed from scratch.
std::vector<double> brute_profile(const SystemModel<double>& m, const std::vector<double>& a,
                                  const std::vector<std::size_t>& order) {
  std::vector<double> best(m.space.atoms(), 0.0);
  for (std::size_t j = 1; j <= order.size(); ++j) {
    for (std::size_t i = 0; i < m.space.atoms(); ++i) {
      double sq = 0.0;
      for (std::size_t c = 0; c < m.space.dim(i); ++c) {
        double v = 0.0;
        for (std::size_t p = 0; p < j; ++p) v += a[order[p]] * m.system.column(order[p])[m.space.offset(i) + c];
        sq += v * v;
      }
      best[i] = std::max(best[i], std::sqrt(sq));
    }
  }
  return best;
}

}  // namespace

TEST_CASE("prefix sums") {
  const auto b = basis(2);
  const std::vector<double> a{3.0, 4.0};
  const auto s = prefix_sum<double>(b.system, a, 2);
  CHECK(s.values()(0) == 3.0);
  CHECK(s.values()(1) == 4.0);
  const std::vector<double> zero{0.0};
  CHECK(prefix_sum<double>(basis(1).system, zero, 1).values().norm() == 0.0);

  const auto r = rademacher(2);
  const std::vector<double> ones{1.0, 1.0};
  const auto rs = prefix_sum<double>(r.system, ones, 2);
  const std::vector<double> expected{2, 0, 0, -2};
  for (std::size_t i = 0; i < 4; ++i) CHECK(rs.values()(static_cast<Eigen::Index>(i)) == expected[i]);
}

TEST_CASE("majorant on the standard basis") {
  const auto b = basis(2);
  const std::vector<double> a{3.0, 4.0};
  const auto p = majorant<double>(b.system, a, 2, b.space);
  CHECK(p.values == std::vector<double>{3.0, 4.0});
  CHECK(p.l2_norm == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(p.argmax_prefix == std::vector<std::size_t>{1, 2});
}

TEST_CASE("majorant of Rademacher N=2 with a = (1,1)") {
  const auto r = rademacher(2);
  const std::vector<double> a{1.0, 1.0};
  const auto p = majorant<double>(r.system, a, 2, r.space);
  CHECK(p.values == std::vector<double>{2.0, 1.0, 1.0, 2.0});
  CHECK(p.l2_norm == doctest::Approx(std::sqrt(2.5)).epsilon(1e-15));
}

TEST_CASE("zero coefficients give a zero profile") {
  const auto m = random_qr(6, 4, 2, 3);
  const std::vector<double> a(6, 0.0);
  const auto p = majorant<double>(m.system, a, 6, m.space);
  CHECK(p.l2_norm == 0.0);
  for (auto v : p.values) CHECK(v == 0.0);
  for (auto j : p.argmax_prefix) CHECK(j == 1);
}

TEST_CASE("streaming majorant matches direct enumeration") {
  const auto m = random_qr(9, 5, 3, 11);
  Rng rng(5);
  std::vector<double> a(9);
  for (auto& x : a) x = rng.normal();
  std::vector<std::size_t> order(9);
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto p = majorant<double>(m.system, a, 9, m.space);
  const auto brute = brute_profile(m, a, order);
  for (std::size_t i = 0; i < brute.size(); ++i) CHECK(p.values[i] == doctest::Approx(brute[i]).epsilon(1e-13));

  const auto plan = PermutationPlan::seeded_shuffle(9, 8);
  const auto pp = permuted_majorant<double>(m.system, a, plan, 9, m.space);
  const auto brute_p = brute_profile(m, a, plan.sigma);
  for (std::size_t i = 0; i < brute_p.size(); ++i) CHECK(pp.values[i] == doctest::Approx(brute_p[i]).epsilon(1e-13));
}

TEST_CASE("majorant is monotone in N") {
  const auto m = random_qr(20, 8, 3, 21);
  Rng rng(1);
  std::vector<double> a(20);
  for (auto& x : a) x = rng.normal();
  double last = 0.0;
  for (std::size_t n = 1; n <= 20; ++n) {
    const double l2 = majorant<double>(m.system, a, n, m.space).l2_norm;
    CHECK(l2 >= last);
    last = l2;
  }
}

TEST_CASE("identity plan is bitwise identical to the plain majorant") {
  const auto m = random_qr(12, 6, 2, 4);
  Rng rng(2);
  std::vector<double> a(12);
  for (auto& x : a) x = rng.normal();
  const auto p = majorant<double>(m.system, a, 12, m.space);
  const auto q = permuted_majorant<double>(m.system, a, PermutationPlan::identity(12), 12, m.space);
  CHECK(p.values == q.values);
  CHECK(p.l2_norm == q.l2_norm);
  CHECK(p.argmax_prefix == q.argmax_prefix);
}

TEST_CASE("swap on disjoint supports leaves the profile unchanged") {
  const auto b = basis(2);
  const std::vector<double> a{3.0, 4.0};
  const auto q = permuted_majorant<double>(b.system, a, PermutationPlan::explicit_plan({1, 0}), 2, b.space);
  CHECK(q.values == std::vector<double>{3.0, 4.0});

  const auto r = rademacher(2);
  const std::vector<double> ones{1.0, 1.0};
  const auto s = permuted_majorant<double>(r.system, ones, PermutationPlan::explicit_plan({1, 0}), 2, r.space);
  // prefixes (1,-1,1,-1) then (2,0,0,-2)
  CHECK(s.values == std::vector<double>{2.0, 1.0, 1.0, 2.0});
}

TEST_CASE("plans must be bijections") {
  CHECK_THROWS_AS(PermutationPlan::explicit_plan({0, 0, 2}), StructuralError);
  CHECK_THROWS_AS(PermutationPlan::explicit_plan({0, 3}), StructuralError);
  const auto s = PermutationPlan::seeded_shuffle(50, 9);
  auto sorted = s.sigma;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < 50; ++i) CHECK(sorted[i] == i);
  CHECK(PermutationPlan::seeded_shuffle(50, 9).sigma == s.sigma);
}

TEST_CASE("dyadic decomposition") {
  const auto d5 = dyadic_decomposition(5, 3);
  CHECK(d5.bits == std::vector<int>{0, 1, 0, 1});
  CHECK(format_blocks(d5) == "(0,4] (4,5]");
  CHECK(format_blocks(dyadic_decomposition(7, 3)) == "(0,4] (4,6] (6,7]");
  CHECK(format_blocks(dyadic_decomposition(8, 3)) == "(0,8]");
  CHECK_THROWS_AS(dyadic_decomposition(9, 3), StructuralError);
  CHECK_THROWS_AS(dyadic_decomposition(0, 3), StructuralError);
}

TEST_CASE("dyadic blocks partition (0, j] for every j <= 2^10") {
  const unsigned r = 10;
  for (std::uint64_t j = 1; j <= (1u << r); ++j) {
    const auto d = dyadic_decomposition(j, r);
    std::uint64_t cursor = 0;
    bool ok = true;
    for (const auto& b : d.blocks) {
      const std::uint64_t len = b.hi - b.lo;
      ok = ok && b.lo == cursor && len > 0 && (len & (len - 1)) == 0 && b.lo % len == 0;
      cursor = b.hi;
    }
    ok = ok && cursor == j;
    if (!ok) FAIL("partition broken at j = " << j);
  }
}

TEST_CASE("pointwise dyadic bound by hand") {
  const std::vector<double> zeros(4, 0.0);
  const auto z = dyadic_pointwise_bound<double>(zeros, 1, 2);
  CHECK(z.lhs == 0.0);
  CHECK(z.rhs == 0.0);
  const std::vector<double> one{1.0};
  const auto e = dyadic_pointwise_bound<double>(one, 1, 0);
  CHECK(e.lhs == 1.0);
  CHECK(e.rhs == 1.0);
  const std::vector<double> three{1.0, 1.0, 1.0};
  const auto t = dyadic_pointwise_bound<double>(three, 1, 2);
  CHECK(t.lhs == 9.0);
  CHECK(t.rhs == 51.0);
}

TEST_CASE("chaining diagnostics on the standard basis N=3") {
  const auto b = basis(3);
  const std::vector<double> a{1.0, 0.5, 0.5};
  const auto d = chaining_diagnostics<double>(b.system, a, 3, b.space);
  REQUIRE(d.chi_norms.size() == 2);
  CHECK(d.chi_norms[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(d.chi_norms[1] == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
  CHECK(d.bound_15.lhs == doctest::Approx(1.0 + std::sqrt(0.5)).epsilon(1e-14));
  const double L = 1.0 + 0.25 * std::pow(std::log2(3.0), 2) + 0.25 * 4.0;
  CHECK(d.truncated_L == doctest::Approx(L).epsilon(1e-14));
  CHECK(d.bound_15.rhs == doctest::Approx(2.0 * std::sqrt(L)).epsilon(1e-14));
  CHECK(d.bound_4.lhs == doctest::Approx(std::sqrt(1.5)).epsilon(1e-14));
  CHECK(d.bound_4.rhs == doctest::Approx(4.0 * std::sqrt(L)).epsilon(1e-14));
}

TEST_CASE("chaining bounds hold for RandomQR M=64 d=1 N=31 seed 7 with a_n = 1/n") {
  const auto m = random_qr(31, 64, 1, 7);
  std::vector<double> a(31);
  for (std::size_t n = 0; n < 31; ++n) a[n] = 1.0 / static_cast<double>(n + 1);
  const auto d = chaining_diagnostics<double>(m.system, a, 31, m.space);
  for (const auto& p : {d.bound_15, d.bound_19, d.bound_20, d.bound_4, d.triangle, d.s_circ_square}) {
    CHECK(holds_with_slack(p.lhs, p.rhs, 1e-12));
  }
  for (std::size_t k = 0; k < d.chi_norms.size(); ++k) {
    CHECK(d.chi_norms[k] * d.chi_norms[k] == doctest::Approx(d.chi_block_energy[k]).epsilon(1e-10));
  }
}

TEST_CASE("chaining rejects sizes that are not dyadic complete") {
  const auto b = basis(4);
  const std::vector<double> a(4, 1.0);
  CHECK_THROWS_AS(chaining_diagnostics<double>(b.system, a, 4, b.space), StructuralError);
  CHECK(dyadic_complete_size(1) == 1);
  CHECK(dyadic_complete_size(2) == 3);
  CHECK(dyadic_complete_size(4) == 7);
  CHECK(dyadic_complete_size(7) == 7);
  CHECK(dyadic_complete_size(64) == 127);
}

TEST_CASE("Tandori delta on the standard basis N=4") {
  const auto b = basis(4);
  const std::vector<double> a{0.0, 0.0, 1.0, 1.0};
  const auto e = tandori_delta<double>(b.system, a, PermutationPlan::identity(4), 0, 4, b.space);
  CHECK(e.delta_profile == std::vector<double>{0.0, 0.0, 1.0, 1.0});
  CHECK(e.delta_l2 == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(e.rhs_24 == doctest::Approx(8.0 * std::sqrt(6.512106128692261)).epsilon(1e-14));
  CHECK(e.mode == DeltaMode::Exact);
  CHECK(e.two_sided_within_bound);
}

TEST_CASE("delta vanishes when the block coefficients do") {
  const auto m = random_qr(16, 8, 2, 3);
  std::vector<double> a(16, 1.0);
  a[2] = a[3] = 0.0;
  const auto e = tandori_delta<double>(m.system, a, PermutationPlan::identity(16), 0, 16, m.space);
  CHECK(e.delta_l2 == 0.0);
}

TEST_CASE("delta under a shuffle stays within the block bound") {
  const auto m = random_qr(16, 8, 2, 10);
  Rng rng(3);
  std::vector<double> a(16);
  for (auto& x : a) x = rng.normal();
  const auto plan = PermutationPlan::seeded_shuffle(16, 4);
  const auto e = tandori_delta<double>(m.system, a, plan, 1, 16, m.space);
  CHECK(holds_with_slack(e.delta_l2, e.rhs_24, 1e-12));
  CHECK(e.two_sided_within_bound);

  // Exact diameter against a direct pairwise search over the filtered partial sums.
  std::vector<std::vector<double>> points{std::vector<double>(m.space.total_dim(), 0.0)};
  for (std::size_t pos = 0; pos < 16; ++pos) {
    const std::size_t idx = plan.sigma[pos];
    if (idx + 1 < 5 || idx + 1 > 16) continue;
    auto next = points.back();
    for (std::size_t r = 0; r < next.size(); ++r) next[r] += a[idx] * m.system.column(idx)[r];
    points.push_back(next);
  }
  for (std::size_t i = 0; i < m.space.atoms(); ++i) {
    double best = 0.0;
    for (const auto& p : points) {
      for (const auto& q : points) {
        double sq = 0.0;
        for (std::size_t c = 0; c < m.space.dim(i); ++c) {
          const double diff = p[m.space.offset(i) + c] - q[m.space.offset(i) + c];
          sq += diff * diff;
        }
        best = std::max(best, std::sqrt(sq));
      }
    }
    CHECK(e.delta_profile[i] == doctest::Approx(best).epsilon(1e-13));
  }
}

TEST_CASE("greedy adversarial permutation") {
  const auto b = basis(2);
  const std::vector<double> a{1.0, 2.0};
  const auto plan = adversarial_permutation<double>(b.system, a, 2, AdversarialStrategy::GreedyMaxPrefix, b.space);
  CHECK(plan.sigma == std::vector<std::size_t>{1, 0});
  CHECK(plan.provenance == PlanProvenance::GreedyAdversarial);

  const auto b5 = basis(5);
  const std::vector<double> flat(5, 0.7);
  const auto ties = adversarial_permutation<double>(b5.system, flat, 5, AdversarialStrategy::GreedyMaxPrefix, b5.space);
  CHECK(ties.sigma == std::vector<std::size_t>{0, 1, 2, 3, 4});
}

TEST_CASE("block reversal N=16") {
  const auto p = PermutationPlan::block_reversal(16);
  const std::vector<std::size_t> expected{0, 1, 3, 2, 15, 14, 13, 12, 11, 10, 9, 8, 7, 6, 5, 4};
  CHECK(p.sigma == expected);
}

TEST_CASE("complex systems work through the same paths") {
  SystemSpec s;
  s.kind = SystemKind::RandomQR;
  s.n_functions = 15;
  s.resolution = 6;
  s.fiber_dim = 3;
  s.seed = 12;
  s.field = Field::Complex;
  const auto m = generate<Complex>(s);
  Rng rng(4);
  std::vector<Complex> a(15);
  for (auto& x : a) x = rng.gaussian<Complex>();
  const auto p = majorant<Complex>(m.system, a, 15, m.space);
  double b2 = 0.0;
  for (const auto& x : a) b2 += std::norm(x);
  CHECK(p.l2_norm <= (2.0 + std::log2(15.0)) * std::sqrt(b2));
  const auto d = chaining_diagnostics<Complex>(m.system, a, 15, m.space);
  CHECK(holds_with_slack(d.bound_4.lhs, d.bound_4.rhs, 1e-12));
  for (const auto& e : tandori_deltas<Complex>(m.system, a, PermutationPlan::seeded_shuffle(15, 1), 15, m.space)) {
    CHECK(holds_with_slack(e.delta_l2, e.rhs_24, 1e-12));
  }
}
