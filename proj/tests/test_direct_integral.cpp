#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "orthoseries/direct_integral.hpp"

using namespace orthoseries;

namespace {

FiberedSpace space_of(std::vector<double> weights, std::vector<std::size_t> dims, Field field = Field::Real) {
  return FiberedSpace(MeasureSpace(std::move(weights)), HilbertCollection(std::move(dims), field));
}

DirectIntegralElement<double> element(const FiberedSpace& s, std::vector<std::vector<double>> blocks) {
  return DirectIntegralElement<double>::from_blocks(s, blocks);
}

}  // namespace

TEST_CASE("inner product of the zero element is zero") {
  const auto s = space_of({1.0, 2.0}, {1, 3});
  const auto z = DirectIntegralElement<double>::zero(s);
  CHECK(inner_product(z, z, s) == 0.0);
  CHECK(norm(z, s) == 0.0);
}

TEST_CASE("disjoint supports are orthogonal") {
  const auto s = space_of({1.0, 1.0}, {1, 1});
  CHECK(inner_product(element(s, {{3.0}, {0.0}}), element(s, {{0.0}, {4.0}}), s) == 0.0);
}

TEST_CASE("weighted inner product over varying fibers") {
  const auto s = space_of({2.0, 0.5}, {1, 2});
  const auto f = element(s, {{1.0}, {2.0, 0.0}});
  const auto g = element(s, {{1.0}, {0.0, 2.0}});
  CHECK(inner_product(f, g, s) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("norms by hand") {
  const auto s = space_of({1.0, 1.0}, {1, 1});
  CHECK(norm(element(s, {{3.0}, {4.0}}), s) == doctest::Approx(5.0).epsilon(1e-15));
  const auto one = space_of({4.0}, {1});
  CHECK(norm(element(one, {{1.0}}), one) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("complex inner product is conjugate-linear in the second slot") {
  const auto s = space_of({1.0}, {1}, Field::Complex);
  const Complex i(0.0, 1.0);
  const auto f = DirectIntegralElement<Complex>::from_blocks(s, {{Complex(1.0, 0.0)}});
  const auto g = DirectIntegralElement<Complex>::from_blocks(s, {{i}});
  // <1, i> = 1 * conj(i) = -i
  const Complex ip = inner_product(f, g, s);
  CHECK(ip.real() == 0.0);
  CHECK(ip.imag() == -1.0);
}

TEST_CASE("zero-weight atoms keep pointwise values but drop out of the norm") {
  const auto s = space_of({1.0, 0.0}, {1, 2});
  const auto f = element(s, {{1.0}, {3.0, 4.0}});
  const auto pn = pointwise_norms(f, s);
  CHECK(pn[0] == 1.0);
  CHECK(pn[1] == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(norm(f, s) == 1.0);
}

TEST_CASE("a block of the wrong length names the atom") {
  const auto s = space_of({1.0, 1.0, 1.0}, {1, 2, 1});
  try {
    element(s, {{1.0}, {1.0}, {1.0}});
    FAIL("expected a structural error");
  } catch (const StructuralError& e) {
    REQUIRE(e.atom().has_value());
    CHECK(*e.atom() == 1);
  }
}

TEST_CASE("negative weights are rejected") {
  CHECK_THROWS_AS(MeasureSpace({1.0, -0.5}), StructuralError);
}

TEST_CASE("standard basis Gram is the identity") {
  const std::size_t n = 5;
  const auto s = space_of(std::vector<double>(n, 1.0), std::vector<std::size_t>(n, 1));
  const OrthonormalSystem<double> sys(Matrix<double>::Identity(n, n));
  const auto r = gram_matrix(sys, s);
  CHECK((r.gram - Matrix<double>::Identity(n, n)).norm() == 0.0);
  CHECK(r.riesz_lower == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(r.riesz_upper == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(validate_ons(sys, s, 1e-12).orthonormal);
}

TEST_CASE("scaled unit vector has Gram [[4]]") {
  const auto s = space_of({1.0}, {1});
  Matrix<double> m(1, 1);
  m(0, 0) = 2.0;
  const auto r = gram_matrix(OrthonormalSystem<double>(m), s);
  CHECK(r.gram(0, 0) == 4.0);
  CHECK(r.riesz_lower == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(r.riesz_upper == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("two-by-two Gram with the diagonal vector") {
  const auto s = space_of({1.0, 1.0}, {1, 1});
  const double h = 1.0 / std::sqrt(2.0);
  Matrix<double> m(2, 2);
  m << 1.0, h, 0.0, h;
  const OrthonormalSystem<double> sys(m);
  const auto r = gram_matrix(sys, s);
  CHECK(r.gram(0, 1) == doctest::Approx(h).epsilon(1e-15));
  CHECK(r.riesz_lower == doctest::Approx(1.0 - h).epsilon(1e-13));
  CHECK(r.riesz_upper == doctest::Approx(1.0 + h).epsilon(1e-13));
  CHECK_FALSE(validate_ons(sys, s, 1e-12).orthonormal);
}

TEST_CASE("Lanczos agrees with the full eigensolver") {
  // Tridiagonal 2 - 2cos spectrum: eigenvalues 2 - 2cos(k pi / (n+1)).
  const Eigen::Index n = 40;
  Matrix<double> t = Matrix<double>::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    t(i, i) = 2.0;
    if (i + 1 < n) t(i, i + 1) = t(i + 1, i) = -1.0;
  }
  const double pi = std::acos(-1.0);
  const double lo = 2.0 - 2.0 * std::cos(pi / (n + 1));
  const double hi = 2.0 - 2.0 * std::cos(pi * n / (n + 1));
  for (auto method : {EigenMethod::FullSymmetric, EigenMethod::Lanczos}) {
    const auto [l, u] = extremal_eigenvalues(t, method);
    CHECK(l == doctest::Approx(lo).epsilon(1e-9));
    CHECK(u == doctest::Approx(hi).epsilon(1e-9));
  }
}

TEST_CASE("system from elements keeps order and padding appends zeros") {
  const auto s = space_of({1.0, 1.0}, {1, 1});
  const auto sys = OrthonormalSystem<double>::from_elements(s, {element(s, {{0.0}, {1.0}}), element(s, {{1.0}, {0.0}})});
  CHECK(sys.size() == 2);
  CHECK(sys.column(0)[1] == 1.0);
  const auto p = sys.padded(4);
  CHECK(p.size() == 4);
  CHECK(p.matrix().col(3).norm() == 0.0);
  CHECK(p.truncated(1).size() == 1);
}
