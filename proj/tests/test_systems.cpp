#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "orthoseries/systems.hpp"

using namespace orthoseries;

namespace {

SystemSpec spec(SystemKind kind, std::size_t n, std::size_t resolution = 0, std::size_t dim = 1,
                std::uint64_t seed = 0, Field field = Field::Real) {
  SystemSpec s;
  s.kind = kind;
  s.n_functions = n;
  s.resolution = resolution;
  s.fiber_dim = dim;
  s.seed = seed;
  s.field = field;
  return s;
}

}  // namespace

TEST_CASE("standard basis N=3") {
  const auto m = generate<double>(spec(SystemKind::StandardBasis, 3));
  CHECK(m.space.atoms() == 3);
  CHECK(m.system.matrix() == Matrix<double>::Identity(3, 3));
  CHECK(validate_ons(m.system, m.space, 1e-12).orthonormal);
}

TEST_CASE("Rademacher N=2 sign patterns") {
  const auto m = generate<double>(spec(SystemKind::Rademacher, 2));
  REQUIRE(m.space.atoms() == 4);
  for (std::size_t i = 0; i < 4; ++i) CHECK(m.space.weight(i) == 0.25);
  const std::vector<double> phi1{1, 1, -1, -1};
  const std::vector<double> phi2{1, -1, 1, -1};
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(m.system.column(0)[i] == phi1[i]);
    CHECK(m.system.column(1)[i] == phi2[i]);
  }
  const auto g = gram_matrix(m.system, m.space);
  CHECK(g.gram == Matrix<double>::Identity(2, 2));
}

TEST_CASE("Rademacher beyond the grid limit is rejected") {
  CHECK_THROWS_AS(generate<double>(spec(SystemKind::Rademacher, kMaxRademacher + 1)), StructuralError);
}

TEST_CASE("RandomQR M=16 d=2 N=8 seed 42 is orthonormal") {
  const auto m = generate<double>(spec(SystemKind::RandomQR, 8, 16, 2, 42));
  CHECK(validate_ons(m.system, m.space, 1e-10).orthonormal);
}

TEST_CASE("generation is deterministic bit for bit") {
  for (auto field : {Field::Real, Field::Complex}) {
    const auto s = spec(SystemKind::RandomQR, 10, 8, 3, 1234, field);
    const auto a = generate_any(s);
    const auto b = generate_any(s);
    std::visit(
        [&](const auto& ma) {
          using M = std::decay_t<decltype(ma)>;
          const auto& mb = std::get<M>(b);
          CHECK(ma.system.matrix() == mb.system.matrix());
        },
        a);
  }
  const auto x = generate<double>(spec(SystemKind::RandomQR, 4, 4, 1, 1));
  const auto y = generate<double>(spec(SystemKind::RandomQR, 4, 4, 1, 2));
  CHECK(x.system.matrix() != y.system.matrix());
}

TEST_CASE("every kind passes validate_ons at 1e-10") {
  const std::vector<SystemSpec> specs{
      spec(SystemKind::StandardBasis, 17),
      spec(SystemKind::Rademacher, 9),
      spec(SystemKind::Haar, 33),
      spec(SystemKind::Haar, 8, 64),
      spec(SystemKind::RandomQR, 40, 10, 5, 3),
      spec(SystemKind::RandomQR, 20, 7, 3, 4, Field::Complex),
      spec(SystemKind::TensorVector, 30, 0, 4),
      spec(SystemKind::TensorVector, 12, 0, 2, 0, Field::Complex),
      spec(SystemKind::VaryingDim, 25, 0, 1, 5),
      spec(SystemKind::VaryingDim, 9, 12, 1, 6, Field::Complex),
  };
  for (const auto& s : specs) {
    CAPTURE(to_string(s.kind));
    CAPTURE(s.n_functions);
    std::visit([](const auto& m) { CHECK(validate_ons(m.system, m.space, 1e-10).orthonormal); },
               generate_any(s));
  }
}

TEST_CASE("TensorVector with d=1 equals its Haar base") {
  const auto haar = generate<double>(spec(SystemKind::Haar, 16));
  const auto tensor = generate<double>(spec(SystemKind::TensorVector, 16, 0, 1));
  CHECK(haar.system.matrix() == tensor.system.matrix());
  CHECK(haar.space.measure().weights() == tensor.space.measure().weights());
}

TEST_CASE("VaryingDim shows at least two fiber dimensions on positive-weight atoms") {
  const auto m = generate<double>(spec(SystemKind::VaryingDim, 10, 0, 1, 9));
  std::set<std::size_t> dims;
  bool has_null = false;
  for (std::size_t i = 0; i < m.space.atoms(); ++i) {
    if (m.space.weight(i) > 0.0) dims.insert(m.space.dim(i));
    else has_null = true;
  }
  CHECK(dims.size() >= 2);
  CHECK(has_null);
}

TEST_CASE("field mismatch and oversized requests are structural errors") {
  CHECK_THROWS_AS(generate<double>(spec(SystemKind::RandomQR, 3, 3, 1, 0, Field::Complex)), StructuralError);
  CHECK_THROWS_AS(generate<double>(spec(SystemKind::RandomQR, 10, 3, 3)), StructuralError);
  CHECK_THROWS_AS(generate<double>(spec(SystemKind::Haar, 10, 8)), StructuralError);
  CHECK_THROWS_AS(generate<double>(spec(SystemKind::StandardBasis, 0)), StructuralError);
}

TEST_CASE("weighted QR columns are orthonormal for the given weights") {
  Vector<double> w(6);
  w << 0.5, 2.0, 1.0, 0.25, 3.0, 1.5;
  const auto q = weighted_random_orthonormal<double>(6, 4, w, 77);
  const Matrix<double> g = q.adjoint() * w.asDiagonal() * q;
  CHECK((g - Matrix<double>::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("spec JSON round trip") {
  const auto s = spec(SystemKind::TensorVector, 12, 16, 3, 99, Field::Complex);
  const nlohmann::json j = s;
  const auto back = j.get<SystemSpec>();
  CHECK(back.kind == s.kind);
  CHECK(back.n_functions == 12);
  CHECK(back.resolution == 16);
  CHECK(back.fiber_dim == 3);
  CHECK(back.seed == 99);
  CHECK(back.field == Field::Complex);
}
