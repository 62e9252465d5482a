#include "orthoseries/systems.hpp"

#include <bit>
#include <cmath>

#include <Eigen/QR>

#include "orthoseries/rng.hpp"

namespace orthoseries {

std::string to_string(SystemKind kind) {
  switch (kind) {
    case SystemKind::RandomQR: return "RandomQR";
    case SystemKind::Rademacher: return "Rademacher";
    case SystemKind::Haar: return "Haar";
    case SystemKind::StandardBasis: return "StandardBasis";
    case SystemKind::TensorVector: return "TensorVector";
    case SystemKind::VaryingDim: return "VaryingDim";
  }
  return "?";
}

SystemKind system_kind_from_string(const std::string& name) {
  for (auto kind : {SystemKind::RandomQR, SystemKind::Rademacher, SystemKind::Haar,
                    SystemKind::StandardBasis, SystemKind::TensorVector, SystemKind::VaryingDim}) {
    if (name == to_string(kind)) return kind;
  }
  throw StructuralError("unknown system kind '" + name + "'");
}

namespace {

std::size_t haar_grid(const SystemSpec& spec) {
  const std::size_t grid = spec.resolution == 0 ? std::bit_ceil(spec.n_functions) : spec.resolution;
  if (!std::has_single_bit(grid)) {
    throw StructuralError("Haar resolution " + std::to_string(grid) + " is not a power of two");
  }
  if (grid < spec.n_functions) {
    throw StructuralError("Haar resolution " + std::to_string(grid) + " cannot carry " +
                          std::to_string(spec.n_functions) + " functions");
  }
  return grid;
}

// Value of the n-th Haar function (0-based; n = 0 is the constant) on cell `cell` of `grid`.
double haar_value(std::size_t n, std::size_t cell, std::size_t grid) {
  if (n == 0) return 1.0;
  const int level = std::bit_width(n) - 1;
  const std::size_t shift = n - (std::size_t{1} << level);
  const std::size_t width = grid >> level;
  const std::size_t lo = shift * width;
  if (cell < lo || cell >= lo + width) return 0.0;
  const double height = std::ldexp(level % 2 == 0 ? 1.0 : std::sqrt(2.0), level / 2);
  return cell < lo + width / 2 ? height : -height;
}

template <typename T>
SystemModel<T> standard_basis(const SystemSpec& spec) {
  const std::size_t n = spec.n_functions;
  FiberedSpace space(MeasureSpace::counting(n), HilbertCollection::constant(n, 1, spec.field));
  return {std::move(space), OrthonormalSystem<T>(Matrix<T>::Identity(static_cast<Eigen::Index>(n),
                                                                     static_cast<Eigen::Index>(n)))};
}

template <typename T>
SystemModel<T> rademacher(const SystemSpec& spec) {
  const std::size_t n = spec.n_functions;
  if (n > kMaxRademacher) {
    throw StructuralError("Rademacher systems are limited to " + std::to_string(kMaxRademacher) +
                          " functions (grid 2^N)");
  }
  const std::size_t grid = spec.resolution == 0 ? (std::size_t{1} << n) : spec.resolution;
  if (!std::has_single_bit(grid)) {
    throw StructuralError("Rademacher resolution " + std::to_string(grid) + " is not a power of two");
  }
  if (grid < (std::size_t{1} << n)) {
    throw StructuralError("Rademacher resolution must be at least 2^N = " +
                          std::to_string(std::size_t{1} << n));
  }
  const int depth = std::bit_width(grid) - 1;
  FiberedSpace space(MeasureSpace::uniform(grid), HilbertCollection::constant(grid, 1, spec.field));
  Matrix<T> columns(static_cast<Eigen::Index>(grid), static_cast<Eigen::Index>(n));
  for (std::size_t k = 0; k < n; ++k) {
    const int bit = depth - 1 - static_cast<int>(k);
    for (std::size_t c = 0; c < grid; ++c) {
      columns(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(k)) =
          T(((c >> bit) & 1U) == 0 ? 1.0 : -1.0);
    }
  }
  return {std::move(space), OrthonormalSystem<T>(std::move(columns))};
}

template <typename T>
SystemModel<T> haar(const SystemSpec& spec) {
  const std::size_t grid = haar_grid(spec);
  FiberedSpace space(MeasureSpace::uniform(grid), HilbertCollection::constant(grid, 1, spec.field));
  Matrix<T> columns(static_cast<Eigen::Index>(grid), static_cast<Eigen::Index>(spec.n_functions));
  for (std::size_t k = 0; k < spec.n_functions; ++k) {
    for (std::size_t c = 0; c < grid; ++c) {
      columns(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(k)) = T(haar_value(k, c, grid));
    }
  }
  return {std::move(space), OrthonormalSystem<T>(std::move(columns))};
}

// phi_n = psi_n (Haar) times the fiber unit vector e_{n mod d}.
template <typename T>
SystemModel<T> tensor_vector(const SystemSpec& spec) {
  const std::size_t grid = haar_grid(spec);
  const std::size_t d = spec.fiber_dim;
  if (d == 0) throw StructuralError("TensorVector needs fiber_dim >= 1");
  FiberedSpace space(MeasureSpace::uniform(grid), HilbertCollection::constant(grid, d, spec.field));
  Matrix<T> columns = Matrix<T>::Zero(static_cast<Eigen::Index>(grid * d),
                                      static_cast<Eigen::Index>(spec.n_functions));
  for (std::size_t k = 0; k < spec.n_functions; ++k) {
    const std::size_t component = k % d;
    for (std::size_t c = 0; c < grid; ++c) {
      columns(static_cast<Eigen::Index>(c * d + component), static_cast<Eigen::Index>(k)) =
          T(haar_value(k, c, grid));
    }
  }
  return {std::move(space), OrthonormalSystem<T>(std::move(columns))};
}

template <typename T>
SystemModel<T> random_qr(const SystemSpec& spec) {
  const std::size_t atoms = spec.resolution;
  const std::size_t d = spec.fiber_dim;
  if (atoms == 0 || d == 0) throw StructuralError("RandomQR needs resolution >= 1 and fiber_dim >= 1");
  if (spec.n_functions > atoms * d) {
    throw StructuralError("RandomQR cannot fit " + std::to_string(spec.n_functions) +
                          " functions in dimension " + std::to_string(atoms * d));
  }
  FiberedSpace space(MeasureSpace::uniform(atoms), HilbertCollection::constant(atoms, d, spec.field));
  const Vector<double> weights =
      Vector<double>::Constant(static_cast<Eigen::Index>(atoms * d), 1.0 / static_cast<double>(atoms));
  return {std::move(space),
          OrthonormalSystem<T>(weighted_random_orthonormal<T>(atoms * d, spec.n_functions, weights, spec.seed))};
}

// Fiber dims cycle 1, 2, 3; weights cycle proportionally to 1, 2, 3, 4. When
// there are at least four atoms the last one is a null set carrying arbitrary values.
template <typename T>
SystemModel<T> varying_dim(const SystemSpec& spec) {
  const auto dims_for = [](std::size_t atoms) {
    std::vector<std::size_t> dims(atoms);
    for (std::size_t i = 0; i < atoms; ++i) dims[i] = 1 + i % 3;
    return dims;
  };
  const auto positive_dim = [&](std::size_t atoms) {
    std::size_t total = 0;
    const auto dims = dims_for(atoms);
    for (std::size_t i = 0; i < atoms; ++i) {
      if (!(atoms >= 4 && i + 1 == atoms)) total += dims[i];
    }
    return total;
  };
  std::size_t atoms = spec.resolution;
  if (atoms == 0) {
    atoms = 3;
    while (positive_dim(atoms) < spec.n_functions) ++atoms;
  }
  if (atoms < 3) throw StructuralError("VaryingDim needs at least 3 atoms");
  if (positive_dim(atoms) < spec.n_functions) {
    throw StructuralError("VaryingDim with " + std::to_string(atoms) + " atoms cannot fit " +
                          std::to_string(spec.n_functions) + " functions");
  }
  const bool null_atom = atoms >= 4;
  const std::size_t live = null_atom ? atoms - 1 : atoms;

  std::vector<double> weights(atoms, 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < live; ++i) total += static_cast<double>(1 + i % 4);
  for (std::size_t i = 0; i < live; ++i) weights[i] = static_cast<double>(1 + i % 4) / total;

  FiberedSpace space(MeasureSpace(weights), HilbertCollection(dims_for(atoms), spec.field));
  const std::size_t live_dim = space.offset(live - 1) + space.dim(live - 1);
  Vector<double> coord_weights(static_cast<Eigen::Index>(live_dim));
  for (std::size_t i = 0; i < live; ++i) {
    for (std::size_t c = 0; c < space.dim(i); ++c) {
      coord_weights(static_cast<Eigen::Index>(space.offset(i) + c)) = weights[i];
    }
  }
  Matrix<T> columns(static_cast<Eigen::Index>(space.total_dim()),
                    static_cast<Eigen::Index>(spec.n_functions));
  columns.topRows(static_cast<Eigen::Index>(live_dim)) =
      weighted_random_orthonormal<T>(live_dim, spec.n_functions, coord_weights, spec.seed);
  if (null_atom) {
    Rng rng(derive_seed(spec.seed, 0x6e756c6cULL));
    for (Eigen::Index r = static_cast<Eigen::Index>(live_dim); r < columns.rows(); ++r) {
      for (Eigen::Index c = 0; c < columns.cols(); ++c) columns(r, c) = T(3.0) * rng.gaussian<T>();
    }
  }
  return {std::move(space), OrthonormalSystem<T>(std::move(columns))};
}

}  // namespace

template <typename T>
Matrix<T> weighted_random_orthonormal(std::size_t rows, std::size_t cols,
                                      const Vector<double>& weights, std::uint64_t seed) {
  if (cols > rows) throw StructuralError("cannot orthonormalize more columns than rows");
  Rng rng(seed);
  Matrix<T> gaussian(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index c = 0; c < gaussian.cols(); ++c) {
    for (Eigen::Index r = 0; r < gaussian.rows(); ++r) gaussian(r, c) = rng.gaussian<T>();
  }
  Eigen::HouseholderQR<Matrix<T>> qr(gaussian);
  Matrix<T> q = qr.householderQ() * Matrix<T>::Identity(gaussian.rows(), gaussian.cols());
  for (Eigen::Index c = 0; c < q.cols(); ++c) {
    const T diag = qr.matrixQR()(c, c);
    const double magnitude = std::abs(diag);
    if (magnitude > 0.0) q.col(c) *= diag / magnitude;
  }
  for (Eigen::Index r = 0; r < q.rows(); ++r) q.row(r) /= std::sqrt(weights(r));
  return q;
}

template <typename T>
SystemModel<T> generate(const SystemSpec& spec) {
  if (spec.n_functions == 0) throw StructuralError("a system needs at least one function");
  if (spec.field != field_of<T>()) {
    throw StructuralError("system spec asks for a " + to_string(spec.field) + " field");
  }
  switch (spec.kind) {
    case SystemKind::StandardBasis: return standard_basis<T>(spec);
    case SystemKind::Rademacher: return rademacher<T>(spec);
    case SystemKind::Haar: return haar<T>(spec);
    case SystemKind::TensorVector: return tensor_vector<T>(spec);
    case SystemKind::RandomQR: return random_qr<T>(spec);
    case SystemKind::VaryingDim: return varying_dim<T>(spec);
  }
  throw StructuralError("unhandled system kind");
}

AnyModel generate_any(const SystemSpec& spec) {
  if (spec.field == Field::Real) return generate<double>(spec);
  return generate<Complex>(spec);
}

void to_json(nlohmann::json& j, const SystemSpec& spec) {
  j = nlohmann::json{{"kind", to_string(spec.kind)},
                     {"n_functions", spec.n_functions},
                     {"resolution", spec.resolution},
                     {"fiber_dim", spec.fiber_dim},
                     {"seed", spec.seed},
                     {"field", to_string(spec.field)}};
}

void from_json(const nlohmann::json& j, SystemSpec& spec) {
  spec = SystemSpec{};
  spec.kind = system_kind_from_string(j.at("kind").get<std::string>());
  spec.n_functions = j.at("n_functions").get<std::size_t>();
  spec.resolution = j.value("resolution", std::size_t{0});
  spec.fiber_dim = j.value("fiber_dim", std::size_t{1});
  spec.seed = j.value("seed", std::uint64_t{0});
  spec.field = field_from_string(j.value("field", std::string("real")));
}

template Matrix<double> weighted_random_orthonormal<double>(std::size_t, std::size_t,
                                                            const Vector<double>&, std::uint64_t);
template Matrix<Complex> weighted_random_orthonormal<Complex>(std::size_t, std::size_t,
                                                              const Vector<double>&, std::uint64_t);
template SystemModel<double> generate<double>(const SystemSpec&);
template SystemModel<Complex> generate<Complex>(const SystemSpec&);

}  // namespace orthoseries
