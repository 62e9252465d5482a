#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "orthoseries/direct_integral.hpp"

namespace orthoseries {

enum class SystemKind { RandomQR, Rademacher, Haar, StandardBasis, TensorVector, VaryingDim };

std::string to_string(SystemKind kind);
SystemKind system_kind_from_string(const std::string& name);

/// Recipe for a generated orthonormal system.
///
/// `resolution` means:
///   RandomQR      number of atoms M (weight 1/M each), N <= M * fiber_dim
///   Rademacher    dyadic grid size, a power of two >= 2^N (0 selects 2^N)
///   Haar          dyadic grid size, a power of two >= N (0 selects the smallest)
///   StandardBasis ignored; the grid is N atoms under counting measure
///   TensorVector  Haar grid size for the scalar factor (0 selects the smallest)
///   VaryingDim    number of atoms M >= 3 (0 selects the smallest that fits N)
struct SystemSpec {
  SystemKind kind = SystemKind::StandardBasis;
  std::size_t n_functions = 1;
  std::size_t resolution = 0;
  std::size_t fiber_dim = 1;
  std::uint64_t seed = 0;
  Field field = Field::Real;
};

/// Largest Rademacher system size accepted (the grid has 2^N atoms).
inline constexpr std::size_t kMaxRademacher = 24;

/// Generates the model for `spec`. Throws StructuralError on an invalid spec or
/// when T does not match spec.field.
template <typename T>
SystemModel<T> generate(const SystemSpec& spec);

AnyModel generate_any(const SystemSpec& spec);

/// Seeded Gaussian matrix orthonormalized by Householder QR, columns rescaled
/// so they are orthonormal for coordinate weights `weights` (all positive).
/// The triangular factor is normalized to a nonnegative real diagonal.
template <typename T>
Matrix<T> weighted_random_orthonormal(std::size_t rows, std::size_t cols,
                                      const Vector<double>& weights, std::uint64_t seed);

void to_json(nlohmann::json& j, const SystemSpec& spec);
void from_json(const nlohmann::json& j, SystemSpec& spec);

extern template SystemModel<double> generate<double>(const SystemSpec&);
extern template SystemModel<Complex> generate<Complex>(const SystemSpec&);

}  // namespace orthoseries
