#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include <Eigen/Core>

namespace orthoseries {

using Complex = std::complex<double>;

enum class Field { Real, Complex };

template <typename T>
inline constexpr bool is_complex_v = std::is_same_v<T, Complex>;

template <typename T>
constexpr Field field_of() noexcept {
  return is_complex_v<T> ? Field::Complex : Field::Real;
}

std::string to_string(Field field);
Field field_from_string(const std::string& name);

namespace scalar {

inline double conj(double x) noexcept { return x; }
inline Complex conj(const Complex& z) noexcept { return std::conj(z); }
inline double abs2(double x) noexcept { return x * x; }
inline double abs2(const Complex& z) noexcept { return z.real() * z.real() + z.imag() * z.imag(); }
inline double real(double x) noexcept { return x; }
inline double real(const Complex& z) noexcept { return z.real(); }

}  // namespace scalar

template <typename T>
using Vector = Eigen::Matrix<T, Eigen::Dynamic, 1>;
template <typename T>
using Matrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;

/// Shape or contract violation. Carries the offending atom index when one exists.
class StructuralError : public std::invalid_argument {
 public:
  explicit StructuralError(const std::string& what, std::optional<std::size_t> atom = std::nullopt)
      : std::invalid_argument(what), atom_(atom) {}

  std::optional<std::size_t> atom() const noexcept { return atom_; }

 private:
  std::optional<std::size_t> atom_;
};

/// Finite atomic measure space. Atom i carries mass weights()[i] >= 0; at least one is positive.
class MeasureSpace {
 public:
  explicit MeasureSpace(std::vector<double> weights);

  /// Counting measure on `atoms` points.
  static MeasureSpace counting(std::size_t atoms);
  /// `atoms` points of mass 1/atoms each.
  static MeasureSpace uniform(std::size_t atoms);

  std::size_t size() const noexcept { return weights_.size(); }
  double weight(std::size_t atom) const { return weights_.at(atom); }
  const std::vector<double>& weights() const noexcept { return weights_; }
  double total_mass() const noexcept { return total_mass_; }

 private:
  std::vector<double> weights_;
  double total_mass_ = 0.0;
};

/// Fiber dimensions d_i = dim H(x_i) and the common scalar field.
class HilbertCollection {
 public:
  HilbertCollection(std::vector<std::size_t> dims, Field field);

  static HilbertCollection constant(std::size_t atoms, std::size_t dim, Field field);

  std::size_t size() const noexcept { return dims_.size(); }
  std::size_t dim(std::size_t atom) const { return dims_.at(atom); }
  const std::vector<std::size_t>& dims() const noexcept { return dims_; }
  Field field() const noexcept { return field_; }

 private:
  std::vector<std::size_t> dims_;
  Field field_;
};

/// A measure space together with its fibers. Elements are stored as one flat
/// vector: block i occupies [offset(i), offset(i) + dim(i)).
class FiberedSpace {
 public:
  FiberedSpace(MeasureSpace measure, HilbertCollection fibers);

  const MeasureSpace& measure() const noexcept { return measure_; }
  const HilbertCollection& fibers() const noexcept { return fibers_; }
  Field field() const noexcept { return fibers_.field(); }

  std::size_t atoms() const noexcept { return measure_.size(); }
  std::size_t dim(std::size_t atom) const { return fibers_.dim(atom); }
  double weight(std::size_t atom) const { return measure_.weight(atom); }
  std::size_t offset(std::size_t atom) const { return offsets_.at(atom); }
  std::size_t total_dim() const noexcept { return offsets_.back(); }

  /// Throws StructuralError naming the first atom whose block does not fit in `length` entries.
  void check_length(std::size_t length, const char* what) const;

 private:
  MeasureSpace measure_;
  HilbertCollection fibers_;
  std::vector<std::size_t> offsets_;
};

/// An element of the direct integral: per-atom vectors stored contiguously.
template <typename T>
class DirectIntegralElement {
 public:
  DirectIntegralElement() = default;
  explicit DirectIntegralElement(Vector<T> values) : values_(std::move(values)) {}

  static DirectIntegralElement zero(const FiberedSpace& space) {
    return DirectIntegralElement(Vector<T>::Zero(static_cast<Eigen::Index>(space.total_dim())));
  }

  /// Builds from per-atom blocks; a block of the wrong length is reported by atom index.
  static DirectIntegralElement from_blocks(const FiberedSpace& space,
                                           const std::vector<std::vector<T>>& blocks);

  const Vector<T>& values() const noexcept { return values_; }
  Vector<T>& values() noexcept { return values_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(values_.size()); }

  std::span<const T> block(const FiberedSpace& space, std::size_t atom) const {
    return {values_.data() + space.offset(atom), space.dim(atom)};
  }

 private:
  Vector<T> values_;
};

/// An ordered list of elements stored as the columns of a (total_dim x N) matrix.
/// Orthonormality is not enforced here; see validate_ons.
template <typename T>
class OrthonormalSystem {
 public:
  OrthonormalSystem() = default;
  explicit OrthonormalSystem(Matrix<T> columns) : columns_(std::move(columns)) {}

  static OrthonormalSystem from_elements(const FiberedSpace& space,
                                         const std::vector<DirectIntegralElement<T>>& elements);

  std::size_t size() const noexcept { return static_cast<std::size_t>(columns_.cols()); }
  std::size_t rows() const noexcept { return static_cast<std::size_t>(columns_.rows()); }
  const Matrix<T>& matrix() const noexcept { return columns_; }

  /// Pointer to the flat values of element n (0-based).
  const T* column(std::size_t n) const { return columns_.data() + n * rows(); }

  DirectIntegralElement<T> element(std::size_t n) const {
    return DirectIntegralElement<T>(columns_.col(static_cast<Eigen::Index>(n)));
  }

  /// First `n` elements.
  OrthonormalSystem truncated(std::size_t n) const;
  /// Appends zero elements up to `n` in total. Used only where the matching coefficients vanish.
  OrthonormalSystem padded(std::size_t n) const;

 private:
  Matrix<T> columns_;
};

template <typename T>
struct SystemModel {
  FiberedSpace space;
  OrthonormalSystem<T> system;
};

using AnyModel = std::variant<SystemModel<double>, SystemModel<Complex>>;

enum class EigenMethod { FullSymmetric, Lanczos };

std::string to_string(EigenMethod method);

template <typename T>
struct GramReport {
  Matrix<T> gram;
  double max_offdiag_abs = 0.0;
  double max_diag_dev = 0.0;
  double riesz_lower = 0.0;
  double riesz_upper = 0.0;
  EigenMethod method = EigenMethod::FullSymmetric;
};

/// Absolute tolerance on unit-diagonal-scaled Gram eigenvalues when deciding
/// whether Riesz bounds equal (1, 1).
inline constexpr double kRieszTolerance = 1e-9;

/// Systems of at most this size get a full symmetric eigendecomposition.
inline constexpr std::size_t kFullEigenLimit = 512;

template <typename T>
struct OnsValidation {
  bool orthonormal = false;
  GramReport<T> report;
};

/// sum_i mu_i <f_i, g_i>, conjugate-linear in g.
template <typename T>
T inner_product(const DirectIntegralElement<T>& f, const DirectIntegralElement<T>& g,
                 const FiberedSpace& space);

template <typename T>
double norm(const DirectIntegralElement<T>& f, const FiberedSpace& space);

/// Pointwise fiber norm ||f(x_i)|| at every atom (zero-weight atoms included).
template <typename T>
std::vector<double> pointwise_norms(const DirectIntegralElement<T>& f, const FiberedSpace& space);

/// L2 norm under mu of a nonnegative per-atom profile.
double profile_l2(std::span<const double> profile, const MeasureSpace& measure);

/// Gram matrix gram(m, n) = <phi_m, phi_n> with extremal eigenvalues as Riesz bounds.
/// Systems larger than kFullEigenLimit use Lanczos with full reorthogonalization.
template <typename T>
GramReport<T> gram_matrix(const OrthonormalSystem<T>& system, const FiberedSpace& space);

/// Gram matrix entries only, no spectrum.
template <typename T>
Matrix<T> gram_entries(const OrthonormalSystem<T>& system, const FiberedSpace& space);

/// Extremal eigenvalues (lower, upper) of a Hermitian positive semidefinite matrix.
template <typename T>
std::pair<double, double> extremal_eigenvalues(const Matrix<T>& hermitian, EigenMethod method);

template <typename T>
OnsValidation<T> validate_ons(const OrthonormalSystem<T>& system, const FiberedSpace& space,
                              double tol);

extern template class DirectIntegralElement<double>;
extern template class DirectIntegralElement<Complex>;
extern template class OrthonormalSystem<double>;
extern template class OrthonormalSystem<Complex>;

}  // namespace orthoseries
