#include "orthoseries/direct_integral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "orthoseries/rng.hpp"
#include "orthoseries/summation.hpp"

namespace orthoseries {

std::string to_string(Field field) { return field == Field::Real ? "real" : "complex"; }

Field field_from_string(const std::string& name) {
  if (name == "real") return Field::Real;
  if (name == "complex") return Field::Complex;
  throw StructuralError("unknown field '" + name + "' (expected real or complex)");
}

std::string to_string(EigenMethod method) {
  return method == EigenMethod::FullSymmetric ? "full_symmetric" : "lanczos";
}

MeasureSpace::MeasureSpace(std::vector<double> weights) : weights_(std::move(weights)) {
  if (weights_.empty()) throw StructuralError("measure space needs at least one atom");
  bool any_positive = false;
  CompensatedSum total;
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    const double w = weights_[i];
    if (!std::isfinite(w) || w < 0.0) {
      throw StructuralError("atom " + std::to_string(i) + " has invalid weight", i);
    }
    any_positive = any_positive || w > 0.0;
    total += w;
  }
  if (!any_positive) throw StructuralError("measure space has no atom of positive mass");
  total_mass_ = total.value();
}

MeasureSpace MeasureSpace::counting(std::size_t atoms) {
  return MeasureSpace(std::vector<double>(atoms, 1.0));
}

MeasureSpace MeasureSpace::uniform(std::size_t atoms) {
  return MeasureSpace(std::vector<double>(atoms, 1.0 / static_cast<double>(atoms)));
}

HilbertCollection::HilbertCollection(std::vector<std::size_t> dims, Field field)
    : dims_(std::move(dims)), field_(field) {
  for (std::size_t i = 0; i < dims_.size(); ++i) {
    if (dims_[i] == 0) throw StructuralError("atom " + std::to_string(i) + " has fiber dimension 0", i);
  }
}

HilbertCollection HilbertCollection::constant(std::size_t atoms, std::size_t dim, Field field) {
  return HilbertCollection(std::vector<std::size_t>(atoms, dim), field);
}

FiberedSpace::FiberedSpace(MeasureSpace measure, HilbertCollection fibers)
    : measure_(std::move(measure)), fibers_(std::move(fibers)) {
  if (measure_.size() != fibers_.size()) {
    throw StructuralError("measure has " + std::to_string(measure_.size()) +
                          " atoms but fiber collection has " + std::to_string(fibers_.size()));
  }
  offsets_.resize(fibers_.size() + 1, 0);
  for (std::size_t i = 0; i < fibers_.size(); ++i) offsets_[i + 1] = offsets_[i] + fibers_.dim(i);
}

void FiberedSpace::check_length(std::size_t length, const char* what) const {
  if (length == total_dim()) return;
  std::size_t atom = 0;
  while (atom < atoms() && offsets_[atom + 1] <= length) ++atom;
  if (atom == atoms()) atom = atoms() - 1;
  throw StructuralError(std::string(what) + " does not conform to the fiber collection at atom " +
                            std::to_string(atom) + " (length " + std::to_string(length) +
                            ", expected " + std::to_string(total_dim()) + ")",
                        atom);
}

template <typename T>
DirectIntegralElement<T> DirectIntegralElement<T>::from_blocks(
    const FiberedSpace& space, const std::vector<std::vector<T>>& blocks) {
  if (blocks.size() != space.atoms()) {
    throw StructuralError("element has " + std::to_string(blocks.size()) + " blocks for " +
                              std::to_string(space.atoms()) + " atoms",
                          std::min(blocks.size(), space.atoms()));
  }
  Vector<T> values(static_cast<Eigen::Index>(space.total_dim()));
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    if (blocks[i].size() != space.dim(i)) {
      throw StructuralError("block of atom " + std::to_string(i) + " has length " +
                                std::to_string(blocks[i].size()) + ", fiber dimension is " +
                                std::to_string(space.dim(i)),
                            i);
    }
    std::copy(blocks[i].begin(), blocks[i].end(), values.data() + space.offset(i));
  }
  return DirectIntegralElement(std::move(values));
}

template <typename T>
OrthonormalSystem<T> OrthonormalSystem<T>::from_elements(
    const FiberedSpace& space, const std::vector<DirectIntegralElement<T>>& elements) {
  Matrix<T> columns(static_cast<Eigen::Index>(space.total_dim()),
                    static_cast<Eigen::Index>(elements.size()));
  for (std::size_t n = 0; n < elements.size(); ++n) {
    space.check_length(elements[n].size(), "system element");
    columns.col(static_cast<Eigen::Index>(n)) = elements[n].values();
  }
  return OrthonormalSystem(std::move(columns));
}

template <typename T>
OrthonormalSystem<T> OrthonormalSystem<T>::truncated(std::size_t n) const {
  if (n > size()) throw StructuralError("cannot truncate a system of size " + std::to_string(size()) +
                                        " to " + std::to_string(n));
  return OrthonormalSystem(columns_.leftCols(static_cast<Eigen::Index>(n)));
}

template <typename T>
OrthonormalSystem<T> OrthonormalSystem<T>::padded(std::size_t n) const {
  if (n <= size()) return *this;
  Matrix<T> columns = Matrix<T>::Zero(columns_.rows(), static_cast<Eigen::Index>(n));
  columns.leftCols(columns_.cols()) = columns_;
  return OrthonormalSystem(std::move(columns));
}

template class DirectIntegralElement<double>;
template class DirectIntegralElement<Complex>;
template class OrthonormalSystem<double>;
template class OrthonormalSystem<Complex>;

namespace {

template <typename T>
void check_field(const FiberedSpace& space) {
  if (space.field() != field_of<T>()) {
    throw StructuralError("scalar type does not match the " + to_string(space.field()) +
                          " fiber collection");
  }
}

// Hermitian Lanczos with full reorthogonalization. Returns Ritz extremes, which
// bracket inward: lower >= lambda_min, upper <= lambda_max.
template <typename T>
std::pair<double, double> lanczos_extremes(const Matrix<T>& a) {
  const Eigen::Index n = a.rows();
  const Eigen::Index steps = std::min<Eigen::Index>(n, 300);
  Matrix<T> basis(n, steps);
  std::vector<double> alpha;
  std::vector<double> beta;

  Rng rng(0x6c616e637a6f73ULL);
  Vector<T> v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = T(1.0) + T(0.01 * rng.normal());
  v /= v.norm();

  for (Eigen::Index j = 0; j < steps; ++j) {
    basis.col(j) = v;
    Vector<T> w = a * v;
    const double aj = scalar::real(v.dot(w));
    alpha.push_back(aj);
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index i = 0; i <= j; ++i) {
        const T proj = basis.col(i).dot(w);
        w -= proj * basis.col(i);
      }
    }
    const double bj = w.norm();
    if (j + 1 == steps || bj <= 1e-12 * std::max(1.0, std::abs(aj))) break;
    beta.push_back(bj);
    v = w / bj;
  }

  const auto m = static_cast<Eigen::Index>(alpha.size());
  Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i) tri(i, i) = alpha[static_cast<std::size_t>(i)];
  for (Eigen::Index i = 0; i + 1 < m; ++i) {
    tri(i, i + 1) = beta[static_cast<std::size_t>(i)];
    tri(i + 1, i) = beta[static_cast<std::size_t>(i)];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(tri, Eigen::EigenvaluesOnly);
  return {solver.eigenvalues().minCoeff(), solver.eigenvalues().maxCoeff()};
}

}  // namespace

double profile_l2(std::span<const double> profile, const MeasureSpace& measure) {
  CompensatedSum total;
  for (std::size_t i = 0; i < profile.size(); ++i) {
    const double w = measure.weight(i);
    if (w > 0.0) total += w * profile[i] * profile[i];
  }
  return std::sqrt(total.value());
}

template <typename T>
T inner_product(const DirectIntegralElement<T>& f, const DirectIntegralElement<T>& g,
                const FiberedSpace& space) {
  check_field<T>(space);
  space.check_length(f.size(), "first element");
  space.check_length(g.size(), "second element");
  CompensatedSum re;
  CompensatedSum im;
  for (std::size_t i = 0; i < space.atoms(); ++i) {
    const double w = space.weight(i);
    if (w == 0.0) continue;
    T local{};
    const T* fp = f.values().data() + space.offset(i);
    const T* gp = g.values().data() + space.offset(i);
    for (std::size_t c = 0; c < space.dim(i); ++c) local += fp[c] * scalar::conj(gp[c]);
    if constexpr (is_complex_v<T>) {
      re += w * local.real();
      im += w * local.imag();
    } else {
      re += w * local;
    }
  }
  if constexpr (is_complex_v<T>) {
    return T(re.value(), im.value());
  } else {
    return re.value();
  }
}

template <typename T>
std::vector<double> pointwise_norms(const DirectIntegralElement<T>& f, const FiberedSpace& space) {
  space.check_length(f.size(), "element");
  std::vector<double> out(space.atoms());
  for (std::size_t i = 0; i < space.atoms(); ++i) {
    double s = 0.0;
    for (const T& v : f.block(space, i)) s += scalar::abs2(v);
    out[i] = std::sqrt(s);
  }
  return out;
}

template <typename T>
double norm(const DirectIntegralElement<T>& f, const FiberedSpace& space) {
  check_field<T>(space);
  space.check_length(f.size(), "element");
  CompensatedSum total;
  for (std::size_t i = 0; i < space.atoms(); ++i) {
    const double w = space.weight(i);
    if (w == 0.0) continue;
    double s = 0.0;
    for (const T& v : f.block(space, i)) s += scalar::abs2(v);
    total += w * s;
  }
  return std::sqrt(total.value());
}

template <typename T>
Matrix<T> gram_entries(const OrthonormalSystem<T>& system, const FiberedSpace& space) {
  check_field<T>(space);
  if (system.size() == 0) throw StructuralError("Gram matrix of an empty system");
  space.check_length(system.rows(), "system");

  Vector<double> root_weights(static_cast<Eigen::Index>(space.total_dim()));
  for (std::size_t i = 0; i < space.atoms(); ++i) {
    const double rw = std::sqrt(space.weight(i));
    for (std::size_t c = 0; c < space.dim(i); ++c) {
      root_weights(static_cast<Eigen::Index>(space.offset(i) + c)) = rw;
    }
  }
  const Matrix<T> scaled = root_weights.asDiagonal() * system.matrix();
  const auto n = static_cast<Eigen::Index>(system.size());
  // (B^H B)(m, n) = <phi_n, phi_m>; the Gram matrix is its conjugate.
  Matrix<T> product = Matrix<T>::Zero(n, n);
  product.template selfadjointView<Eigen::Lower>().rankUpdate(scaled.adjoint());
  Matrix<T> gram(n, n);
  for (Eigen::Index col = 0; col < n; ++col) {
    for (Eigen::Index row = col; row < n; ++row) {
      const T v = product(row, col);
      gram(col, row) = v;
      gram(row, col) = scalar::conj(v);
    }
    if constexpr (is_complex_v<T>) gram(col, col) = T(product(col, col).real(), 0.0);
  }
  return gram;
}

template <typename T>
std::pair<double, double> extremal_eigenvalues(const Matrix<T>& hermitian, EigenMethod method) {
  if (method == EigenMethod::FullSymmetric) {
    Eigen::SelfAdjointEigenSolver<Matrix<T>> solver(hermitian, Eigen::EigenvaluesOnly);
    return {solver.eigenvalues().minCoeff(), solver.eigenvalues().maxCoeff()};
  }
  return lanczos_extremes(hermitian);
}

template <typename T>
GramReport<T> gram_matrix(const OrthonormalSystem<T>& system, const FiberedSpace& space) {
  GramReport<T> report;
  report.gram = gram_entries(system, space);
  const auto n = report.gram.rows();
  for (Eigen::Index m = 0; m < n; ++m) {
    for (Eigen::Index k = 0; k < n; ++k) {
      const double dev = std::abs(report.gram(m, k) - (m == k ? T(1.0) : T(0.0)));
      if (m == k) {
        report.max_diag_dev = std::max(report.max_diag_dev, dev);
      } else {
        report.max_offdiag_abs = std::max(report.max_offdiag_abs, dev);
      }
    }
  }
  report.method = system.size() <= kFullEigenLimit ? EigenMethod::FullSymmetric : EigenMethod::Lanczos;
  std::tie(report.riesz_lower, report.riesz_upper) = extremal_eigenvalues(report.gram, report.method);
  return report;
}

template <typename T>
OnsValidation<T> validate_ons(const OrthonormalSystem<T>& system, const FiberedSpace& space,
                              double tol) {
  if (!(tol > 0.0)) throw StructuralError("validate_ons needs a positive tolerance");
  OnsValidation<T> out;
  out.report = gram_matrix(system, space);
  out.orthonormal = std::max(out.report.max_diag_dev, out.report.max_offdiag_abs) <= tol;
  return out;
}

#define ORTHOSERIES_INSTANTIATE(T)                                                                  \
  template T inner_product<T>(const DirectIntegralElement<T>&, const DirectIntegralElement<T>&,    \
                              const FiberedSpace&);                                                 \
  template double norm<T>(const DirectIntegralElement<T>&, const FiberedSpace&);                    \
  template std::vector<double> pointwise_norms<T>(const DirectIntegralElement<T>&,                  \
                                                  const FiberedSpace&);                             \
  template Matrix<T> gram_entries<T>(const OrthonormalSystem<T>&, const FiberedSpace&);             \
  template std::pair<double, double> extremal_eigenvalues<T>(const Matrix<T>&, EigenMethod);        \
  template GramReport<T> gram_matrix<T>(const OrthonormalSystem<T>&, const FiberedSpace&);          \
  template OnsValidation<T> validate_ons<T>(const OrthonormalSystem<T>&, const FiberedSpace&, double);

ORTHOSERIES_INSTANTIATE(double)
ORTHOSERIES_INSTANTIATE(Complex)

#undef ORTHOSERIES_INSTANTIATE

}  // namespace orthoseries
