#include "orthoseries/majorants.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <sstream>

#include "orthoseries/rng.hpp"
#include "orthoseries/summation.hpp"

namespace orthoseries {

std::string to_string(PlanProvenance p) {
  switch (p) {
    case PlanProvenance::Identity: return "Identity";
    case PlanProvenance::Explicit: return "Explicit";
    case PlanProvenance::SeededShuffle: return "SeededShuffle";
    case PlanProvenance::GreedyAdversarial: return "GreedyAdversarial";
    case PlanProvenance::BlockReversal: return "BlockReversal";
  }
  return "?";
}

std::string to_string(DeltaMode mode) { return mode == DeltaMode::Exact ? "exact" : "one_sided_bound"; }

PermutationPlan PermutationPlan::identity(std::size_t n) {
  PermutationPlan plan;
  plan.sigma.resize(n);
  std::iota(plan.sigma.begin(), plan.sigma.end(), std::size_t{0});
  return plan;
}

PermutationPlan PermutationPlan::seeded_shuffle(std::size_t n, std::uint64_t seed) {
  PermutationPlan plan = identity(n);
  plan.provenance = PlanProvenance::SeededShuffle;
  plan.seed = seed;
  Rng rng(seed);
  for (std::size_t i = n; i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.below(i));
    std::swap(plan.sigma[i - 1], plan.sigma[j]);
  }
  return plan;
}

PermutationPlan PermutationPlan::block_reversal(std::size_t n) {
  PermutationPlan plan = identity(n);
  plan.provenance = PlanProvenance::BlockReversal;
  if (n < 3) return plan;
  for (const auto& b : tandori_blocks(n).blocks) {
    std::reverse(plan.sigma.begin() + static_cast<std::ptrdiff_t>(b.first - 1),
                 plan.sigma.begin() + static_cast<std::ptrdiff_t>(b.last));
  }
  return plan;
}

PermutationPlan PermutationPlan::explicit_plan(std::vector<std::size_t> sigma) {
  PermutationPlan plan;
  plan.sigma = std::move(sigma);
  plan.provenance = PlanProvenance::Explicit;
  plan.validate();
  return plan;
}

void PermutationPlan::validate() const {
  std::vector<bool> seen(sigma.size(), false);
  for (std::size_t pos = 0; pos < sigma.size(); ++pos) {
    const std::size_t v = sigma[pos];
    if (v >= sigma.size() || seen[v]) {
      throw StructuralError("plan is not a permutation: position " + std::to_string(pos + 1) +
                            " maps to " + std::to_string(v + 1));
    }
    seen[v] = true;
  }
}

namespace {

template <typename T>
void check_inputs(const OrthonormalSystem<T>& system, std::span<const T> a, std::size_t n,
                  const FiberedSpace& space) {
  if (space.field() != field_of<T>()) throw StructuralError("scalar type does not match the fiber field");
  space.check_length(system.rows(), "system");
  if (n == 0) throw StructuralError("majorant needs N >= 1");
  if (n > system.size()) {
    throw StructuralError("N = " + std::to_string(n) + " exceeds system size " + std::to_string(system.size()));
  }
  if (a.size() < n) {
    throw StructuralError("coefficient list has length " + std::to_string(a.size()) + " < N = " +
                          std::to_string(n));
  }
}

template <typename T>
void axpy(T coeff, const T* column, T* out, std::size_t length) {
  for (std::size_t c = 0; c < length; ++c) out[c] += coeff * column[c];
}

template <typename T>
double block_norm2(const T* values, std::size_t dim) {
  double s = 0.0;
  for (std::size_t c = 0; c < dim; ++c) s += scalar::abs2(values[c]);
  return s;
}

// Streaming majorant over the series whose position p carries term order(p).
template <typename T, typename Order>
MajorantProfile scan_majorant(const OrthonormalSystem<T>& system, std::span<const T> a, std::size_t n,
                              const FiberedSpace& space, Order order) {
  const std::size_t atoms = space.atoms();
  const std::size_t length = space.total_dim();
  std::vector<T> prefix(length, T{});
  std::vector<double> best(atoms, -1.0);
  MajorantProfile out;
  out.argmax_prefix.assign(atoms, 0);
  for (std::size_t pos = 0; pos < n; ++pos) {
    const std::size_t idx = order(pos);
    const T coeff = a[idx];
    if (coeff == T{} && pos > 0) continue;
    axpy(coeff, system.column(idx), prefix.data(), length);
    for (std::size_t i = 0; i < atoms; ++i) {
      const double s = block_norm2(prefix.data() + space.offset(i), space.dim(i));
      if (s > best[i]) {
        best[i] = s;
        out.argmax_prefix[i] = pos + 1;
      }
    }
  }
  out.values.resize(atoms);
  for (std::size_t i = 0; i < atoms; ++i) out.values[i] = std::sqrt(best[i]);
  out.l2_norm = profile_l2(out.values, space.measure());
  return out;
}

double log2sq(double x) {
  const double l = std::log2(x);
  return l * l;
}

}  // namespace

template <typename T>
DirectIntegralElement<T> prefix_sum(const OrthonormalSystem<T>& system, std::span<const T> a,
                                    std::size_t j) {
  if (j == 0 || j > system.size()) {
    throw StructuralError("prefix length " + std::to_string(j) + " outside [1, " +
                          std::to_string(system.size()) + "]");
  }
  if (a.size() < j) throw StructuralError("coefficient list shorter than the prefix");
  Vector<T> values = Vector<T>::Zero(static_cast<Eigen::Index>(system.rows()));
  for (std::size_t n = 0; n < j; ++n) axpy(a[n], system.column(n), values.data(), system.rows());
  return DirectIntegralElement<T>(std::move(values));
}

template <typename T>
MajorantProfile majorant(const OrthonormalSystem<T>& system, std::span<const T> a, std::size_t n,
                         const FiberedSpace& space) {
  check_inputs(system, a, n, space);
  return scan_majorant(system, a, n, space, [](std::size_t pos) { return pos; });
}

template <typename T>
MajorantProfile permuted_majorant(const OrthonormalSystem<T>& system, std::span<const T> a,
                                  const PermutationPlan& plan, std::size_t n,
                                  const FiberedSpace& space) {
  check_inputs(system, a, n, space);
  if (plan.size() != n) {
    throw StructuralError("plan covers " + std::to_string(plan.size()) + " indices, N = " + std::to_string(n));
  }
  plan.validate();
  return scan_majorant(system, a, n, space, [&](std::size_t pos) { return plan.sigma[pos]; });
}

DyadicDecomposition dyadic_decomposition(std::uint64_t j, unsigned r) {
  if (r > 62) throw StructuralError("dyadic depth r must be at most 62");
  const std::uint64_t top = std::uint64_t{1} << r;
  if (j < 1 || j > top) {
    throw StructuralError("j = " + std::to_string(j) + " outside [1, 2^" + std::to_string(r) + "]");
  }
  DyadicDecomposition d;
  d.j = j;
  d.r = r;
  std::uint64_t lo = 0;
  for (unsigned k = 0; k <= r; ++k) {
    const int bit = static_cast<int>((j >> (r - k)) & 1U);
    d.bits.push_back(bit);
    if (bit != 0) {
      const std::uint64_t hi = lo + (std::uint64_t{1} << (r - k));
      d.blocks.push_back({lo, hi});
      lo = hi;
    }
  }
  return d;
}

std::string format_blocks(const DyadicDecomposition& d) {
  std::ostringstream os;
  for (std::size_t i = 0; i < d.blocks.size(); ++i) {
    if (i > 0) os << ' ';
    os << '(' << d.blocks[i].lo << ',' << d.blocks[i].hi << ']';
  }
  return os.str();
}

template <typename T>
BoundPair dyadic_pointwise_bound(std::span<const T> vectors, std::size_t dim, unsigned r) {
  if (dim == 0 || vectors.size() % dim != 0) {
    throw StructuralError("vectors do not share the fiber dimension " + std::to_string(dim));
  }
  if (r > 24) throw StructuralError("dyadic depth r must be at most 24");
  const std::size_t j = vectors.size() / dim;
  const std::size_t top = std::size_t{1} << r;
  if (j < 1 || j > top) {
    throw StructuralError("j = " + std::to_string(j) + " outside [1, 2^" + std::to_string(r) + "]");
  }
  // Level r holds the single vectors, zero-padded to 2^r; each coarser level sums pairs.
  std::vector<T> level(top * dim, T{});
  std::copy(vectors.begin(), vectors.end(), level.begin());

  std::vector<T> total(dim, T{});
  for (std::size_t n = 0; n < j; ++n) {
    for (std::size_t c = 0; c < dim; ++c) total[c] += vectors[n * dim + c];
  }
  BoundPair out;
  out.lhs = block_norm2(total.data(), dim);

  CompensatedSum blocks;
  for (std::size_t count = top;; count /= 2) {
    for (std::size_t p = 0; p < count; ++p) blocks += block_norm2(level.data() + p * dim, dim);
    if (count == 1) break;
    for (std::size_t p = 0; p < count / 2; ++p) {
      for (std::size_t c = 0; c < dim; ++c) {
        level[p * dim + c] = level[2 * p * dim + c] + level[(2 * p + 1) * dim + c];
      }
    }
  }
  out.rhs = static_cast<double>(r + 1) * blocks.value();
  return out;
}

std::size_t dyadic_complete_size(std::size_t n) {
  std::size_t m = 1;
  while (m < n) m = 2 * m + 1;
  return m;
}

template <typename T>
ChainingDiagnostics chaining_diagnostics(const OrthonormalSystem<T>& system, std::span<const T> a,
                                         std::size_t n, const FiberedSpace& space) {
  if (n == 0 || !std::has_single_bit(n + 1)) {
    throw StructuralError("chaining diagnostics need N = 2^(K+1) - 1; zero-pad the coefficients to N = " +
                          std::to_string(dyadic_complete_size(std::max<std::size_t>(n, 1))));
  }
  check_inputs(system, a, n, space);
  const std::size_t atoms = space.atoms();
  const std::size_t length = space.total_dim();
  const MeasureSpace& mu = space.measure();

  ChainingDiagnostics d;
  d.levels = static_cast<unsigned>(std::bit_width(n));

  std::vector<T> prefix(length, T{});
  std::vector<T> block(length, T{});
  std::vector<double> full_best(atoms, 0.0);
  std::vector<double> dyadic_best(atoms, 0.0);  // includes the empty prefix
  std::vector<double> block_best(atoms, 0.0);
  std::vector<double> circ_sup(atoms, 0.0);
  std::vector<double> circ_sum_sq(atoms, 0.0);
  std::vector<double> pointwise(atoms, 0.0);

  CompensatedSum truncated_L;
  for (unsigned k = 0; k < d.levels; ++k) {
    const std::size_t first = std::size_t{1} << k;  // 1-based
    const std::size_t last = 2 * first - 1;
    std::fill(block.begin(), block.end(), T{});
    std::fill(block_best.begin(), block_best.end(), 0.0);
    CompensatedSum energy;
    for (std::size_t idx = first; idx <= last; ++idx) {
      const T coeff = a[idx - 1];
      energy += scalar::abs2(coeff);
      truncated_L += scalar::abs2(coeff) * log2sq(static_cast<double>(idx) + 1.0);
      const T* column = system.column(idx - 1);
      axpy(coeff, column, prefix.data(), length);
      axpy(coeff, column, block.data(), length);
      for (std::size_t i = 0; i < atoms; ++i) {
        const double full = std::sqrt(block_norm2(prefix.data() + space.offset(i), space.dim(i)));
        const double part = std::sqrt(block_norm2(block.data() + space.offset(i), space.dim(i)));
        full_best[i] = std::max(full_best[i], full);
        block_best[i] = std::max(block_best[i], part);
      }
    }
    // prefix now ends at 2^(k+1) - 1, block equals chi_k.
    for (std::size_t i = 0; i < atoms; ++i) {
      pointwise[i] = std::sqrt(block_norm2(block.data() + space.offset(i), space.dim(i)));
      dyadic_best[i] = std::max(dyadic_best[i],
                                std::sqrt(block_norm2(prefix.data() + space.offset(i), space.dim(i))));
    }
    d.chi_norms.push_back(profile_l2(pointwise, mu));
    d.chi_block_energy.push_back(energy.value());
    if (k >= 1) {
      d.s_circ_norms.push_back(profile_l2(block_best, mu));
      for (std::size_t i = 0; i < atoms; ++i) {
        circ_sup[i] = std::max(circ_sup[i], block_best[i]);
        circ_sum_sq[i] += block_best[i] * block_best[i];
      }
    }
  }

  d.majorant_l2 = profile_l2(full_best, mu);
  d.s_star_dyadic_l2 = profile_l2(dyadic_best, mu);
  d.s_circ_l2 = profile_l2(circ_sup, mu);
  d.truncated_L = truncated_L.value();

  CompensatedSum chi_sum;
  for (double v : d.chi_norms) chi_sum += v;
  CompensatedSum circ_sq;
  for (double v : d.s_circ_norms) circ_sq += v * v;
  const double root_L = std::sqrt(d.truncated_L);

  d.bound_15 = {chi_sum.value(), 2.0 * root_L};
  d.bound_19 = {d.s_star_dyadic_l2, chi_sum.value()};
  d.bound_20 = {circ_sq.value(), 4.0 * d.truncated_L};
  d.bound_4 = {d.majorant_l2, 4.0 * root_L};
  d.triangle = {d.majorant_l2, d.s_star_dyadic_l2 + d.s_circ_l2};
  d.s_circ_square = {d.s_circ_l2 * d.s_circ_l2, circ_sq.value()};
  return d;
}

namespace {

struct BlockScratch {
  std::size_t k = 0;
  std::uint64_t first = 0;
  std::uint64_t last = 0;
  std::size_t count = 0;
  DeltaMode mode = DeltaMode::Exact;
  bool scalar_fast = false;
  std::vector<double> one_sided;    // sup_q ||S_q|| per atom
  std::vector<double> low, high;    // real 1-d fibers: running min / max
  std::size_t stored = 0;
};

}  // namespace

template <typename T>
std::vector<DeltaBlockEntry> tandori_deltas(const OrthonormalSystem<T>& system, std::span<const T> a,
                                            const PermutationPlan& plan, std::size_t n,
                                            const FiberedSpace& space) {
  check_inputs(system, a, n, space);
  if (plan.size() != n) {
    throw StructuralError("plan covers " + std::to_string(plan.size()) + " indices, N = " + std::to_string(n));
  }
  plan.validate();
  if (n < 3) return {};

  const TandoriBlocks tb = tandori_blocks(n);
  const std::size_t atoms = space.atoms();
  const std::size_t length = space.total_dim();

  bool unit_real = !is_complex_v<T>;
  for (std::size_t i = 0; i < atoms && unit_real; ++i) unit_real = space.dim(i) == 1;

  std::vector<BlockScratch> scratch(tb.blocks.size());
  std::vector<int> block_index(n + 1, -1);
  std::vector<std::vector<T>> prefixes(tb.blocks.size());
  std::vector<std::vector<T>> points(tb.blocks.size());  // exact mode, general fibers
  for (std::size_t b = 0; b < tb.blocks.size(); ++b) {
    auto& s = scratch[b];
    s.k = tb.blocks[b].k;
    s.first = tb.blocks[b].first;
    s.last = tb.blocks[b].last;
    s.count = static_cast<std::size_t>(s.last - s.first + 1);
    for (std::uint64_t idx = s.first; idx <= s.last; ++idx) block_index[idx] = static_cast<int>(b);
    const double range = static_cast<double>(s.count);
    const bool affordable = range * range * static_cast<double>(length) <= kExactDeltaWork &&
                            (range + 1.0) * static_cast<double>(length) <= static_cast<double>(1 << 26);
    s.scalar_fast = unit_real;
    s.mode = s.count <= kExactDeltaRange && (unit_real || affordable) ? DeltaMode::Exact
                                                                       : DeltaMode::OneSidedBound;
    s.one_sided.assign(atoms, 0.0);
    prefixes[b].assign(length, T{});
    if (s.mode == DeltaMode::Exact) {
      if (unit_real) {
        s.low.assign(atoms, 0.0);
        s.high.assign(atoms, 0.0);
      } else {
        points[b].assign((s.count + 1) * length, T{});
        s.stored = 1;
      }
    }
  }

  for (std::size_t pos = 0; pos < n; ++pos) {
    const std::size_t idx = plan.sigma[pos];
    const int b = block_index[idx + 1];
    if (b < 0) continue;
    auto& s = scratch[static_cast<std::size_t>(b)];
    auto& prefix = prefixes[static_cast<std::size_t>(b)];
    axpy(a[idx], system.column(idx), prefix.data(), length);
    for (std::size_t i = 0; i < atoms; ++i) {
      const double norm = std::sqrt(block_norm2(prefix.data() + space.offset(i), space.dim(i)));
      s.one_sided[i] = std::max(s.one_sided[i], norm);
    }
    if (s.mode != DeltaMode::Exact) continue;
    if (s.scalar_fast) {
      for (std::size_t i = 0; i < atoms; ++i) {
        const double v = scalar::real(prefix[i]);
        s.low[i] = std::min(s.low[i], v);
        s.high[i] = std::max(s.high[i], v);
      }
    } else {
      std::copy(prefix.begin(), prefix.end(), points[static_cast<std::size_t>(b)].begin() +
                                                  static_cast<std::ptrdiff_t>(s.stored * length));
      ++s.stored;
    }
  }

  std::vector<DeltaBlockEntry> out;
  out.reserve(scratch.size());
  for (std::size_t b = 0; b < scratch.size(); ++b) {
    auto& s = scratch[b];
    DeltaBlockEntry e;
    e.k = s.k;
    e.mode = s.mode;
    e.indicator_counts = s.count;
    e.delta_profile.assign(atoms, 0.0);
    for (std::size_t i = 0; i < atoms; ++i) {
      double delta = 0.0;
      if (s.mode == DeltaMode::OneSidedBound) {
        delta = 2.0 * s.one_sided[i];
      } else if (s.scalar_fast) {
        delta = s.high[i] - s.low[i];
      } else {
        // Diameter of {S_0 = 0, S_1, ..., S_R} at atom i: sup over p <= q of ||S_q - S_(p-1)||.
        const auto& pts = points[b];
        const std::size_t off = space.offset(i);
        const std::size_t dim = space.dim(i);
        double best = 0.0;
        for (std::size_t q = 1; q < s.stored; ++q) {
          const T* sq = pts.data() + q * length + off;
          for (std::size_t p = 0; p < q; ++p) {
            const T* sp = pts.data() + p * length + off;
            double dist = 0.0;
            for (std::size_t c = 0; c < dim; ++c) dist += scalar::abs2(sq[c] - sp[c]);
            best = std::max(best, dist);
          }
        }
        delta = std::sqrt(best);
      }
      e.delta_profile[i] = delta;
      if (!holds_with_slack(delta, 2.0 * s.one_sided[i], 1e-12)) e.two_sided_within_bound = false;
    }
    e.delta_l2 = profile_l2(e.delta_profile, space.measure());
    e.one_sided_l2 = profile_l2(s.one_sided, space.measure());

    CompensatedSum weighted;
    CompensatedSum plain;
    for (std::uint64_t idx = s.first; idx <= s.last; ++idx) {
      const double m2 = scalar::abs2(a[idx - 1]);
      weighted += m2 * log2sq(static_cast<double>(idx));
      plain += m2;
    }
    e.rhs_24 = 8.0 * std::sqrt(weighted.value());
    e.rhs_maximal = (4.0 + 2.0 * std::log2(static_cast<double>(s.count))) * std::sqrt(plain.value());
    out.push_back(std::move(e));
  }
  return out;
}

template <typename T>
DeltaBlockEntry tandori_delta(const OrthonormalSystem<T>& system, std::span<const T> a,
                              const PermutationPlan& plan, std::size_t k, std::size_t n,
                              const FiberedSpace& space) {
  for (auto& e : tandori_deltas(system, a, plan, n, space)) {
    if (e.k == k) return e;
  }
  DeltaBlockEntry empty;
  empty.k = k;
  empty.delta_profile.assign(space.atoms(), 0.0);
  return empty;
}

template <typename T>
PermutationPlan adversarial_permutation(const OrthonormalSystem<T>& system, std::span<const T> a,
                                        std::size_t n, AdversarialStrategy strategy,
                                        const FiberedSpace& space) {
  if (n < 2) throw StructuralError("adversarial permutations need N >= 2");
  check_inputs(system, a, n, space);
  if (strategy == AdversarialStrategy::BlockReversal) return PermutationPlan::block_reversal(n);

  // ||P + a_i phi_i||^2 = ||P||^2 + 2 Re(conj(a_i) <P, phi_i>) + |a_i|^2 <phi_i, phi_i>,
  // with <P, phi_i> kept up to date from the Gram matrix.
  const Matrix<T> gram = gram_entries(system.truncated(n), space);
  std::vector<T> inner(n, T{});
  std::vector<bool> used(n, false);
  double current = 0.0;
  PermutationPlan plan;
  plan.provenance = PlanProvenance::GreedyAdversarial;
  plan.sigma.reserve(n);
  for (std::size_t step = 0; step < n; ++step) {
    std::size_t pick = n;
    double best = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (used[i]) continue;
      const T ai = a[i];
      const double value = current + 2.0 * scalar::real(scalar::conj(ai) * inner[i]) +
                           scalar::abs2(ai) * scalar::real(gram(static_cast<Eigen::Index>(i),
                                                                static_cast<Eigen::Index>(i)));
      if (value > best) {
        best = value;
        pick = i;
      }
    }
    used[pick] = true;
    plan.sigma.push_back(pick);
    current = best;
    const T ap = a[pick];
    for (std::size_t i = 0; i < n; ++i) {
      inner[i] += ap * gram(static_cast<Eigen::Index>(pick), static_cast<Eigen::Index>(i));
    }
  }
  return plan;
}

nlohmann::json to_json(const MajorantProfile& profile) {
  return {{"values", profile.values}, {"argmax_prefix", profile.argmax_prefix}, {"l2_norm", profile.l2_norm}};
}

nlohmann::json to_json(const DyadicDecomposition& d) {
  nlohmann::json blocks = nlohmann::json::array();
  for (const auto& b : d.blocks) blocks.push_back({b.lo, b.hi});
  return {{"j", d.j}, {"r", d.r}, {"bits", d.bits}, {"blocks", blocks}};
}

namespace {
nlohmann::json pair_json(const BoundPair& p) { return {{"lhs", p.lhs}, {"rhs", p.rhs}}; }
}  // namespace

nlohmann::json to_json(const ChainingDiagnostics& d) {
  return {{"levels", d.levels},
          {"chi_norms", d.chi_norms},
          {"chi_block_energy", d.chi_block_energy},
          {"s_circ_norms", d.s_circ_norms},
          {"s_star_dyadic_l2", d.s_star_dyadic_l2},
          {"s_circ_l2", d.s_circ_l2},
          {"majorant_l2", d.majorant_l2},
          {"truncated_L", d.truncated_L},
          {"bound_15", pair_json(d.bound_15)},
          {"bound_19", pair_json(d.bound_19)},
          {"bound_20", pair_json(d.bound_20)},
          {"bound_4", pair_json(d.bound_4)},
          {"triangle", pair_json(d.triangle)},
          {"s_circ_square", pair_json(d.s_circ_square)}};
}

nlohmann::json to_json(const DeltaBlockEntry& e) {
  return {{"k", e.k},
          {"delta_l2", e.delta_l2},
          {"one_sided_l2", e.one_sided_l2},
          {"rhs_24", e.rhs_24},
          {"rhs_maximal", e.rhs_maximal},
          {"indicator_counts", e.indicator_counts},
          {"two_sided_within_bound", e.two_sided_within_bound},
          {"mode", to_string(e.mode)}};
}

nlohmann::json to_json(const PermutationPlan& p) {
  std::vector<std::size_t> one_based(p.sigma.size());
  std::transform(p.sigma.begin(), p.sigma.end(), one_based.begin(), [](std::size_t v) { return v + 1; });
  return {{"sigma", one_based}, {"provenance", to_string(p.provenance)}, {"seed", p.seed}};
}

#define ORTHOSERIES_INSTANTIATE(T)                                                                       \
  template DirectIntegralElement<T> prefix_sum<T>(const OrthonormalSystem<T>&, std::span<const T>,      \
                                                  std::size_t);                                          \
  template MajorantProfile majorant<T>(const OrthonormalSystem<T>&, std::span<const T>, std::size_t,     \
                                       const FiberedSpace&);                                             \
  template MajorantProfile permuted_majorant<T>(const OrthonormalSystem<T>&, std::span<const T>,         \
                                                const PermutationPlan&, std::size_t, const FiberedSpace&); \
  template BoundPair dyadic_pointwise_bound<T>(std::span<const T>, std::size_t, unsigned);               \
  template ChainingDiagnostics chaining_diagnostics<T>(const OrthonormalSystem<T>&, std::span<const T>,  \
                                                       std::size_t, const FiberedSpace&);                \
  template std::vector<DeltaBlockEntry> tandori_deltas<T>(const OrthonormalSystem<T>&,                   \
                                                          std::span<const T>, const PermutationPlan&,    \
                                                          std::size_t, const FiberedSpace&);             \
  template DeltaBlockEntry tandori_delta<T>(const OrthonormalSystem<T>&, std::span<const T>,             \
                                            const PermutationPlan&, std::size_t, std::size_t,            \
                                            const FiberedSpace&);                                        \
  template PermutationPlan adversarial_permutation<T>(const OrthonormalSystem<T>&, std::span<const T>,   \
                                                      std::size_t, AdversarialStrategy,                  \
                                                      const FiberedSpace&);

ORTHOSERIES_INSTANTIATE(double)
ORTHOSERIES_INSTANTIATE(Complex)

#undef ORTHOSERIES_INSTANTIATE

}  // namespace orthoseries
