#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "orthoseries/coefficients.hpp"
#include "orthoseries/direct_integral.hpp"

namespace orthoseries {

/// Pointwise maximum over prefixes of the fiber norm of the partial sums.
struct MajorantProfile {
  std::vector<double> values;
  std::vector<std::size_t> argmax_prefix;  // 1-based prefix length, first achiever
  double l2_norm = 0.0;
};

/// Binary digits of j against 2^r, most significant first, and the dyadic
/// blocks (lo, hi] they select.
struct DyadicDecomposition {
  struct Block {
    std::uint64_t lo = 0;
    std::uint64_t hi = 0;
  };
  std::uint64_t j = 0;
  unsigned r = 0;
  std::vector<int> bits;  // bits[k] has weight 2^(r-k)
  std::vector<Block> blocks;
};

struct BoundPair {
  double lhs = 0.0;
  double rhs = 0.0;
};

/// Quantities of the dyadic chaining argument for N = 2^(K+1) - 1.
///
/// chi_k sums indices [2^k, 2^(k+1)); s_circ_norms[k-1] is ||S_k°||_2 for k >= 1;
/// the dyadic majorant takes the partial sums ending at 2^k - 1, which are
/// exactly the sums of whole chi blocks.
struct ChainingDiagnostics {
  unsigned levels = 0;  // K + 1
  std::vector<double> chi_norms;
  std::vector<double> chi_block_energy;  // sum over the block of |a_n|^2
  std::vector<double> s_circ_norms;
  double s_star_dyadic_l2 = 0.0;
  double s_circ_l2 = 0.0;  // ||sup_k S_k°||_2
  double majorant_l2 = 0.0;
  double truncated_L = 0.0;
  BoundPair bound_15;  // sum ||chi_k|| <= 2 sqrt(L)
  BoundPair bound_19;  // ||S*_dyadic|| <= sum ||chi_k||
  BoundPair bound_20;  // sum ||S_k°||^2 <= 4 L
  BoundPair bound_4;   // ||S_N*|| <= 4 sqrt(L)
  BoundPair triangle;  // ||S_N*|| <= ||S*_dyadic|| + ||S°||
  BoundPair s_circ_square;  // ||S°||^2 <= sum ||S_k°||^2
};

enum class PlanProvenance { Identity, Explicit, SeededShuffle, GreedyAdversarial, BlockReversal };

std::string to_string(PlanProvenance p);

/// A rearrangement: position n (0-based) of the permuted series carries term sigma[n] (0-based).
struct PermutationPlan {
  std::vector<std::size_t> sigma;
  PlanProvenance provenance = PlanProvenance::Identity;
  std::uint64_t seed = 0;

  static PermutationPlan identity(std::size_t n);
  static PermutationPlan seeded_shuffle(std::size_t n, std::uint64_t seed);
  static PermutationPlan block_reversal(std::size_t n);
  /// Throws StructuralError unless sigma is a bijection of {0..n-1}.
  static PermutationPlan explicit_plan(std::vector<std::size_t> sigma);

  std::size_t size() const noexcept { return sigma.size(); }
  void validate() const;
};

enum class AdversarialStrategy { GreedyMaxPrefix, BlockReversal };

enum class DeltaMode { Exact, OneSidedBound };

std::string to_string(DeltaMode mode);

struct DeltaBlockEntry {
  std::size_t k = 0;
  std::vector<double> delta_profile;
  double delta_l2 = 0.0;
  double one_sided_l2 = 0.0;  // ||sup_q ||S_q||||_2 of the filtered series
  double rhs_24 = 0.0;        // 8 (sum_{M_k} |a_n|^2 log2^2 n)^(1/2)
  double rhs_maximal = 0.0;     // (4 + 2 log2 R) (sum_{M_k} |a_n|^2)^(1/2), R = indices present
  std::size_t indicator_counts = 0;
  bool two_sided_within_bound = true;  // delta <= 2 sup_q ||S_q|| at every atom
  DeltaMode mode = DeltaMode::Exact;
};

/// Exact delta_k is computed when the block holds at most this many indices.
inline constexpr std::size_t kExactDeltaRange = 4096;
/// ... and when pairwise work range^2 * total_dim stays under this budget
/// (real scalar fibers of dimension 1 use an O(range) diameter and skip it).
inline constexpr double kExactDeltaWork = 4.0e9;

/// sum_{n <= j} a_n phi_n (j is 1-based).
template <typename T>
DirectIntegralElement<T> prefix_sum(const OrthonormalSystem<T>& system, std::span<const T> a,
                                    std::size_t j);

/// S_N* by one streaming pass; memory O(total_dim).
template <typename T>
MajorantProfile majorant(const OrthonormalSystem<T>& system, std::span<const T> a, std::size_t n,
                         const FiberedSpace& space);

template <typename T>
MajorantProfile permuted_majorant(const OrthonormalSystem<T>& system, std::span<const T> a,
                                  const PermutationPlan& plan, std::size_t n,
                                  const FiberedSpace& space);

DyadicDecomposition dyadic_decomposition(std::uint64_t j, unsigned r);

/// (||sum h||^2, (r+1) sum_k sum_p ||dyadic block sum||^2) with h zero-padded to 2^r.
/// `vectors` holds h.size() / dim vectors of dimension `dim`, stored back to back.
template <typename T>
BoundPair dyadic_pointwise_bound(std::span<const T> vectors, std::size_t dim, unsigned r);

/// Throws StructuralError unless n = 2^(K+1) - 1.
template <typename T>
ChainingDiagnostics chaining_diagnostics(const OrthonormalSystem<T>& system, std::span<const T> a,
                                         std::size_t n, const FiberedSpace& space);

/// Smallest 2^(K+1) - 1 that is >= n.
std::size_t dyadic_complete_size(std::size_t n);

/// delta_k for every Tandori block meeting {3..N}.
template <typename T>
std::vector<DeltaBlockEntry> tandori_deltas(const OrthonormalSystem<T>& system, std::span<const T> a,
                                            const PermutationPlan& plan, std::size_t n,
                                            const FiberedSpace& space);

/// delta_k for a single block k; an empty block gives zero diagnostics.
template <typename T>
DeltaBlockEntry tandori_delta(const OrthonormalSystem<T>& system, std::span<const T> a,
                              const PermutationPlan& plan, std::size_t k, std::size_t n,
                              const FiberedSpace& space);

template <typename T>
PermutationPlan adversarial_permutation(const OrthonormalSystem<T>& system, std::span<const T> a,
                                        std::size_t n, AdversarialStrategy strategy,
                                        const FiberedSpace& space);

nlohmann::json to_json(const MajorantProfile& profile);
nlohmann::json to_json(const DyadicDecomposition& d);
nlohmann::json to_json(const ChainingDiagnostics& d);
nlohmann::json to_json(const DeltaBlockEntry& e);
nlohmann::json to_json(const PermutationPlan& p);

/// "(0,4] (4,5]"
std::string format_blocks(const DyadicDecomposition& d);

}  // namespace orthoseries
