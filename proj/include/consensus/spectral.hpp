#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "consensus/contact_matrix.hpp"

namespace consensus {

/// Subset of V as a bitmask (node i in the subset iff bit i is set).
/// Caps graphs at 64 nodes; the enumeration guard below is much stricter.
using SubsetMask = std::uint64_t;

inline int subset_size(SubsetMask s) { return __builtin_popcountll(s); }
std::vector<int> subset_members(SubsetMask s);

/// The killed-rate matrix Q_S: every row keeps the diagonal -sum_l q_{i,l};
/// rows outside S keep their off-diagonal rates, rows inside S lose them.
struct KilledMatrix {
    int n = 0;
    SubsetMask subset = 0;
    std::vector<double> entries;  // row-major n*n

    double at(int i, int j) const { return entries[static_cast<std::size_t>(i) * n + j]; }
};

/// Builds Q_S from a contact matrix. Throws on an empty subset or one
/// containing out-of-range nodes.
KilledMatrix build_qs(const ContactMatrix& q, SubsetMask s);

/// Largest (least negative) eigenvalue of Q_S. The spectrum splits into the
/// killed diagonal entries {-q_i : i in S} and the spectrum of the symmetric
/// principal submatrix on the complement, which is resolved with a dense
/// Jacobi eigensolver. Strictly negative for connected graphs.
double dominant_eigenvalue(const KilledMatrix& qs);

/// Full eigendecomposition of a dense symmetric matrix (row-major m*m) by
/// cyclic Jacobi rotations. Eigenvalues land in `values`; eigenvectors are
/// the columns of `vectors`. Throws std::runtime_error on non-convergence.
void jacobi_eigen(const std::vector<double>& sym, int m,
                  std::vector<double>& values, std::vector<double>& vectors);

enum class DeltaMethod { Exhaustive, ClosedForm, Sampled };

struct SpectralResult {
    double delta = 0.0;
    SubsetMask argmin_subset = 0;
    DeltaMethod method = DeltaMethod::Exhaustive;
    int subset_size = 0;
};

const char* method_name(DeltaMethod m);
std::string to_json(const SpectralResult& r);  // 1-based member indices

/// Default cap on n for exhaustive subset enumeration. Overridable through
/// the CONSENSUS_MAX_N environment variable.
int enumeration_guard_limit();

/// delta(Q, alpha) by exhaustive minimization of |lambda_{Q_S}| over all
/// subsets of size s0 - s1. Deterministic regardless of parallelism: ties
/// resolve to the first subset in colexicographic enumeration order.
/// Throws std::invalid_argument when s0 <= s1 or n exceeds the guard.
SpectralResult delta_exhaustive(const ContactMatrix& q, int s0, int s1, bool parallel = true);

/// Minimum of |lambda_{Q_S}| over all subset sizes in [lo, hi]; test hook
/// for the interlacing identity (the minimum over [s0-s1, s0] equals the
/// minimum at size s0-s1).
double min_abs_dominant_over_sizes(const ContactMatrix& q, int lo, int hi);

/// Random-subset estimate for graphs too large to enumerate. The sampled
/// minimum only upper-bounds delta; results carry the Sampled method tag.
SpectralResult delta_sampled(const ContactMatrix& q, int s0, int s1, int samples,
                             std::uint64_t seed);

// Closed forms for the named topologies. The count-based complete-graph form
// is exact for integer margins; the alpha-based forms evaluate the printed
// formulas, which treat (2 alpha - 1) n as integral.
double closed_form_complete(int n, int s0, int s1);           // (s0-s1)/(n-1); 1 when s1 = 0
double closed_form_path(int n, double alpha);                 // 2(1 - cos(pi / (4(1-a)n + 1)))
double closed_form_path_asymptotic(int n, double alpha);      // pi^2 / (16 (1-a)^2 n^2)
double closed_form_cycle(int n, double alpha);                // 2(1 - cos(pi / (2(1-a)n + 1)))
double closed_form_cycle_asymptotic(int n, double alpha);     // pi^2 / (4 (1-a)^2 n^2)
double closed_form_star(int n, double alpha);                 // n/(2(n-1)) (1 - sqrt(1 - 4(2a-1)/n))

/// High-probability lower bound on delta for G(n, c log(n)/n):
/// (2a-1) phi^{-1}(2 / (c (2a-1))). Requires c > 2/(2a-1); the O(1/log n)
/// correction is not included. Throws std::domain_error outside the regime.
double delta_er_bound(int n, double c, double alpha);

}  // namespace consensus
