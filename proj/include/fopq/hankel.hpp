// Hankel determinant sequence, zero classification, and the structural
// indices (regular indices, Kronecker/Euclidean indices, incurable tail)
// that drive polynomial existence and look-ahead block sizes.
#ifndef FOPQ_HANKEL_HPP
#define FOPQ_HANKEL_HPP

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "fopq/functional.hpp"
#include "fopq/types.hpp"

namespace fopq {

/// Zero-nonzero analysis of the Hankel determinants Delta_0..Delta_M.
///
/// regular_indices lists nu(0)=0, nu(1), nu(2), ... with Delta_{nu(t)-1}
/// nonzero for t >= 1 (degree 0 counts as regular by convention).
/// kronecker[k] is the right-run count R(k): the number of zeros after
/// Delta_k before the next nonzero, or -1 when the run leaves the computed
/// window. euclidean[k] = R(k+1) - R(k) where both are determined (-1
/// otherwise, aligned with kronecker[k+1]).
struct HankelAnalysis {
    std::vector<Complex> deltas;
    std::vector<bool> is_zero;
    std::vector<std::size_t> regular_indices;
    std::vector<int> kronecker;
    std::vector<int> euclidean;
    /// Degree n with Delta_{n-1} nonzero and every later computed Delta zero.
    std::optional<std::size_t> incurable_from;
    /// True when the zero tail is certain (triplet rank bound), false when it
    /// is only "incurable within horizon".
    bool incurable_certain = false;
    TolerancePolicy tol;

    std::size_t max_index() const { return deltas.size() - 1; }
    bool nonzero_at(std::size_t k) const { return k < is_zero.size() && !is_zero[k]; }

    /// Pattern string, "x" for nonzero and "0" for zero ("x0x").
    std::string pattern() const;

    /// Analysis from a synthetic zero-nonzero pattern ("x0x" or "*0*");
    /// deltas are placeholders 1 and 0.
    static HankelAnalysis from_pattern(const std::string& pattern, TolerancePolicy tol = {});
};

enum class DegreeKind { Regular, Singular, Nonexistent };

/// Existence classification of the formal orthogonal polynomial per degree n:
/// Regular (unique), Singular (exists, not unique), Nonexistent.
struct DegreeClassification {
    std::vector<DegreeKind> kinds;  // kinds[i] classifies degree i+1

    DegreeKind at(std::size_t degree) const { return kinds.at(degree - 1); }
};

const char* to_string(DegreeKind k);

/// The k x k Hankel matrix H_{k-1} with entry (i, j) = m_{i+j}.
Eigen::MatrixXcd hankel_matrix(const Functional& functional, std::size_t k);

/// Determinants Delta_0..Delta_{max_k-1} via pivoted LU, classified against
/// the Hadamard bound of each matrix, with all structural indices derived
/// from the pattern.
HankelAnalysis determinant_sequence(const Functional& functional, std::size_t max_k,
                                    const TolerancePolicy& tol = {});

/// Analysis with the module defaults: the pattern is computed to index 2N-1
/// for a triplet of dimension N and to the moment horizon otherwise.
HankelAnalysis analyze(const Functional& functional, const TolerancePolicy& tol = {});

/// Exact-arithmetic analysis of an explicit moment list (oracle path).
HankelAnalysis determinant_sequence_exact(const std::vector<Complex>& moments, std::size_t max_k,
                                          const TolerancePolicy& tol = {});

/// Classify degrees 1..n_max. A degree is Regular iff Delta_{n-1} != 0;
/// otherwise, with k the last regular degree before n, it is Singular iff
/// Delta_k = ... = Delta_{2n-k-1} = 0 and Nonexistent once a nonzero appears
/// in that window. Raises InsufficientPattern when the window leaves the
/// computed range while still undecided.
DegreeClassification classify_degrees(const HankelAnalysis& analysis, std::size_t n_max);

}  // namespace fopq

#endif  // FOPQ_HANKEL_HPP
