// Partial realizations of complex Markov sequences: the trivial shift
// realization, the minimal realization through the Gauss quadrature matrix,
// and the Ritz-versus-spectrum mismatch report.
#ifndef FOPQ_REALIZATION_HPP
#define FOPQ_REALIZATION_HPP

#include <Eigen/Dense>

#include "fopq/lanczos.hpp"
#include "fopq/types.hpp"

namespace fopq {

/// Triplet (w, A, v) realizing a Markov sequence m_j = w* A^j v.
struct RealizationTriplet {
    Eigen::VectorXcd w;
    Eigen::MatrixXcd A;
    Eigen::VectorXcd v;

    std::size_t dimension() const { return static_cast<std::size_t>(A.rows()); }
};

/// Dimension k+1 realization of m_0..m_k: A the upshift matrix, v the
/// moments, w = e_1. Matches the sequence exactly.
RealizationTriplet trivial_realization(const MomentSequence& moments);

struct MinimalRealization {
    RealizationTriplet triplet;
    std::size_t n = 0;  // realization dimension
    /// Minimality holds relative to the computed determinant pattern (a
    /// tolerance-dependent statement, exact only in exact arithmetic).
    std::string certificate;
};

/// Smallest regular degree n whose Gauss rule reproduces m_0..m_k, returned
/// as the triplet (e_1, T_n, mu m_{nu(1)-1} e_{nu(1)}). Throws
/// NoRealizableDegree when no regular degree within the pattern horizon is
/// exact through degree k.
MinimalRealization minimal_partial_realization(const MomentSequence& moments, std::size_t k,
                                               const TolerancePolicy& tol = {});

/// Markov parameters w* A^j v for j = 0..k_max by iterated products.
MomentSequence markov_parameters(const RealizationTriplet& triplet, std::size_t k_max);

/// Ritz values of the Lanczos matrix against the spectrum of A.
struct MismatchReport {
    std::vector<Complex> ritz;
    std::vector<Complex> spectrum;
    double max_min_distance = 0.0;
    /// The mismatch statement applies only under incurable breakdown.
    bool applicable = false;
    BreakdownReport breakdown;
};

/// Run the look-ahead recurrence on (A, v, w) and compare the Ritz values of
/// the final closed block matrix with the spectrum of A. Under incurable
/// breakdown every Ritz value must be an eigenvalue of A; other stops are
/// reported as non-applicable (the distances are still informative).
MismatchReport mismatch_check(const Eigen::MatrixXcd& A, const Eigen::VectorXcd& v,
                              const Eigen::VectorXcd& w, const TolerancePolicy& tol = {});

}  // namespace fopq

#endif  // FOPQ_REALIZATION_HPP
