// Formal orthogonal polynomial sequences: regular FOPs at the regular
// indices, quasi-orthogonal gap fills in between, the recurrence
// coefficients, and the block tridiagonal matrix encoding them.
#ifndef FOPQ_FOP_HPP
#define FOPQ_FOP_HPP

#include <Eigen/Dense>
#include <map>
#include <vector>

#include "fopq/functional.hpp"
#include "fopq/hankel.hpp"
#include "fopq/types.hpp"

namespace fopq {

enum class PolyKind { Regular, QuasiOrthogonal };

/// The sequence p_0, p_1, ..., p_n of monic polynomials together with every
/// recurrence coefficient. With the monic normalization the leading
/// coefficient transfer makes every beta equal to 1; the structure keeps the
/// coefficients explicit so alternative normalizations (for instance a
/// Lanczos run) fit the same container.
struct FopSequence {
    std::vector<Polynomial> polys;
    std::vector<PolyKind> kinds;
    /// Quasi-orthogonality order per index (0 at regular indices).
    std::vector<std::size_t> orders;
    /// alpha_{n,i} keyed by (n, i).
    std::map<std::pair<std::size_t, std::size_t>, Complex> alphas;
    /// beta_1..beta_n; betas[k] holds beta_{k+1}.
    std::vector<Complex> betas;
    /// gamma_n at the regular indices nu(t), t >= 2 (gamma_{nu(1)} = 0).
    std::map<std::size_t, Complex> gammas;
    /// Regular indices nu(0)=0, nu(1), ... up to the built degree.
    std::vector<std::size_t> nu;

    std::size_t degree() const { return polys.size() - 1; }
    const Polynomial& poly(std::size_t n) const { return polys.at(n); }
    /// First regular index >= 1 if reached within the built range.
    std::optional<std::size_t> nu1() const {
        return nu.size() > 1 ? std::optional<std::size_t>(nu[1]) : std::nullopt;
    }
};

/// The block tridiagonal matrix T_n of the recurrence
/// lambda p(lambda) = T_n p(lambda) + beta_n p_n(lambda) e_n.
/// Entries above the first superdiagonal vanish and the superdiagonal
/// entries (the betas) are all nonzero, so T_n is nonderogatory.
struct BlockTridiagonal {
    Eigen::MatrixXcd matrix;
    /// Regular indices within 0..n (block boundaries).
    std::vector<std::size_t> nu;
    /// Superdiagonal entries beta_1..beta_{n-1}.
    std::vector<Complex> betas;

    std::size_t size() const { return static_cast<std::size_t>(matrix.rows()); }
    std::optional<std::size_t> nu1() const {
        return nu.size() > 1 ? std::optional<std::size_t>(nu[1]) : std::nullopt;
    }
    /// mu = (beta_1 ... beta_{nu(1)-1})^{-1}, the prefactor scale of the
    /// matrix quadrature form (1 when nu(1) = 1).
    Complex mu() const;
    /// Leading k x k principal part with its block boundaries.
    BlockTridiagonal leading(std::size_t k) const;
};

/// Build p_0..p_n. Inside a gap nu(t) < m < nu(t+1) the two-term recurrence
/// with alpha_{m,m-1} = 0 gives p_m = lambda p_{m-1}; at a regular index the
/// long recurrence is closed with the alpha coefficients from the block Gram
/// system and the gamma coupling to the previous block.
FopSequence build_fop_sequence(const Functional& functional, std::size_t n,
                               const HankelAnalysis& analysis);

/// Assemble T_n (n = seq.degree()) from the stored coefficients.
BlockTridiagonal assemble_block_tridiagonal(const FopSequence& seq);

/// Complex Jacobi matrix of a functional that is quasi-definite on P_n,
/// built from the formal orthonormal three-term recurrence with principal
/// square roots. Throws NotQuasiDefinite when some Delta_k, k < n, vanishes.
BlockTridiagonal jacobi_matrix(const Functional& functional, std::size_t n);

/// Residual report of the orthogonality contracts of a sequence.
struct OrthogonalityReport {
    struct Entry {
        std::size_t index;
        std::size_t order;        // quasi-orthogonality order (0 = regular)
        double max_residual;      // |L(p lambda^j)| over the contracted range
        double extended_residual; // regular p_{nu(t)}: range extended to nu(t+1)-2
        double scale;             // max |m_j| entering the checks
    };
    std::vector<Entry> entries;
    double max_residual = 0.0;
    double max_relative = 0.0;
};

/// Check L(p_m lambda^j) = 0 for every contracted j, plus the extended
/// orthogonality of the regular polynomials across their zero run.
OrthogonalityReport verify_orthogonality(const Functional& functional, const FopSequence& seq);

/// Coefficients of det(lambda I - T), lowest degree first, via the
/// trace/Newton identities (no eigensolve, stable for defective T).
Polynomial characteristic_polynomial(const Eigen::MatrixXcd& t);

}  // namespace fopq

#endif  // FOPQ_FOP_HPP
