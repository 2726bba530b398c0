// Non-Hermitian Lanczos biorthogonalization, plain (three-term) and with
// look-ahead blocks, including breakdown detection and classification.
#ifndef FOPQ_LANCZOS_HPP
#define FOPQ_LANCZOS_HPP

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "fopq/fop.hpp"
#include "fopq/hankel.hpp"
#include "fopq/types.hpp"

namespace fopq {

enum class BreakdownKind { None, Lucky, Serious, IncurableWithinBound };

const char* to_string(BreakdownKind k);

struct BreakdownReport {
    BreakdownKind kind = BreakdownKind::None;
    /// Step at which the run stopped (for the incurable classification, the
    /// onset degree: the last regular index).
    std::size_t step = 0;
    std::string detail;
};

/// Snapshot of a (stopped) Lanczos run. V spans K_n(A, v), W spans
/// K_n(A*, w), and T carries the recurrence coefficients with block
/// boundaries at the regular indices.
struct LanczosState {
    std::vector<Eigen::VectorXcd> V;
    std::vector<Eigen::VectorXcd> W;
    BlockTridiagonal T;
    /// Start of the block that was open when the run stopped.
    std::size_t block_start = 0;
    /// Gram matrix of the open block at the stop.
    Eigen::MatrixXcd omega;
    /// Cross-block couplings eta_t = w*_{nu(t)-1} v_{nu(t-1)} (eta_0 = 1).
    std::vector<Complex> eta;
    std::size_t step = 0;
    /// True when the final block was still open at the stop; T then carries
    /// no exactness statement for the open part.
    bool truncated = false;
    /// Raw stop condition of the run.
    BreakdownKind stop_kind = BreakdownKind::None;
    /// Coupling actually measured when a plain run broke down.
    Complex last_coupling{0.0};
    bool v_vanished = false;
    bool w_vanished = false;

    /// max_{i != j} |w_i* v_j| / (|w_i| |v_j|), plus the diagonal deviation
    /// for a plain (biorthonormal) run; cross-block only for look-ahead.
    double biorthogonality_residual(bool blockwise) const;
    /// max residual of A V_n = V_n T_n^T + beta_{n+1} v_n e_n^T, relative.
    double krylov_residual(const Eigen::MatrixXcd& A) const;
};

/// Three-term biorthogonalization (breaks down whenever the functional
/// w* p(A) v is not quasi-definite). Stops at n_max, on a vanishing vector,
/// or on a vanishing coupling; the report distinguishes the cases.
/// Throws ZeroInitialCoupling when |w*v| <= residual_tol |v| |w|.
std::pair<LanczosState, BreakdownReport> lanczos(const Eigen::MatrixXcd& A,
                                                 const Eigen::VectorXcd& v,
                                                 const Eigen::VectorXcd& w, std::size_t n_max,
                                                 const TolerancePolicy& tol = {});

/// Look-ahead biorthogonalization: a block is closed when its Gram matrix
/// passes the rank test (smallest singular value >= zero_det_tol * largest),
/// otherwise it is extended with a_n = 0 and beta_n = |v_hat|. Stops on a
/// vanishing vector, at n_max, or at the incurable bound 2N.
std::pair<LanczosState, BreakdownReport> look_ahead_lanczos(const Eigen::MatrixXcd& A,
                                                            const Eigen::VectorXcd& v,
                                                            const Eigen::VectorXcd& w,
                                                            std::size_t n_max,
                                                            const TolerancePolicy& tol = {});

/// Refine the stop condition of a run against the determinant tail of the
/// same functional: a stop at the onset of a certain all-zero tail is an
/// incurable breakdown, unless both Krylov spaces closed simultaneously
/// (both vectors vanished), which stays a lucky stop.
BreakdownReport classify_breakdown(const LanczosState& state, const HankelAnalysis& analysis);

}  // namespace fopq

#endif  // FOPQ_LANCZOS_HPP
