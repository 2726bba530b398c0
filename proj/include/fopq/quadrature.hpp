// Gauss quadrature for linear functionals: nodes with multiplicities,
// derivative weights, evaluation, and the matrix formulation through the
// block tridiagonal matrix.
#ifndef FOPQ_QUADRATURE_HPP
#define FOPQ_QUADRATURE_HPP

#include <functional>
#include <optional>
#include <vector>

#include "fopq/fop.hpp"
#include "fopq/functional.hpp"
#include "fopq/hankel.hpp"
#include "fopq/types.hpp"

namespace fopq {

/// Callback f(lambda, j) returning the j-th derivative of f at lambda,
/// required up to the multiplicity of each node.
using SmoothFunction = std::function<Complex(Complex, std::size_t)>;

SmoothFunction smooth_from_polynomial(Polynomial p);

/// Quadrature G(f) = sum_i sum_{j<s_i} w_{i,j} f^(j)(lambda_i).
struct QuadratureNode {
    Complex node;
    std::size_t multiplicity;
    std::vector<Complex> weights;  // w_{i,0} .. w_{i,s_i-1}
    /// Trailing weight magnitude at or below residual_tol * max |w|; the rule
    /// then effectively has fewer nodes than claimed.
    bool trailing_weight_suspect = false;
};

struct DegreeOfExactness {
    std::size_t degree = 0;
    /// Exact through the whole probed range (no violation found).
    bool whole_range = false;
};

struct QuadratureRule {
    std::vector<QuadratureNode> nodes;
    std::size_t n = 0;  // total sum of multiplicities
    /// mu * m_{nu(1)-1}; zero for the degenerate all-zero rules below nu(1).
    Complex prefactor{0.0};
    /// nu(1) of the source sequence; 0 marks the degenerate zero rule.
    std::size_t nu1 = 0;
    DegreeOfExactness exactness;
    BlockTridiagonal source_T;

    Complex evaluate(const SmoothFunction& f) const;
    double max_weight_abs() const;
};

/// The n-node Gauss rule: nodes are the clustered eigenvalues of T_n (they
/// coincide with the roots of p_n), multiplicities the cluster sizes, and
/// the weights solve the confluent Vandermonde system matching m_0..m_{n-1}.
/// Requires n regular; for n below nu(1) the rule is identically zero and is
/// returned as such. Throws NotRegularDegree otherwise when Delta_{n-1} = 0.
QuadratureRule gauss_quadrature(const Functional& functional, std::size_t n,
                                const FopSequence& seq, const TolerancePolicy& tol = {});

/// Interpolatory rule on prescribed nodes and multiplicities: weights match
/// m_0..m_{n-1}. Used by the gap-polynomial collapse checks.
QuadratureRule interpolatory_rule(const Functional& functional,
                                  const std::vector<std::pair<Complex, std::size_t>>& nodes,
                                  const TolerancePolicy& tol = {});

/// Clustered roots of a polynomial via its companion matrix.
std::vector<std::pair<Complex, std::size_t>> polynomial_roots(const Polynomial& p,
                                                              const TolerancePolicy& tol = {});

/// The double sum, exactly as written.
Complex apply_quadrature(const QuadratureRule& rule, const SmoothFunction& f);

/// prefactor * e_1^T p(T) e_{nu1} by Horner iteration on vectors
/// (p(T) is never formed). nu1 is 1-based, matching e_{nu(1)}.
Complex matrix_form_evaluate(const BlockTridiagonal& T, const Polynomial& p, Complex prefactor,
                             std::size_t nu1);

struct MomentMatchReport {
    std::vector<double> residuals;  // |mu m_{nu(1)-1} e_1^T T^k e_{nu(1)} - m_k|
    double max_absolute = 0.0;
    double max_relative = 0.0;  // relative to the largest |m_k| in range (floor 1)
};

/// Residuals of the matching moment identity for k = 0..k_max.
MomentMatchReport matching_moment_check(const BlockTridiagonal& T, const Functional& functional,
                                        std::size_t k_max);

/// Largest k_max guaranteed by the matching moment theorem for T_n with
/// nu(t) <= n < nu(t+1): nu(t) + nu(t+1) - 2, unbounded (nullopt) when n is
/// at or past the last regular index of a certain incurable tail.
std::optional<std::size_t> matching_range(const HankelAnalysis& analysis, std::size_t n);

/// Largest degree d within the probe range with |G(lambda^j) - m_j| below
/// residual_tol (relative) for all j <= d. The probe range is the moment
/// horizon, or 2(n + N) for a triplet functional (two realizations of
/// dimensions n and N that agree that far agree everywhere).
DegreeOfExactness degree_of_exactness(const QuadratureRule& rule, const Functional& functional,
                                      const TolerancePolicy& tol = {});

}  // namespace fopq

#endif  // FOPQ_QUADRATURE_HPP
