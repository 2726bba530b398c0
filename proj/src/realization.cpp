#include "fopq/realization.hpp"

#include <limits>

#include "fopq/quadrature.hpp"

namespace fopq {

RealizationTriplet trivial_realization(const MomentSequence& moments) {
    const std::size_t n = moments.moments.size();
    RealizationTriplet t;
    t.A = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i + 1 < n; ++i)
        t.A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i + 1)) = Complex(1.0);
    t.v = Eigen::VectorXcd(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) t.v(static_cast<Eigen::Index>(i)) = moments[i];
    t.w = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(n));
    t.w(0) = Complex(1.0);
    return t;
}

MinimalRealization minimal_partial_realization(const MomentSequence& moments, std::size_t k,
                                               const TolerancePolicy& tol) {
    if (k > moments.horizon()) throw HorizonExceeded(k, moments.horizon());
    Functional functional = Functional::from_moments(moments);
    HankelAnalysis analysis = analyze(functional, tol);

    for (std::size_t t = 1; t < analysis.regular_indices.size(); ++t) {
        const std::size_t n = analysis.regular_indices[t];
        if (2 * n - 1 > moments.horizon()) break;  // p_n not constructible
        FopSequence seq = build_fop_sequence(functional, n, analysis);
        QuadratureRule rule = gauss_quadrature(functional, n, seq, tol);
        if (!rule.exactness.whole_range && rule.exactness.degree < k) continue;

        MinimalRealization out;
        out.n = n;
        out.triplet.A = rule.source_T.matrix;
        out.triplet.w = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(n));
        out.triplet.w(0) = Complex(1.0);
        out.triplet.v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(n));
        out.triplet.v(static_cast<Eigen::Index>(rule.nu1 - 1)) = rule.prefactor;
        out.certificate =
            "minimal relative to the computed determinant pattern (zero_det_tol = " +
            std::to_string(tol.zero_det_tol) + ")";
        return out;
    }
    throw NoRealizableDegree(k);
}

MomentSequence markov_parameters(const RealizationTriplet& triplet, std::size_t k_max) {
    std::vector<Complex> m;
    m.reserve(k_max + 1);
    Eigen::VectorXcd power = triplet.v;
    for (std::size_t j = 0; j <= k_max; ++j) {
        m.push_back(triplet.w.dot(power));
        power = triplet.A * power;
    }
    return MomentSequence(std::move(m));
}

MismatchReport mismatch_check(const Eigen::MatrixXcd& A, const Eigen::VectorXcd& v,
                              const Eigen::VectorXcd& w, const TolerancePolicy& tol) {
    const std::size_t dim = static_cast<std::size_t>(A.rows());
    auto [state, stop] = look_ahead_lanczos(A, v, w, 2 * dim, tol);
    Functional functional = Functional::from_triplet(w, A, v);
    HankelAnalysis analysis = analyze(functional, tol);

    MismatchReport report;
    report.breakdown = classify_breakdown(state, analysis);
    report.applicable = report.breakdown.kind == BreakdownKind::IncurableWithinBound;

    // Under incurable breakdown the statement concerns the matrix of the
    // last closed block; otherwise report the full T at the stop.
    std::size_t n = state.T.size();
    if (report.applicable) n = report.breakdown.step;
    Eigen::MatrixXcd tn = state.T.matrix.topLeftCorner(static_cast<Eigen::Index>(n),
                                                       static_cast<Eigen::Index>(n));
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> ritz(tn, false);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> spec(A, false);
    for (Eigen::Index i = 0; i < ritz.eigenvalues().size(); ++i)
        report.ritz.push_back(ritz.eigenvalues()(i));
    for (Eigen::Index i = 0; i < spec.eigenvalues().size(); ++i)
        report.spectrum.push_back(spec.eigenvalues()(i));

    for (Complex r : report.ritz) {
        double best = std::numeric_limits<double>::infinity();
        for (Complex s : report.spectrum) best = std::min(best, std::abs(r - s));
        report.max_min_distance = std::max(report.max_min_distance, best);
    }
    return report;
}

}  // namespace fopq
