#include "fopq/lanczos.hpp"

#include <cmath>

namespace fopq {

namespace {

Eigen::MatrixXcd columns(const std::vector<Eigen::VectorXcd>& vs, std::size_t from, std::size_t to) {
    Eigen::MatrixXcd m(vs.empty() ? 0 : vs[0].size(), static_cast<Eigen::Index>(to - from));
    for (std::size_t i = from; i < to; ++i) m.col(static_cast<Eigen::Index>(i - from)) = vs[i];
    return m;
}

// Fill T's structural fields from the recurrence matrix and the closed block
// boundaries.
void finalize_T(BlockTridiagonal& t, const Eigen::MatrixXcd& coeffs, std::size_t n,
                const std::vector<std::size_t>& nu) {
    t.matrix = coeffs.topLeftCorner(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    t.betas.clear();
    for (std::size_t k = 0; k + 1 < n; ++k)
        t.betas.push_back(t.matrix(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k + 1)));
    t.nu.clear();
    for (std::size_t v : nu)
        if (v <= n) t.nu.push_back(v);
}

}  // namespace

const char* to_string(BreakdownKind k) {
    switch (k) {
        case BreakdownKind::None: return "None";
        case BreakdownKind::Lucky: return "Lucky";
        case BreakdownKind::Serious: return "Serious";
        case BreakdownKind::IncurableWithinBound: return "IncurableWithinBound";
    }
    return "?";
}

double LanczosState::biorthogonality_residual(bool blockwise) const {
    double worst = 0.0;
    const std::size_t n = V.size();
    // Block membership per index: position of the enclosing block start.
    std::vector<std::size_t> block(n, 0);
    if (blockwise) {
        std::size_t b = 0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t s : T.nu)
                if (s <= i) b = s;
            block[i] = b;
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            Complex g = W[i].dot(V[j]);
            double scale = std::max(W[i].norm() * V[j].norm(), 1e-300);
            if (blockwise) {
                if (block[i] != block[j]) worst = std::max(worst, std::abs(g) / scale);
            } else {
                Complex expected = i == j ? Complex(1.0) : Complex(0.0);
                worst = std::max(worst, std::abs(g - expected) / scale);
            }
        }
    return worst;
}

double LanczosState::krylov_residual(const Eigen::MatrixXcd& A) const {
    const std::size_t n = V.size();
    Eigen::MatrixXcd vn = columns(V, 0, n);
    Eigen::MatrixXcd resid = A * vn - vn * T.matrix.transpose();
    // The overflow term beta_{n+1} v_n e_n^T lives only in the last column;
    // drop it from the residual, it is the recurrence continuation.
    resid.col(static_cast<Eigen::Index>(n - 1)).setZero();
    double scale = std::max(A.norm() * vn.norm(), 1e-300);
    return resid.norm() / scale;
}

std::pair<LanczosState, BreakdownReport> lanczos(const Eigen::MatrixXcd& A,
                                                 const Eigen::VectorXcd& v,
                                                 const Eigen::VectorXcd& w, std::size_t n_max,
                                                 const TolerancePolicy& tol) {
    if (A.rows() != A.cols() || v.size() != A.rows() || w.size() != A.rows())
        throw std::invalid_argument("dimension mismatch");
    tol.validate();
    Complex coupling = w.dot(v);
    if (std::abs(coupling) <= tol.residual_tol * v.norm() * w.norm()) throw ZeroInitialCoupling();

    const std::size_t dim = static_cast<std::size_t>(A.rows());
    const std::size_t cap = std::min(n_max, dim);
    LanczosState state;
    BreakdownReport report;

    Complex beta0 = principal_sqrt(coupling);
    state.V.push_back(v / beta0);
    state.W.push_back(w / std::conj(beta0));

    Eigen::MatrixXcd coeffs = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(cap),
                                                     static_cast<Eigen::Index>(cap));
    std::vector<std::size_t> nu{0};
    Complex beta_prev(0.0);
    std::size_t n = 1;
    for (; n <= cap; ++n) {
        const auto& vp = state.V[n - 1];
        const auto& wp = state.W[n - 1];
        Complex alpha = wp.dot(A * vp);
        coeffs(static_cast<Eigen::Index>(n - 1), static_cast<Eigen::Index>(n - 1)) = alpha;

        Eigen::VectorXcd vhat = A * vp - alpha * vp;
        Eigen::VectorXcd what = A.adjoint() * wp - std::conj(alpha) * wp;
        if (n >= 2) {
            vhat -= beta_prev * state.V[n - 2];
            what -= std::conj(beta_prev) * state.W[n - 2];
        }

        double vscale = (A * vp).norm() + std::abs(alpha) * vp.norm() +
                        (n >= 2 ? std::abs(beta_prev) * state.V[n - 2].norm() : 0.0);
        double wscale = (A.adjoint() * wp).norm() + std::abs(alpha) * wp.norm() +
                        (n >= 2 ? std::abs(beta_prev) * state.W[n - 2].norm() : 0.0);
        state.v_vanished = vhat.norm() <= tol.residual_tol * std::max(vscale, 1e-300);
        state.w_vanished = what.norm() <= tol.residual_tol * std::max(wscale, 1e-300);
        if (state.v_vanished || state.w_vanished) {
            report.kind = BreakdownKind::Lucky;
            report.detail = state.v_vanished && state.w_vanished ? "both vectors vanished"
                            : state.v_vanished                   ? "v vector vanished"
                                                                 : "w vector vanished";
            break;
        }

        Complex c = what.dot(vhat);
        state.last_coupling = c;
        if (std::abs(c) <= tol.zero_det_tol * vhat.norm() * what.norm()) {
            report.kind = BreakdownKind::Serious;
            report.detail = "coupling w^* v vanished with nonzero vectors, |c| = " +
                            std::to_string(std::abs(c));
            break;
        }
        if (n == cap) {
            report.detail = "reached step limit";
            break;
        }

        Complex beta = principal_sqrt(c);
        coeffs(static_cast<Eigen::Index>(n - 1), static_cast<Eigen::Index>(n)) = beta;
        coeffs(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n - 1)) = beta;
        state.V.push_back(vhat / beta);
        state.W.push_back(what / std::conj(beta));
        nu.push_back(n);
        beta_prev = beta;
    }

    const std::size_t steps = state.V.size();
    nu.push_back(steps);  // every index regular in a quasi-definite run
    finalize_T(state.T, coeffs, steps, nu);
    state.step = steps;
    state.block_start = steps == 0 ? 0 : steps - 1;
    state.omega = Eigen::MatrixXcd::Zero(1, 1);
    if (!state.V.empty()) state.omega(0, 0) = state.W.back().dot(state.V.back());
    state.eta = {Complex(1.0)};
    report.step = steps;
    state.stop_kind = report.kind;
    return {state, report};
}

std::pair<LanczosState, BreakdownReport> look_ahead_lanczos(const Eigen::MatrixXcd& A,
                                                            const Eigen::VectorXcd& v,
                                                            const Eigen::VectorXcd& w,
                                                            std::size_t n_max,
                                                            const TolerancePolicy& tol) {
    if (A.rows() != A.cols() || v.size() != A.rows() || w.size() != A.rows())
        throw std::invalid_argument("dimension mismatch");
    if (v.norm() == 0.0 || w.norm() == 0.0) throw std::invalid_argument("zero input vector");
    tol.validate();

    const std::size_t dim = static_cast<std::size_t>(A.rows());
    // The determinant pattern cannot recover past index 2N - 1.
    const std::size_t cap = std::min(n_max, 2 * dim);

    LanczosState state;
    BreakdownReport report;
    state.eta = {Complex(1.0)};

    double beta0 = v.norm();
    state.V.push_back(v / beta0);
    state.W.push_back(w / beta0);

    Eigen::MatrixXcd coeffs = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(cap),
                                                     static_cast<Eigen::Index>(cap));
    std::vector<std::size_t> nu{0};
    std::size_t t = 0;  // current block index; block starts at nu[t]
    bool open_block = false;

    for (std::size_t n = 1; n <= cap; ++n) {
        const std::size_t bs = nu[t];
        Eigen::MatrixXcd vblock = columns(state.V, bs, n);
        Eigen::MatrixXcd wblock = columns(state.W, bs, n);
        state.omega = wblock.adjoint() * vblock;

        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(state.omega, Eigen::ComputeThinU | Eigen::ComputeThinV);
        double smax = svd.singularValues().maxCoeff();
        double smin = svd.singularValues().minCoeff();
        bool regular = smax > 0.0 && smin >= tol.zero_det_tol * smax;

        Eigen::VectorXcd avp = A * state.V[n - 1];
        Eigen::VectorXcd vhat, what;
        if (regular) {
            Complex gamma(0.0);
            if (t >= 1) gamma = state.W[nu[t] - 1].dot(avp) / state.eta[t];
            Eigen::VectorXcd a = svd.solve(wblock.adjoint() * avp);
            vhat = avp - vblock * a;
            what = A.adjoint() * state.W[n - 1] - wblock * a.conjugate();
            if (t >= 1) {
                vhat -= gamma * state.V[nu[t - 1]];
                what -= std::conj(gamma) * state.W[nu[t - 1]];
            }
            for (std::size_t r = 0; r < static_cast<std::size_t>(a.size()); ++r)
                coeffs(static_cast<Eigen::Index>(n - 1), static_cast<Eigen::Index>(bs + r)) =
                    a(static_cast<Eigen::Index>(r));
            if (t >= 1)
                coeffs(static_cast<Eigen::Index>(n - 1), static_cast<Eigen::Index>(nu[t - 1])) = gamma;
        } else {
            // Extend the block with a_n = 0 (matches the two-term gap fill).
            vhat = avp;
            what = A.adjoint() * state.W[n - 1];
        }

        double vscale = std::max(avp.norm() + vhat.norm(), 1e-300);
        double wscale = std::max((A.adjoint() * state.W[n - 1]).norm() + what.norm(), 1e-300);
        state.v_vanished = vhat.norm() <= tol.residual_tol * vscale;
        state.w_vanished = what.norm() <= tol.residual_tol * wscale;
        if (state.v_vanished || state.w_vanished) {
            report.kind = BreakdownKind::Lucky;
            report.detail = state.v_vanished && state.w_vanished ? "both vectors vanished"
                            : state.v_vanished                   ? "v vector vanished"
                                                                 : "w vector vanished";
            if (regular) {
                nu.push_back(n);
                ++t;
                open_block = false;
            } else {
                open_block = true;
            }
            break;
        }

        if (regular) {
            state.eta.push_back(state.W[n - 1].dot(state.V[nu[t]]));
            nu.push_back(n);
            ++t;
            open_block = false;
        } else {
            open_block = true;
        }
        if (n == cap) {
            report.detail = open_block ? "block open at step limit" : "reached step limit";
            break;
        }

        double beta = vhat.norm();
        coeffs(static_cast<Eigen::Index>(n - 1), static_cast<Eigen::Index>(n)) = beta;
        state.V.push_back(vhat / beta);
        state.W.push_back(what / beta);
    }

    const std::size_t steps = state.V.size();
    finalize_T(state.T, coeffs, steps, nu);
    state.step = steps;
    state.block_start = nu[t];
    state.truncated = open_block;
    report.step = steps;
    if (report.kind == BreakdownKind::None && open_block)
        report.detail = "block open at step limit";
    state.stop_kind = report.kind;
    return {state, report};
}

BreakdownReport classify_breakdown(const LanczosState& state, const HankelAnalysis& analysis) {
    BreakdownReport out;
    out.step = state.step;
    const bool both_closed = state.v_vanished && state.w_vanished;
    if (analysis.incurable_from && analysis.incurable_certain && !both_closed) {
        out.kind = BreakdownKind::IncurableWithinBound;
        out.step = *analysis.incurable_from;
        out.detail = "determinant tail is zero from index " +
                     std::to_string(*analysis.incurable_from) + " on";
        return out;
    }
    if (state.stop_kind == BreakdownKind::Lucky) {
        out.kind = BreakdownKind::Lucky;
        out.detail = both_closed ? "both Krylov spaces invariant" : "invariant subspace reached";
        return out;
    }
    if (state.stop_kind == BreakdownKind::Serious || state.truncated) {
        out.kind = BreakdownKind::Serious;
        out.detail = analysis.incurable_from && !analysis.incurable_certain
                         ? "coupling vanished; tail zero within horizon only"
                         : "coupling vanished; a later determinant is nonzero";
        return out;
    }
    out.kind = BreakdownKind::None;
    out.detail = "no breakdown";
    return out;
}

}  // namespace fopq
