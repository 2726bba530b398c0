#include "fopq/fop.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fopq {

namespace {

// sigma_max / sigma_min, infinity when singular to working precision.
double condition_estimate(const Eigen::MatrixXcd& m) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    double smin = svd.singularValues().minCoeff();
    double smax = svd.singularValues().maxCoeff();
    if (smin == 0.0) return std::numeric_limits<double>::infinity();
    return smax / smin;
}

}  // namespace

Complex BlockTridiagonal::mu() const {
    Complex prod(1.0);
    if (!nu1()) return prod;
    for (std::size_t k = 0; k + 1 < *nu1(); ++k) prod *= betas.at(k);
    return Complex(1.0) / prod;
}

BlockTridiagonal BlockTridiagonal::leading(std::size_t k) const {
    BlockTridiagonal t;
    t.matrix = matrix.topLeftCorner(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
    for (std::size_t v : nu)
        if (v <= k) t.nu.push_back(v);
    for (std::size_t i = 0; i + 1 < k && i < betas.size(); ++i) t.betas.push_back(betas[i]);
    return t;
}

FopSequence build_fop_sequence(const Functional& functional, std::size_t n,
                               const HankelAnalysis& analysis) {
    FopSequence seq;
    seq.polys.push_back(Polynomial::one());
    seq.kinds.push_back(PolyKind::Regular);
    seq.orders.push_back(0);
    seq.nu.push_back(0);

    for (std::size_t m = 1; m <= n; ++m) {
        if (m - 1 > analysis.max_index()) throw InsufficientPattern(m, m - 1);
        const std::size_t block_start = seq.nu.back();
        if (!analysis.nonzero_at(m - 1)) {
            // Gap fill: two-term recurrence with alpha_{m,m-1} = 0.
            seq.polys.push_back(seq.polys.back().shifted(1));
            seq.kinds.push_back(PolyKind::QuasiOrthogonal);
            seq.orders.push_back(m - block_start);
            seq.alphas[{m, m - 1}] = Complex(0.0);
            seq.betas.emplace_back(1.0);
            continue;
        }

        // Close the block: solve the Gram system for the alpha coefficients.
        const std::size_t s = m - block_start;
        Eigen::MatrixXcd gram(s, s);
        Eigen::VectorXcd rhs(s);
        for (std::size_t r = 0; r < s; ++r) {
            for (std::size_t c = 0; c < s; ++c)
                gram(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                    functional.apply_product(seq.polys[block_start + r], seq.polys[block_start + c]);
            rhs(static_cast<Eigen::Index>(r)) =
                functional.apply_product(seq.polys[block_start + r], seq.polys[m - 1], 1);
        }
        if (condition_estimate(gram) > 1.0 / analysis.tol.zero_det_tol)
            throw SingularAlphaSystem(m);
        Eigen::VectorXcd a = gram.partialPivLu().solve(rhs);

        Complex gamma(0.0);
        std::size_t gamma_col = 0;
        if (seq.nu.size() >= 2) {
            // gamma_m = L(lambda p_{m-1} p_{nu(t)-1}) / L(p_{nu(t)-1} p_{nu(t-1)})
            const std::size_t prev_start = seq.nu[seq.nu.size() - 2];
            Complex num = functional.apply_product(seq.polys[m - 1], seq.polys[block_start - 1], 1);
            Polynomial prod = seq.polys[block_start - 1] * seq.polys[prev_start];
            Complex den(0.0);
            double den_scale = 0.0;
            for (std::size_t c = 0; c < prod.coeffs().size(); ++c) {
                Complex term = prod.coeffs()[c] * functional.moment(c);
                den += term;
                den_scale += std::abs(term);
            }
            if (std::abs(den) <= analysis.tol.zero_det_tol * std::max(den_scale, 1e-300))
                throw SingularAlphaSystem(m);
            gamma = num / den;
            gamma_col = prev_start;
        }

        Polynomial p = seq.polys[m - 1].shifted(1);
        for (std::size_t r = 0; r < s; ++r)
            p = p - a(static_cast<Eigen::Index>(r)) * seq.polys[block_start + r];
        if (seq.nu.size() >= 2) p = p - gamma * seq.polys[gamma_col];

        seq.polys.push_back(std::move(p));
        seq.kinds.push_back(PolyKind::Regular);
        seq.orders.push_back(0);
        for (std::size_t r = 0; r < s; ++r) seq.alphas[{m, block_start + r}] = a(static_cast<Eigen::Index>(r));
        seq.betas.emplace_back(1.0);
        if (seq.nu.size() >= 2) seq.gammas[m] = gamma;
        seq.nu.push_back(m);
    }
    return seq;
}

BlockTridiagonal assemble_block_tridiagonal(const FopSequence& seq) {
    const std::size_t n = seq.degree();
    BlockTridiagonal t;
    t.matrix = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (const auto& [key, alpha] : seq.alphas) {
        auto [m, i] = key;
        if (m <= n) t.matrix(static_cast<Eigen::Index>(m - 1), static_cast<Eigen::Index>(i)) = alpha;
    }
    for (std::size_t m = 1; m < n; ++m) {
        t.matrix(static_cast<Eigen::Index>(m - 1), static_cast<Eigen::Index>(m)) = seq.betas[m - 1];
        t.betas.push_back(seq.betas[m - 1]);
    }
    for (const auto& [m, gamma] : seq.gammas) {
        if (m > n) continue;
        // gamma_{nu(t)} sits in column nu(t-2).
        std::size_t pos = 0;
        while (seq.nu[pos] != m) ++pos;
        t.matrix(static_cast<Eigen::Index>(m - 1), static_cast<Eigen::Index>(seq.nu[pos - 2])) = gamma;
    }
    for (std::size_t v : seq.nu)
        if (v <= n) t.nu.push_back(v);
    return t;
}

BlockTridiagonal jacobi_matrix(const Functional& functional, std::size_t n) {
    if (n == 0) throw std::invalid_argument("n must be positive");
    HankelAnalysis analysis = determinant_sequence(functional, n);
    for (std::size_t k = 0; k < n; ++k)
        if (analysis.is_zero[k]) throw NotQuasiDefinite(k);

    std::vector<Polynomial> p;
    std::vector<Complex> alpha(n), beta(n, Complex(0.0));
    p.push_back(Polynomial::constant(Complex(1.0) / principal_sqrt(functional.moment(0))));
    for (std::size_t k = 0; k < n; ++k) {
        alpha[k] = functional.apply_product(p[k], p[k], 1);
        if (k + 1 == n) break;
        Polynomial hat = p[k].shifted(1) - alpha[k] * p[k];
        if (k > 0) hat = hat - beta[k] * p[k - 1];
        beta[k + 1] = principal_sqrt(functional.apply_product(hat, hat));
        p.push_back(hat * (Complex(1.0) / beta[k + 1]));
    }

    BlockTridiagonal j;
    j.matrix = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t k = 0; k < n; ++k) {
        j.matrix(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) = alpha[k];
        if (k > 0) {
            j.matrix(static_cast<Eigen::Index>(k - 1), static_cast<Eigen::Index>(k)) = beta[k];
            j.matrix(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k - 1)) = beta[k];
            j.betas.push_back(beta[k]);
        }
    }
    for (std::size_t v = 0; v <= n; ++v) j.nu.push_back(v);
    return j;
}

OrthogonalityReport verify_orthogonality(const Functional& functional, const FopSequence& seq) {
    OrthogonalityReport report;
    for (std::size_t m = 0; m < seq.polys.size(); ++m) {
        const Polynomial& p = seq.polys[m];
        const std::size_t order = seq.orders[m];
        if (m == 0) continue;

        auto residual_at = [&](std::size_t j, double& scale) {
            Complex acc(0.0);
            double abs_acc = 0.0;
            for (std::size_t c = 0; c < p.coeffs().size(); ++c) {
                Complex term = p.coeffs()[c] * functional.moment(c + j);
                acc += term;
                abs_acc += std::abs(term);
            }
            scale = std::max(scale, abs_acc);
            return std::abs(acc);
        };

        OrthogonalityReport::Entry entry{m, order, 0.0, 0.0, 0.0};
        // Contracted range: j <= m - order - 1.
        for (std::size_t j = 0; j + order + 1 <= m; ++j)
            entry.max_residual = std::max(entry.max_residual, residual_at(j, entry.scale));
        entry.extended_residual = entry.max_residual;

        if (seq.kinds[m] == PolyKind::Regular) {
            // Regular p_{nu(t)} stays orthogonal through degree nu(t+1) - 2.
            auto it = std::find(seq.nu.begin(), seq.nu.end(), m);
            if (it != seq.nu.end() && it + 1 != seq.nu.end()) {
                std::size_t next = *(it + 1);
                for (std::size_t j = m; j + 2 <= next; ++j)
                    entry.extended_residual = std::max(entry.extended_residual, residual_at(j, entry.scale));
            }
        }
        report.max_residual = std::max(report.max_residual, entry.extended_residual);
        double rel = entry.extended_residual == 0.0
                         ? 0.0
                         : entry.extended_residual / std::max(entry.scale, 1e-300);
        report.max_relative = std::max(report.max_relative, rel);
        report.entries.push_back(entry);
    }
    return report;
}

Polynomial characteristic_polynomial(const Eigen::MatrixXcd& t) {
    const std::size_t n = static_cast<std::size_t>(t.rows());
    // Power traces tr(T^j), then the Newton identities for the elementary
    // symmetric functions. No eigensolve, so defective matrices are fine.
    std::vector<Complex> traces(n + 1, Complex(0.0));
    Eigen::MatrixXcd power = Eigen::MatrixXcd::Identity(t.rows(), t.cols());
    for (std::size_t j = 1; j <= n; ++j) {
        power = power * t;
        traces[j] = power.trace();
    }
    std::vector<Complex> e(n + 1, Complex(0.0));
    e[0] = Complex(1.0);
    for (std::size_t k = 1; k <= n; ++k) {
        Complex acc(0.0);
        double sign = 1.0;
        for (std::size_t i = 1; i <= k; ++i) {
            acc += sign * e[k - i] * traces[i];
            sign = -sign;
        }
        e[k] = acc / static_cast<double>(k);
    }
    std::vector<Complex> coeffs(n + 1, Complex(0.0));
    for (std::size_t k = 0; k <= n; ++k) {
        double sign = (k % 2 == 0) ? 1.0 : -1.0;
        coeffs[n - k] = sign * e[k];
    }
    return Polynomial(std::move(coeffs));
}

}  // namespace fopq
