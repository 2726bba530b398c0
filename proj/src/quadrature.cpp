#include "fopq/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace fopq {

namespace {

// Falling factorial j (j-1) ... (j-u+1); the u-th derivative of lambda^j
// is fall(j, u) lambda^{j-u}.
double falling(std::size_t j, std::size_t u) {
    if (u > j) return 0.0;
    double f = 1.0;
    for (std::size_t i = 0; i < u; ++i) f *= static_cast<double>(j - i);
    return f;
}

// Single-linkage clustering of points within the given radius.
std::vector<std::pair<Complex, std::size_t>> cluster_points(const std::vector<Complex>& pts,
                                                            double radius) {
    const std::size_t n = pts.size();
    std::vector<std::size_t> parent(n);
    for (std::size_t i = 0; i < n; ++i) parent[i] = i;
    std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::abs(pts[i] - pts[j]) <= radius) parent[find(i)] = find(j);

    std::vector<std::pair<Complex, std::size_t>> clusters;
    std::vector<long> slot(n, -1);
    std::vector<Complex> sums;
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t r = find(i);
        if (slot[r] < 0) {
            slot[r] = static_cast<long>(clusters.size());
            clusters.emplace_back(Complex(0.0), 0);
            sums.emplace_back(0.0);
        }
        auto& c = clusters[static_cast<std::size_t>(slot[r])];
        sums[static_cast<std::size_t>(slot[r])] += pts[i];
        c.second += 1;
    }
    for (std::size_t i = 0; i < clusters.size(); ++i)
        clusters[i].first = sums[i] / static_cast<double>(clusters[i].second);
    std::sort(clusters.begin(), clusters.end(), [](const auto& a, const auto& b) {
        if (a.first.real() != b.first.real()) return a.first.real() < b.first.real();
        return a.first.imag() < b.first.imag();
    });
    return clusters;
}

// Weights of the interpolatory rule on the given nodes: the confluent
// Vandermonde system against m_0..m_{n-1}.
std::vector<std::vector<Complex>> solve_weights(const Functional& functional,
                                                const std::vector<std::pair<Complex, std::size_t>>& nodes,
                                                const TolerancePolicy& tol) {
    std::size_t n = 0;
    for (const auto& [node, mult] : nodes) n += mult;
    Eigen::MatrixXcd v(n, n);
    Eigen::VectorXcd m(n);
    for (std::size_t j = 0; j < n; ++j) {
        m(static_cast<Eigen::Index>(j)) = functional.moment(j);
        std::size_t col = 0;
        for (const auto& [node, mult] : nodes)
            for (std::size_t u = 0; u < mult; ++u, ++col)
                v(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(col)) =
                    u > j ? Complex(0.0) : falling(j, u) * cpow(node, j - u);
    }
    Eigen::VectorXcd w = v.colPivHouseholderQr().solve(m);

    double resid = (v * w - m).cwiseAbs().maxCoeff();
    double scale = std::max(1.0, (v.cwiseAbs() * w.cwiseAbs()).maxCoeff() + m.cwiseAbs().maxCoeff());
    if (resid > tol.residual_tol * scale) throw IllConditionedWeights(resid / scale);

    std::vector<std::vector<Complex>> out;
    std::size_t col = 0;
    for (const auto& [node, mult] : nodes) {
        std::vector<Complex> ws;
        for (std::size_t u = 0; u < mult; ++u, ++col) ws.push_back(w(static_cast<Eigen::Index>(col)));
        out.push_back(std::move(ws));
    }
    return out;
}

QuadratureRule assemble_rule(const Functional& functional,
                             const std::vector<std::pair<Complex, std::size_t>>& nodes,
                             const TolerancePolicy& tol) {
    QuadratureRule rule;
    auto weights = solve_weights(functional, nodes, tol);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        QuadratureNode qn;
        qn.node = nodes[i].first;
        qn.multiplicity = nodes[i].second;
        qn.weights = weights[i];
        rule.nodes.push_back(std::move(qn));
        rule.n += nodes[i].second;
    }
    double wmax = rule.max_weight_abs();
    for (auto& qn : rule.nodes)
        qn.trailing_weight_suspect = std::abs(qn.weights.back()) <= tol.residual_tol * wmax;
    return rule;
}

}  // namespace

SmoothFunction smooth_from_polynomial(Polynomial p) {
    return [p = std::move(p)](Complex x, std::size_t j) { return p.eval_derivative(x, j); };
}

Complex QuadratureRule::evaluate(const SmoothFunction& f) const {
    Complex acc(0.0);
    for (const auto& qn : nodes)
        for (std::size_t j = 0; j < qn.multiplicity; ++j) acc += qn.weights[j] * f(qn.node, j);
    return acc;
}

double QuadratureRule::max_weight_abs() const {
    double m = 0.0;
    for (const auto& qn : nodes)
        for (Complex w : qn.weights) m = std::max(m, std::abs(w));
    return m;
}

QuadratureRule gauss_quadrature(const Functional& functional, std::size_t n,
                                const FopSequence& seq, const TolerancePolicy& tol) {
    if (n == 0) throw std::invalid_argument("n must be positive");
    if (seq.degree() < n) throw std::invalid_argument("sequence does not reach degree n");
    tol.validate();

    const bool before_nu1 = !seq.nu1() || *seq.nu1() > n;
    if (!before_nu1 && std::find(seq.nu.begin(), seq.nu.end(), n) == seq.nu.end()) {
        // Suggest alternatives from the full pattern, which may reach past
        // the degree the sequence was built to.
        HankelAnalysis analysis = analyze(functional, tol);
        std::vector<std::size_t> nearest;
        std::size_t below = 0;
        bool has_below = false;
        for (std::size_t v : analysis.regular_indices)
            if (v >= 1 && v < n) below = v, has_below = true;
        if (has_below) nearest.push_back(below);
        for (std::size_t v : analysis.regular_indices)
            if (v > n) {
                nearest.push_back(v);
                break;
            }
        throw NotRegularDegree(n, nearest);
    }

    BlockTridiagonal t = assemble_block_tridiagonal(seq).leading(n);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> eig(t.matrix, /*computeEigenvectors=*/false);
    std::vector<Complex> eigs(eig.eigenvalues().data(), eig.eigenvalues().data() + n);
    double radius = tol.cluster_tol * t.matrix.norm();
    auto clusters = cluster_points(eigs, radius);

    QuadratureRule rule = assemble_rule(functional, clusters, tol);
    rule.source_T = std::move(t);
    if (before_nu1) {
        // n < nu(1): the moments through m_{n-1} vanish and the rule is
        // identically zero; prefactor and nu1 are degenerate.
        rule.prefactor = Complex(0.0);
        rule.nu1 = 0;
    } else {
        rule.nu1 = *seq.nu1();
        rule.prefactor = rule.source_T.mu() * functional.moment(rule.nu1 - 1);
    }
    rule.exactness = degree_of_exactness(rule, functional, tol);
    return rule;
}

QuadratureRule interpolatory_rule(const Functional& functional,
                                  const std::vector<std::pair<Complex, std::size_t>>& nodes,
                                  const TolerancePolicy& tol) {
    QuadratureRule rule = assemble_rule(functional, nodes, tol);
    rule.exactness = degree_of_exactness(rule, functional, tol);
    return rule;
}

std::vector<std::pair<Complex, std::size_t>> polynomial_roots(const Polynomial& p,
                                                              const TolerancePolicy& tol) {
    const int d = p.degree();
    if (d <= 0) return {};
    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(d, d);
    for (int i = 1; i < d; ++i) companion(i, i - 1) = Complex(1.0);
    for (int i = 0; i < d; ++i)
        companion(i, d - 1) = -p.coeff(static_cast<std::size_t>(i)) / p.leading();
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> eig(companion, false);
    std::vector<Complex> eigs(eig.eigenvalues().data(), eig.eigenvalues().data() + d);
    double radius = tol.cluster_tol * std::max(1.0, companion.norm());
    return cluster_points(eigs, radius);
}

Complex apply_quadrature(const QuadratureRule& rule, const SmoothFunction& f) {
    return rule.evaluate(f);
}

Complex matrix_form_evaluate(const BlockTridiagonal& T, const Polynomial& p, Complex prefactor,
                             std::size_t nu1) {
    if (p.is_zero()) return Complex(0.0);
    if (nu1 == 0 || nu1 > T.size()) throw std::invalid_argument("nu1 must lie in 1..n");
    Eigen::VectorXcd basis = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(T.size()));
    basis(static_cast<Eigen::Index>(nu1 - 1)) = Complex(1.0);

    Eigen::VectorXcd acc = p.leading() * basis;
    for (int k = p.degree() - 1; k >= 0; --k)
        acc = T.matrix * acc + p.coeff(static_cast<std::size_t>(k)) * basis;
    return prefactor * acc(0);
}

MomentMatchReport matching_moment_check(const BlockTridiagonal& T, const Functional& functional,
                                        std::size_t k_max) {
    auto nu1 = T.nu1();
    if (!nu1) throw Error("matrix has no closed leading block; matching moment form undefined");
    Complex pref = T.mu() * functional.moment(*nu1 - 1);

    MomentMatchReport report;
    Eigen::VectorXcd u = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(T.size()));
    u(static_cast<Eigen::Index>(*nu1 - 1)) = Complex(1.0);
    double mmax = 0.0;
    for (std::size_t k = 0; k <= k_max; ++k) {
        Complex mk = functional.moment(k);
        mmax = std::max(mmax, std::abs(mk));
        double r = std::abs(pref * u(0) - mk);
        report.residuals.push_back(r);
        report.max_absolute = std::max(report.max_absolute, r);
        u = T.matrix * u;
    }
    report.max_relative = report.max_absolute / std::max(1.0, mmax);
    return report;
}

std::optional<std::size_t> matching_range(const HankelAnalysis& analysis, std::size_t n) {
    const auto& nu = analysis.regular_indices;
    std::size_t t = 0;
    for (std::size_t i = 0; i < nu.size(); ++i)
        if (nu[i] <= n) t = i;
    if (t + 1 < nu.size()) return nu[t] + nu[t + 1] - 2;
    if (analysis.incurable_from && analysis.incurable_certain) return std::nullopt;
    // nu(t+1) has not appeared within the window, so it is at least
    // max_index + 2 and the guaranteed range reaches nu(t) + max_index.
    return nu[t] + analysis.max_index();
}

DegreeOfExactness degree_of_exactness(const QuadratureRule& rule, const Functional& functional,
                                      const TolerancePolicy& tol) {
    std::size_t probe;
    if (auto h = functional.horizon())
        probe = *h;
    else
        probe = 2 * (rule.n + functional.dimension());

    DegreeOfExactness out;
    out.whole_range = true;
    for (std::size_t j = 0; j <= probe; ++j) {
        Complex acc(0.0);
        double abs_acc = 0.0;
        for (const auto& qn : rule.nodes)
            for (std::size_t u = 0; u < qn.multiplicity && u <= j; ++u) {
                Complex term = qn.weights[u] * falling(j, u) * cpow(qn.node, j - u);
                acc += term;
                abs_acc += std::abs(term);
            }
        Complex mj = functional.moment(j);
        double denom = std::max({1.0, std::abs(mj), abs_acc});
        if (std::abs(acc - mj) > tol.residual_tol * denom) {
            out.degree = j == 0 ? 0 : j - 1;
            out.whole_range = false;
            break;
        }
        out.degree = j;
    }
    return out;
}

}  // namespace fopq
