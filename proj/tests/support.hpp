// Shared fixtures and oracles for the test suites.
//
// The discrete-measure generator is the independent ground truth used across
// the quadrature and Lanczos tests: a functional built as an explicit sum
// sum_i sum_j w_{i,j} f^(j)(x_i) has closed-form moments, a known Gauss rule
// (itself), and a known realization dimension.
#ifndef FOPQ_TESTS_SUPPORT_HPP
#define FOPQ_TESTS_SUPPORT_HPP

#include <random>
#include <vector>

#include "fopq/functional.hpp"
#include "fopq/types.hpp"

namespace fopq::testing {

// --- fixtures -------------------------------------------------------------

// Constant moments; rank-1 Hankel, incurable tail after degree 1.
inline MomentSequence fixture_ones(std::size_t count = 5) {
    return MomentSequence(std::vector<Complex>(count, Complex(1.0)));
}

// (1, 0, 0, 1, 0): determinant pattern x0x, regular indices 0, 1, 3.
inline MomentSequence fixture_b() {
    return MomentSequence({{1.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}, {1.0, 0.0}, {0.0, 0.0}});
}

// Moments of (delta_1 + delta_3) / 2: (1, 2, 5, 14, 41, 122), quasi-definite.
inline MomentSequence fixture_c() {
    return MomentSequence({{1.0, 0.0}, {2.0, 0.0}, {5.0, 0.0}, {14.0, 0.0}, {41.0, 0.0}, {122.0, 0.0}});
}

// Moments of f -> f(0) + f'(0): (1, 1, 0, 0, 0, 0); double node at zero.
inline MomentSequence fixture_e() {
    return MomentSequence({{1.0, 0.0}, {1.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}});
}

// Moments of (delta_1 - delta_{-1}) / 2: (0, 1, 0, 1, 0, 1); nu(1) = 2.
inline MomentSequence fixture_shifted() {
    return MomentSequence({{0.0, 0.0}, {1.0, 0.0}, {0.0, 0.0}, {1.0, 0.0}, {0.0, 0.0}, {1.0, 0.0}});
}

// --- discrete-measure oracle ----------------------------------------------

// One term w f^(order)(node) of an explicit functional.
struct MeasureTerm {
    Complex node;
    std::size_t order = 0;
    Complex weight;
};

struct DiscreteMeasure {
    std::vector<MeasureTerm> terms;

    // m_k = sum_i w_i * (d^{order_i} lambda^k)(node_i), in closed form.
    Complex moment(std::size_t k) const {
        Complex acc(0.0);
        for (const auto& t : terms) {
            if (t.order > k) continue;
            double fall = 1.0;
            for (std::size_t u = 0; u < t.order; ++u) fall *= static_cast<double>(k - u);
            acc += t.weight * fall * cpow(t.node, k - t.order);
        }
        return acc;
    }

    std::vector<Complex> moments(std::size_t count) const {
        std::vector<Complex> m;
        m.reserve(count);
        for (std::size_t k = 0; k < count; ++k) m.push_back(moment(k));
        return m;
    }

    Functional functional(std::size_t count) const {
        return Functional::from_moments(MomentSequence(moments(count)));
    }

    // Total node count, multiplicities included (one term per weight slot).
    std::size_t size() const { return terms.size(); }
};

// Random nodes separated by at least min_sep, magnitudes around 1.
inline std::vector<Complex> separated_nodes(std::mt19937& rng, std::size_t count, bool complex_nodes,
                                            double min_sep = 0.4) {
    std::uniform_real_distribution<double> dist(-1.5, 1.5);
    std::vector<Complex> nodes;
    while (nodes.size() < count) {
        Complex cand(dist(rng), complex_nodes ? dist(rng) : 0.0);
        bool ok = true;
        for (Complex n : nodes) ok = ok && std::abs(n - cand) >= min_sep;
        if (ok) nodes.push_back(cand);
    }
    return nodes;
}

// Random discrete measure: ell distinct nodes with multiplicities, weights
// bounded away from zero so the instance stays in generic position.
inline DiscreteMeasure random_measure(std::mt19937& rng, std::size_t ell, std::size_t max_mult,
                                      bool complex_nodes, bool zero_mean = false) {
    std::uniform_int_distribution<std::size_t> mult_dist(1, max_mult);
    std::uniform_real_distribution<double> mag(0.4, 1.6);
    std::uniform_real_distribution<double> sign(0.0, 1.0);
    auto weight = [&]() {
        double re = mag(rng) * (sign(rng) < 0.5 ? -1.0 : 1.0);
        double im = complex_nodes ? mag(rng) * (sign(rng) < 0.5 ? -1.0 : 1.0) : 0.0;
        return Complex(re, im);
    };

    DiscreteMeasure m;
    auto nodes = separated_nodes(rng, ell, complex_nodes);
    for (std::size_t i = 0; i < ell; ++i) {
        std::size_t mult = mult_dist(rng);
        for (std::size_t u = 0; u < mult; ++u) m.terms.push_back({nodes[i], u, weight()});
    }
    if (zero_mean) {
        // Force m_0 = 0 (nu(1) > 1) by balancing the order-0 weights.
        Complex total(0.0);
        MeasureTerm* last = nullptr;
        for (auto& t : m.terms)
            if (t.order == 0) {
                total += t.weight;
                last = &t;
            }
        last->weight -= total;
    }
    return m;
}

// --- helpers ---------------------------------------------------------------

inline Polynomial poly_from_roots(const std::vector<Complex>& roots) {
    Polynomial p = Polynomial::one();
    for (Complex r : roots) p = p * Polynomial({-r, Complex(1.0)});
    return p;
}

inline double poly_distance(const Polynomial& a, const Polynomial& b) {
    double num = 0.0;
    Polynomial d = a - b;
    for (Complex c : d.coeffs()) num = std::max(num, std::abs(c));
    double den = std::max({1.0, a.max_abs_coeff(), b.max_abs_coeff()});
    return num / den;
}

}  // namespace fopq::testing

#endif  // FOPQ_TESTS_SUPPORT_HPP
