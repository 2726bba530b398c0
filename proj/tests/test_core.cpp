#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "fopq/functional.hpp"
#include "fopq/types.hpp"
#include "support.hpp"

using namespace fopq;
using fopq::testing::fixture_b;

namespace {

Functional diag_triplet() {
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(2, 2);
    a(0, 0) = 1.0;
    a(1, 1) = 2.0;
    Eigen::VectorXcd v(2), w(2);
    v << 1.0, 1.0;
    w << 1.0, 0.0;
    return Functional::from_triplet(w, a, v);
}

}  // namespace

TEST_CASE("moment lookup") {
    Functional f = Functional::from_moments(MomentSequence({{1, 0}, {2, 0}, {5, 0}}));
    CHECK(f.moment(0) == Complex(1.0));
    CHECK(f.moment(2) == Complex(5.0));
    CHECK_THROWS_AS(f.moment(3), HorizonExceeded);
}

TEST_CASE("triplet moment by repeated products") {
    Functional f = diag_triplet();
    // w* A^j v picks only the unit eigenvalue.
    CHECK(std::abs(f.moment(5) - Complex(1.0)) < 1e-14);
    CHECK(std::abs(f.moment(0) - Complex(1.0)) < 1e-14);
}

TEST_CASE("apply on single-moment picks") {
    Functional f = Functional::from_moments(MomentSequence({{1, 0}, {0, 0}, {0, 0}, {1, 0}}));
    CHECK(f.apply(Polynomial::monomial(1)) == Complex(0.0));
    CHECK(f.apply(Polynomial({{1, 0}, {0, 0}, {0, 0}, {1, 0}})) == Complex(2.0));
    CHECK_THROWS_AS(f.apply(Polynomial::monomial(4)), HorizonExceeded);
}

TEST_CASE("apply on triplet") {
    Functional f = diag_triplet();
    // (lambda - 1) annihilates the only weighted eigenvalue.
    Polynomial p({{-1.0, 0.0}, {1.0, 0.0}});
    CHECK(std::abs(f.apply(p)) < 1e-14);
}

TEST_CASE("linearity and moment consistency") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    auto rand_poly = [&](std::size_t deg) {
        std::vector<Complex> c;
        for (std::size_t i = 0; i <= deg; ++i) c.emplace_back(dist(rng), dist(rng));
        return Polynomial(std::move(c));
    };

    std::vector<Complex> moments;
    for (int i = 0; i < 9; ++i) moments.emplace_back(dist(rng), dist(rng));
    Functional f = Functional::from_moments(MomentSequence(moments));

    for (int trial = 0; trial < 25; ++trial) {
        Polynomial p = rand_poly(4), q = rand_poly(4);
        Complex a(dist(rng), dist(rng)), b(dist(rng), dist(rng));
        Complex lhs = f.apply(a * p + b * q);
        Complex rhs = a * f.apply(p) + b * f.apply(q);
        CHECK(std::abs(lhs - rhs) < 1e-9 * (1.0 + std::abs(lhs)));
    }
    for (std::size_t j = 0; j < 9; ++j) CHECK(f.apply(Polynomial::monomial(j)) == f.moment(j));

    Functional g = diag_triplet();
    for (std::size_t j = 0; j < 12; ++j)
        CHECK(std::abs(g.apply(Polynomial::monomial(j)) - g.moment(j)) < 1e-9);
}

TEST_CASE("polynomial arithmetic") {
    Polynomial p({{1, 0}, {0, 0}, {3, 0}});  // 1 + 3x^2
    CHECK(p.degree() == 2);
    CHECK(p.eval(Complex(2.0)) == Complex(13.0));
    CHECK(p.eval_derivative(Complex(2.0), 1) == Complex(12.0));
    CHECK(p.eval_derivative(Complex(2.0), 2) == Complex(6.0));
    CHECK(p.eval_derivative(Complex(2.0), 3) == Complex(0.0));

    Polynomial q = p * Polynomial({{0, 0}, {1, 0}});
    CHECK(q.degree() == 3);
    CHECK(q.coeff(3) == Complex(3.0));

    auto div = q.divide(p);
    CHECK(div.quotient.degree() == 1);
    CHECK(div.remainder.is_zero());

    // Trailing zero coefficients are trimmed on construction.
    Polynomial z({{0, 0}, {0, 0}});
    CHECK(z.is_zero());
    CHECK(z.degree() == -1);
}

TEST_CASE("principal square root branch") {
    CHECK(principal_sqrt(Complex(-1.0, 0.0)) == Complex(0.0, 1.0));
    CHECK(principal_sqrt(Complex(-1.0, -0.0)) == Complex(0.0, 1.0));
    CHECK(principal_sqrt(Complex(4.0, 0.0)) == Complex(2.0, 0.0));
    CHECK(cpow(Complex(0.0), 0) == Complex(1.0));
    CHECK(cpow(Complex(2.0), 10) == Complex(1024.0));
}

TEST_CASE("tolerance policy validation") {
    TolerancePolicy tol;
    CHECK_NOTHROW(tol.validate());
    tol.cluster_tol = 0.0;
    CHECK_THROWS_AS(tol.validate(), std::invalid_argument);
    tol.cluster_tol = 1.5;
    CHECK_THROWS_AS(tol.validate(), std::invalid_argument);
}

TEST_CASE("moment sequence invariants") {
    CHECK_THROWS_AS(MomentSequence(std::vector<Complex>{}), std::invalid_argument);
    std::vector<Complex> bad{Complex(std::numeric_limits<double>::quiet_NaN(), 0.0)};
    CHECK_THROWS_AS(MomentSequence{bad}, std::invalid_argument);
    CHECK(fixture_b().horizon() == 4);
}
