#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "fopq/fop.hpp"
#include "fopq/realization.hpp"
#include "support.hpp"

using namespace fopq;
using namespace fopq::testing;

namespace {

FopSequence build(const Functional& f, std::size_t n) {
    return build_fop_sequence(f, n, analyze(f));
}

// lambda p_m(lambda) = sum_j T_{m,j} p_j(lambda) + beta_{m+1} p_{m+1}(lambda)
// as polynomial identities, row by row.
double recurrence_identity_residual(const FopSequence& seq, const BlockTridiagonal& t) {
    double worst = 0.0;
    const std::size_t n = t.size();
    for (std::size_t m = 0; m < n; ++m) {
        Polynomial lhs = seq.polys[m].shifted(1);
        for (std::size_t j = 0; j < n; ++j)
            lhs = lhs - t.matrix(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(j)) *
                            seq.polys[j];
        if (m + 1 < n) continue;  // inner rows already fully inside T
        lhs = lhs - seq.betas[m] * seq.polys[m + 1];
        worst = std::max(worst, poly_distance(lhs, Polynomial::zero()));
    }
    // Inner rows: the beta_{m+1} term is the superdiagonal entry of T, so
    // the full row must cancel without any extra term.
    for (std::size_t m = 0; m + 1 < n; ++m) {
        Polynomial lhs = seq.polys[m].shifted(1);
        for (std::size_t j = 0; j < n; ++j)
            lhs = lhs - t.matrix(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(j)) *
                            seq.polys[j];
        worst = std::max(worst, poly_distance(lhs, Polynomial::zero()));
    }
    return worst;
}

}  // namespace

TEST_CASE("sequence for the double-node fixture") {
    Functional f = Functional::from_moments(fixture_e());
    FopSequence seq = build(f, 2);
    CHECK(poly_distance(seq.poly(0), Polynomial::one()) == 0.0);
    CHECK(poly_distance(seq.poly(1), Polynomial({{-1, 0}, {1, 0}})) < 1e-14);
    CHECK(poly_distance(seq.poly(2), Polynomial::monomial(2)) < 1e-14);
    CHECK(seq.nu == std::vector<std::size_t>{0, 1, 2});
}

TEST_CASE("sequence for the gap fixture") {
    Functional f = Functional::from_moments(fixture_b());
    FopSequence seq = build(f, 2);
    CHECK(poly_distance(seq.poly(1), Polynomial::monomial(1)) < 1e-14);
    CHECK(poly_distance(seq.poly(2), Polynomial::monomial(2)) < 1e-14);
    CHECK(seq.kinds[2] == PolyKind::QuasiOrthogonal);
    CHECK(seq.orders[2] == 1);

    // Degree 3 needs m_5; the raw fixture runs out of moments.
    CHECK_THROWS_AS(build(f, 3), HorizonExceeded);

    // The trivial realization extends the stream (m_5 = 0, ...), and the
    // regular degree-3 polynomial is lambda^3 - 1.
    RealizationTriplet t = trivial_realization(fixture_b());
    Functional fe = Functional::from_triplet(t.w, t.A, t.v);
    FopSequence ext = build(fe, 3);
    CHECK(ext.kinds[3] == PolyKind::Regular);
    CHECK(poly_distance(ext.poly(3), Polynomial({{-1, 0}, {0, 0}, {0, 0}, {1, 0}})) < 1e-12);
    CHECK(ext.gammas.at(3) == Complex(1.0));
}

TEST_CASE("centered one-point measure") {
    Functional f = Functional::from_moments(MomentSequence({{1, 0}, {0, 0}}));
    FopSequence seq = build(f, 1);
    CHECK(poly_distance(seq.poly(1), Polynomial::monomial(1)) < 1e-14);
}

TEST_CASE("block tridiagonal assembly") {
    Functional leg = Functional::from_moments(MomentSequence({{1, 0}, {0, 0}, {1.0 / 3.0, 0}}));
    BlockTridiagonal t1 = assemble_block_tridiagonal(build(leg, 1));
    CHECK(t1.size() == 1);
    CHECK(std::abs(t1.matrix(0, 0)) < 1e-15);

    Functional ones = Functional::from_moments(fixture_ones(3));
    BlockTridiagonal ta = assemble_block_tridiagonal(build(ones, 1));
    CHECK(std::abs(ta.matrix(0, 0) - Complex(1.0)) < 1e-15);

    RealizationTriplet tb = trivial_realization(fixture_b());
    Functional fb = Functional::from_triplet(tb.w, tb.A, tb.v);
    FopSequence seq = build(fb, 3);
    BlockTridiagonal t3 = assemble_block_tridiagonal(seq);
    REQUIRE(t3.size() == 3);
    // Rows: shift structure with the gamma coupling at (3,1) in 1-based
    // terms, i.e. entry (2,0).
    CHECK(std::abs(t3.matrix(0, 1) - Complex(1.0)) < 1e-14);
    CHECK(std::abs(t3.matrix(1, 2) - Complex(1.0)) < 1e-14);
    CHECK(std::abs(t3.matrix(2, 0) - Complex(1.0)) < 1e-12);
    // Zero above the first superdiagonal.
    CHECK(std::abs(t3.matrix(0, 2)) < 1e-14);
    for (Complex b : t3.betas) CHECK(std::abs(b) > 0.0);
    CHECK(t3.nu == std::vector<std::size_t>{0, 1, 3});
}

TEST_CASE("recurrence identity holds in matrix form") {
    std::mt19937 rng(5);
    for (int trial = 0; trial < 6; ++trial) {
        DiscreteMeasure m = random_measure(rng, 2 + trial % 3, 2, trial % 2 == 1);
        std::size_t n = std::min<std::size_t>(m.size(), 6);
        Functional f = m.functional(2 * n + 2);
        FopSequence seq = build(f, n);
        BlockTridiagonal t = assemble_block_tridiagonal(seq);
        CHECK(recurrence_identity_residual(seq, t) < 1e-9);
    }

    RealizationTriplet tb = trivial_realization(fixture_b());
    Functional fb = Functional::from_triplet(tb.w, tb.A, tb.v);
    FopSequence seq = build(fb, 3);
    CHECK(recurrence_identity_residual(seq, assemble_block_tridiagonal(seq)) < 1e-12);
}

TEST_CASE("jacobi matrix on quasi-definite input") {
    Complex a(0.7, -0.3);
    Functional f1 = Functional::from_moments(MomentSequence({{1, 0}, a}));
    BlockTridiagonal j1 = jacobi_matrix(f1, 1);
    CHECK(std::abs(j1.matrix(0, 0) - a) < 1e-15);

    Functional fc = Functional::from_moments(fixture_c());
    BlockTridiagonal j2 = jacobi_matrix(fc, 2);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> eig(j2.matrix);
    std::vector<double> vals{eig.eigenvalues()(0).real(), eig.eigenvalues()(1).real()};
    std::sort(vals.begin(), vals.end());
    CHECK(vals[0] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(vals[1] == doctest::Approx(3.0).epsilon(1e-10));
    // Symmetric complex tridiagonal.
    CHECK(j2.matrix(0, 1) == j2.matrix(1, 0));

    Functional bad = Functional::from_moments(MomentSequence({{1, 0}, {0, 0}, {0, 0}}));
    CHECK_THROWS_AS(jacobi_matrix(bad, 2), NotQuasiDefinite);
}

TEST_CASE("verify orthogonality on fixtures") {
    Functional fe = Functional::from_moments(fixture_e());
    FopSequence se = build(fe, 2);
    OrthogonalityReport re = verify_orthogonality(fe, se);
    CHECK(re.max_residual < 1e-14);

    // Extended orthogonality: p_1 = lambda stays orthogonal against lambda
    // because Delta_1 = 0 (m_2 = 0).
    Functional fb = Functional::from_moments(fixture_b());
    FopSequence sb = build(fb, 2);
    OrthogonalityReport rb = verify_orthogonality(fb, sb);
    CHECK(rb.max_residual < 1e-14);

    std::mt19937 rng(17);
    for (int trial = 0; trial < 5; ++trial) {
        DiscreteMeasure m = random_measure(rng, 3, 2, trial % 2 == 0);
        std::size_t n = std::min<std::size_t>(m.size(), 6);
        Functional f = m.functional(2 * n + 2);
        OrthogonalityReport r = verify_orthogonality(f, build(f, n));
        CHECK(r.max_relative < 1e-9);
    }
}

TEST_CASE("characteristic polynomial identity") {
    // det(lambda I - T_n) equals the monic p_n on every fixture.
    auto check_fixture = [](const Functional& f, std::size_t n) {
        FopSequence seq = build_fop_sequence(f, n, analyze(f));
        BlockTridiagonal t = assemble_block_tridiagonal(seq);
        Polynomial chi = characteristic_polynomial(t.matrix);
        CHECK(poly_distance(chi, seq.poly(n)) < 1e-8);
    };
    check_fixture(Functional::from_moments(fixture_e()), 2);
    check_fixture(Functional::from_moments(fixture_c()), 2);
    check_fixture(Functional::from_moments(fixture_shifted()), 2);
    RealizationTriplet tb = trivial_realization(fixture_b());
    check_fixture(Functional::from_triplet(tb.w, tb.A, tb.v), 3);

    std::mt19937 rng(29);
    for (int trial = 0; trial < 6; ++trial) {
        DiscreteMeasure m = random_measure(rng, 3 + trial % 2, 2, trial % 2 == 1);
        std::size_t n = std::min<std::size_t>(m.size(), 8);
        check_fixture(m.functional(2 * n + 2), n);
    }
}

TEST_CASE("jacobi and monic assembly are similar") {
    for (int trial = 0; trial < 5; ++trial) {
        std::mt19937 rng(41 + trial);
        DiscreteMeasure m = random_measure(rng, 4, 1, trial % 2 == 1);
        Functional f = m.functional(2 * m.size() + 2);
        std::size_t n = m.size();
        BlockTridiagonal monic = assemble_block_tridiagonal(build(f, n));
        BlockTridiagonal jac = jacobi_matrix(f, n);
        Polynomial a = characteristic_polynomial(monic.matrix);
        Polynomial b = characteristic_polynomial(jac.matrix);
        CHECK(poly_distance(a, b) < 1e-8);
    }
}

TEST_CASE("gap polynomials factor through the last regular polynomial") {
    RealizationTriplet tb = trivial_realization(fixture_b());
    Functional fb = Functional::from_triplet(tb.w, tb.A, tb.v);
    FopSequence seq = build(fb, 3);
    // p_2 = lambda p_1 exactly under the alpha = 0 convention.
    auto div = seq.poly(2).divide(seq.poly(1));
    CHECK(div.remainder.is_zero());
    CHECK(poly_distance(div.quotient, Polynomial::monomial(1)) < 1e-14);
}

TEST_CASE("inconsistent analysis raises the singular system error") {
    // Claim degree 2 is regular for the constant-moment fixture; the block
    // Gram is then exactly singular.
    Functional f = Functional::from_moments(fixture_ones(7));
    HankelAnalysis lying = HankelAnalysis::from_pattern("xxx");
    CHECK_THROWS_AS(build_fop_sequence(f, 2, lying), SingularAlphaSystem);
}
