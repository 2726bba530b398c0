#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "fopq/lanczos.hpp"
#include "fopq/quadrature.hpp"
#include "fopq/realization.hpp"
#include "support.hpp"

using namespace fopq;
using namespace fopq::testing;

namespace {

// Diagonal realization of a discrete measure with simple nodes:
// L(p) = sum_i w_i p(x_i) = w* p(A) v with A = diag(x), v = 1, w = conj(w_i).
RealizationTriplet measure_triplet(const DiscreteMeasure& m) {
    const std::size_t n = m.terms.size();
    RealizationTriplet t;
    t.A = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    t.v = Eigen::VectorXcd::Ones(static_cast<Eigen::Index>(n));
    t.w = Eigen::VectorXcd(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        t.A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = m.terms[i].node;
        t.w(static_cast<Eigen::Index>(i)) = std::conj(m.terms[i].weight);
    }
    return t;
}

std::vector<Polynomial> block_char_polys(const BlockTridiagonal& t) {
    std::vector<Polynomial> out;
    for (std::size_t i = 0; i + 1 < t.nu.size(); ++i) {
        std::size_t from = t.nu[i], to = t.nu[i + 1];
        Eigen::MatrixXcd block = t.matrix.block(static_cast<Eigen::Index>(from),
                                                static_cast<Eigen::Index>(from),
                                                static_cast<Eigen::Index>(to - from),
                                                static_cast<Eigen::Index>(to - from));
        out.push_back(characteristic_polynomial(block));
    }
    return out;
}

}  // namespace

TEST_CASE("plain run on a hermitian pair") {
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(2, 2);
    a(0, 0) = 1.0;
    a(1, 1) = 3.0;
    Eigen::VectorXcd v(2);
    v << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    auto [state, report] = lanczos(a, v, v, 2);
    CHECK(report.kind == BreakdownKind::None);
    REQUIRE(state.T.size() == 2);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> eig(state.T.matrix);
    std::vector<double> vals{eig.eigenvalues()(0).real(), eig.eigenvalues()(1).real()};
    std::sort(vals.begin(), vals.end());
    CHECK(vals[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(vals[1] == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(state.biorthogonality_residual(false) < 1e-12);
    CHECK(state.krylov_residual(a) < 1e-12);
}

TEST_CASE("lucky stop with an incurable moment tail") {
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(2, 2);
    a(0, 0) = 1.0;
    a(1, 1) = 2.0;
    Eigen::VectorXcd v(2), w(2);
    v << 1.0, 1.0;
    w << 1.0, 0.0;
    auto [state, report] = lanczos(a, v, w, 2);
    CHECK(report.kind == BreakdownKind::Lucky);  // w-hat vanished, v-hat did not
    CHECK(report.step == 1);
    CHECK(state.w_vanished);
    CHECK_FALSE(state.v_vanished);
    REQUIRE(state.T.size() == 1);
    CHECK(std::abs(state.T.matrix(0, 0) - Complex(1.0)) < 1e-14);

    HankelAnalysis analysis = analyze(Functional::from_triplet(w, a, v));
    BreakdownReport refined = classify_breakdown(state, analysis);
    CHECK(refined.kind == BreakdownKind::IncurableWithinBound);
    CHECK(refined.step == 1);
}

TEST_CASE("zero initial coupling is rejected") {
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Identity(2, 2);
    Eigen::VectorXcd v(2), w(2);
    v << 1.0, 0.0;
    w << 0.0, 1.0;
    CHECK_THROWS_AS(lanczos(a, v, w, 2), ZeroInitialCoupling);
}

TEST_CASE("serious breakdown on the gap fixture") {
    RealizationTriplet t = trivial_realization(fixture_b());
    auto [state, report] = lanczos(t.A, t.v, t.w, 5);
    CHECK(report.kind == BreakdownKind::Serious);
    CHECK(report.step == 1);
    CHECK(std::abs(state.last_coupling) < 1e-14);
    CHECK_FALSE(state.v_vanished);
    CHECK_FALSE(state.w_vanished);

    // A later determinant is nonzero, so the breakdown is curable.
    HankelAnalysis analysis = analyze(Functional::from_triplet(t.w, t.A, t.v));
    CHECK(classify_breakdown(state, analysis).kind == BreakdownKind::Serious);
}

TEST_CASE("near-breakdown couplings count as breakdowns") {
    MomentSequence nearly({{1, 0}, {0, 0}, {1e-14, 0}, {1, 0}, {0, 0}});
    RealizationTriplet t = trivial_realization(nearly);
    auto [state, report] = lanczos(t.A, t.v, t.w, 5);
    CHECK(report.kind == BreakdownKind::Serious);
    CHECK(std::abs(state.last_coupling) > 0.0);
    CHECK(std::abs(state.last_coupling) < 1e-13);
}

TEST_CASE("identity matrix stops lucky after one step") {
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Identity(3, 3);
    Eigen::VectorXcd v(3), w(3);
    v << 1.0, 0.5, -0.25;
    w << 1.0, 0.0, 0.5;
    auto [state, report] = lanczos(a, v, w, 3);
    CHECK(report.kind == BreakdownKind::Lucky);
    CHECK(state.v_vanished);
    CHECK(state.w_vanished);
    REQUIRE(state.T.size() == 1);
    CHECK(std::abs(state.T.matrix(0, 0) - Complex(1.0)) < 1e-14);

    // Both spaces closed at once: a genuinely lucky stop, not incurable.
    HankelAnalysis analysis = analyze(Functional::from_triplet(w, a, v));
    CHECK(classify_breakdown(state, analysis).kind == BreakdownKind::Lucky);

    auto [ls, lr] = look_ahead_lanczos(a, v, w, 6);
    CHECK(lr.kind == BreakdownKind::Lucky);
    CHECK(ls.T.size() == 1);
}

TEST_CASE("look-ahead bridges the singular degree of the gap fixture") {
    RealizationTriplet t = trivial_realization(fixture_b());
    Functional f = Functional::from_triplet(t.w, t.A, t.v);

    auto [state, report] = look_ahead_lanczos(t.A, t.v, t.w, 4);
    CHECK(state.T.nu == std::vector<std::size_t>{0, 1, 3});
    CHECK(state.biorthogonality_residual(true) < 1e-10);
    CHECK(state.krylov_residual(t.A) < 1e-10);

    // The produced T agrees with the polynomial-side construction block by
    // block (normalization-invariant comparison).
    HankelAnalysis analysis = analyze(f);
    FopSequence seq = build_fop_sequence(f, 3, analysis);
    BlockTridiagonal monic = assemble_block_tridiagonal(seq);
    auto lan_blocks = block_char_polys(state.T);
    auto fop_blocks = block_char_polys(monic);
    REQUIRE(lan_blocks.size() == fop_blocks.size());
    for (std::size_t i = 0; i < lan_blocks.size(); ++i)
        CHECK(poly_distance(lan_blocks[i], fop_blocks[i]) < 1e-10);

    // Moment consistency over the guaranteed range.
    BlockTridiagonal t3 = state.T.leading(3);
    auto range = matching_range(analysis, 3);
    REQUIRE(range.has_value());
    MomentMatchReport match = matching_moment_check(t3, f, *range);
    CHECK(match.max_relative < 1e-10);

    // With the full budget the run hits the incurable bound: the pattern
    // closes at 4 and the tail is all zero.
    auto [full, full_report] = look_ahead_lanczos(t.A, t.v, t.w, 10);
    CHECK(full.truncated);
    BreakdownReport refined = classify_breakdown(full, analysis);
    CHECK(refined.kind == BreakdownKind::IncurableWithinBound);
    CHECK(refined.step == 4);
}

TEST_CASE("look-ahead equals the plain run on quasi-definite input") {
    std::mt19937 rng(97);
    for (int trial = 0; trial < 6; ++trial) {
        DiscreteMeasure m = random_measure(rng, 4, 1, trial % 2 == 0);
        RealizationTriplet t = measure_triplet(m);
        const std::size_t n = m.size();

        auto [plain, plain_report] = lanczos(t.A, t.v, t.w, n);
        auto [ahead, ahead_report] = look_ahead_lanczos(t.A, t.v, t.w, n);
        REQUIRE(plain.T.size() == n);
        REQUIRE(ahead.T.size() == n);
        // Every block is scalar.
        CHECK(ahead.T.nu.size() == n + 1);

        Polynomial pa = characteristic_polynomial(plain.T.matrix);
        Polynomial pb = characteristic_polynomial(ahead.T.matrix);
        CHECK(poly_distance(pa, pb) < 1e-8);

        CHECK(plain.biorthogonality_residual(false) < 1e-9);
        CHECK(ahead.biorthogonality_residual(true) < 1e-9);
        CHECK(plain.krylov_residual(t.A) < 1e-10);
        CHECK(ahead.krylov_residual(t.A) < 1e-10);

        // Matching moments through the classic range 2n - 1.
        Functional f = Functional::from_triplet(t.w, t.A, t.v);
        CHECK(matching_moment_check(plain.T, f, 2 * n - 1).max_relative < 1e-9);
        CHECK(matching_moment_check(ahead.T, f, 2 * n - 1).max_relative < 1e-9);
    }
}

TEST_CASE("eta bookkeeping starts at one") {
    RealizationTriplet t = trivial_realization(fixture_c());
    auto [state, report] = look_ahead_lanczos(t.A, t.v, t.w, 4);
    REQUIRE(!state.eta.empty());
    CHECK(state.eta[0] == Complex(1.0));
}
