#include "fopq/hankel.hpp"

#include <cmath>
#include <limits>

#include "fopq/exact.hpp"

namespace fopq {

namespace {

// Log-magnitude determinant via pivoted LU, plus the determinant value
// itself (which may overflow for extreme inputs; the zero test uses logs).
struct DetResult {
    Complex value;
    double log_abs;  // -inf for an exactly zero determinant
};

DetResult lu_determinant(const Eigen::MatrixXcd& h) {
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(h);
    Complex prod(1.0);
    double log_abs = 0.0;
    bool zero = false;
    for (Eigen::Index i = 0; i < h.rows(); ++i) {
        Complex u = lu.matrixLU()(i, i);
        if (u == Complex(0.0)) zero = true;
        else log_abs += std::log(std::abs(u));
        prod *= u;
    }
    double sign = static_cast<double>(lu.permutationP().determinant());
    if (zero) return {Complex(0.0), -std::numeric_limits<double>::infinity()};
    return {sign * prod, log_abs};
}

// Sum of log row norms; the Hadamard bound in log space.
double log_hadamard_bound(const Eigen::MatrixXcd& h) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < h.rows(); ++i) {
        double rn = h.row(i).norm();
        if (rn == 0.0) return -std::numeric_limits<double>::infinity();
        acc += std::log(rn);
    }
    return acc;
}

void derive_indices(HankelAnalysis& a) {
    const std::size_t m = a.is_zero.size();
    a.regular_indices = {0};
    for (std::size_t k = 0; k < m; ++k)
        if (!a.is_zero[k]) a.regular_indices.push_back(k + 1);

    a.kronecker.assign(m, -1);
    for (std::size_t k = 0; k < m; ++k) {
        for (std::size_t j = k + 1; j < m; ++j) {
            if (!a.is_zero[j]) {
                a.kronecker[k] = static_cast<int>(j - k - 1);
                break;
            }
        }
    }
    a.euclidean.assign(m, -1);
    for (std::size_t k = 1; k < m; ++k)
        if (a.kronecker[k] >= 0 && a.kronecker[k - 1] >= 0)
            a.euclidean[k] = a.kronecker[k] - a.kronecker[k - 1];

    // Incurable tail: the last regular degree n has Delta_{n-1} nonzero and
    // every later computed Delta zero. Certainty is decided by the caller.
    a.incurable_from.reset();
    std::size_t last = a.regular_indices.back();
    bool tail_zero = true;
    bool has_tail = last < m;  // at least one Delta after Delta_{last-1}
    for (std::size_t k = last; k < m; ++k) tail_zero = tail_zero && a.is_zero[k];
    if (has_tail && tail_zero) a.incurable_from = last;
}

}  // namespace

const char* to_string(DegreeKind k) {
    switch (k) {
        case DegreeKind::Regular: return "Regular";
        case DegreeKind::Singular: return "Singular";
        case DegreeKind::Nonexistent: return "Nonexistent";
    }
    return "?";
}

std::string HankelAnalysis::pattern() const {
    std::string s;
    s.reserve(is_zero.size());
    for (bool z : is_zero) s.push_back(z ? '0' : 'x');
    return s;
}

HankelAnalysis HankelAnalysis::from_pattern(const std::string& pattern, TolerancePolicy tol) {
    HankelAnalysis a;
    a.tol = tol;
    for (char c : pattern) {
        if (c == '0') {
            a.is_zero.push_back(true);
            a.deltas.emplace_back(0.0);
        } else if (c == 'x' || c == 'X' || c == '*') {
            a.is_zero.push_back(false);
            a.deltas.emplace_back(1.0);
        } else {
            throw std::invalid_argument("pattern characters must be 'x', '*' or '0'");
        }
    }
    if (a.is_zero.empty()) throw std::invalid_argument("pattern must be non-empty");
    derive_indices(a);
    return a;
}

Eigen::MatrixXcd hankel_matrix(const Functional& functional, std::size_t k) {
    if (k == 0) throw std::invalid_argument("k must be positive");
    Eigen::MatrixXcd h(k, k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) h(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = functional.moment(i + j);
    return h;
}

HankelAnalysis determinant_sequence(const Functional& functional, std::size_t max_k,
                                    const TolerancePolicy& tol) {
    if (max_k == 0) throw std::invalid_argument("max_k must be positive");
    tol.validate();
    HankelAnalysis a;
    a.tol = tol;
    const double log_tol = std::log(tol.zero_det_tol);
    for (std::size_t k = 1; k <= max_k; ++k) {
        Eigen::MatrixXcd h = hankel_matrix(functional, k);
        DetResult det = lu_determinant(h);
        double log_bound = log_hadamard_bound(h);
        a.deltas.push_back(det.value);
        a.is_zero.push_back(det.log_abs <= log_tol + log_bound);
    }
    derive_indices(a);
    if (a.incurable_from && functional.is_triplet()) {
        // Rank of the moment Hankel is bounded by the matrix dimension N, so
        // a zero tail computed through index N-1 cannot recover.
        a.incurable_certain = a.deltas.size() >= functional.dimension();
    }
    return a;
}

HankelAnalysis analyze(const Functional& functional, const TolerancePolicy& tol) {
    std::size_t max_k;
    if (functional.is_triplet())
        max_k = 2 * functional.dimension();
    else
        max_k = *functional.horizon() / 2 + 1;
    return determinant_sequence(functional, max_k, tol);
}

HankelAnalysis determinant_sequence_exact(const std::vector<Complex>& moments, std::size_t max_k,
                                          const TolerancePolicy& tol) {
    exact::ExactHankelPattern p = exact::hankel_pattern(moments, max_k);
    HankelAnalysis a;
    a.tol = tol;
    a.is_zero = p.is_zero;
    for (const auto& d : p.deltas)
        a.deltas.emplace_back(static_cast<double>(d.re), static_cast<double>(d.im));
    derive_indices(a);
    return a;
}

DegreeClassification classify_degrees(const HankelAnalysis& analysis, std::size_t n_max) {
    DegreeClassification out;
    out.kinds.reserve(n_max);
    for (std::size_t n = 1; n <= n_max; ++n) {
        if (n - 1 > analysis.max_index()) throw InsufficientPattern(n, n - 1);
        if (analysis.nonzero_at(n - 1)) {
            out.kinds.push_back(DegreeKind::Regular);
            continue;
        }
        // Last regular degree k before n; degree 0 is regular by convention.
        std::size_t k = 0;
        for (std::size_t t : analysis.regular_indices)
            if (t < n) k = t;
        // Delta_k .. Delta_{n-1} are zero since k is the last regular degree.
        // The polynomial exists (non-uniquely) iff the zeros extend through
        // Delta_{2n-k-1}; any nonzero inside that window kills existence.
        const std::size_t window_end = 2 * n - k - 1;
        DegreeKind kind = DegreeKind::Singular;
        bool decided = false;
        for (std::size_t j = n; j <= window_end; ++j) {
            if (j > analysis.max_index()) break;
            if (!analysis.is_zero[j]) {
                kind = DegreeKind::Nonexistent;
                decided = true;
                break;
            }
        }
        if (!decided && window_end > analysis.max_index())
            throw InsufficientPattern(n, window_end);
        out.kinds.push_back(kind);
    }
    return out;
}

}  // namespace fopq
