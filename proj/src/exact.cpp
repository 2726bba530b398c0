#include "fopq/exact.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace fopq::exact {

namespace {

// Gaussian integer with arbitrary-precision parts.
struct Gint {
    BigInt re;
    BigInt im;

    bool is_zero() const { return re == 0 && im == 0; }
};

Gint gmul(const Gint& a, const Gint& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

Gint gsub(const Gint& a, const Gint& b) { return {a.re - b.re, a.im - b.im}; }

// Exact division in Z[i]; Bareiss guarantees divisibility.
Gint gdiv_exact(const Gint& a, const Gint& b) {
    BigInt n = b.re * b.re + b.im * b.im;
    Gint num = gmul(a, Gint{b.re, -b.im});
    return {num.re / n, num.im / n};
}

BigRational dyadic(double x) {
    if (x == 0.0) return BigRational(0);
    int exp = 0;
    double mant = std::frexp(x, &exp);
    // 53 doublings make the mantissa integral.
    long long scaled = static_cast<long long>(std::ldexp(mant, 53));
    BigRational r(scaled);
    int shift = exp - 53;
    if (shift >= 0)
        r *= BigRational(BigInt(1) << shift);
    else
        r /= BigRational(BigInt(1) << (-shift));
    return r;
}

}  // namespace

std::string ExactComplex::str() const {
    auto rat = [](const BigRational& r) {
        std::string s = numerator(r).str();
        if (denominator(r) != 1) s += "/" + denominator(r).str();
        return s;
    };
    if (im == 0) return rat(re);
    return rat(re) + (im > 0 ? "+" : "-") + rat(abs(im)) + "i";
}

ExactComplex to_exact(Complex z) {
    if (!is_finite(z)) throw std::invalid_argument("cannot convert non-finite value exactly");
    return {dyadic(z.real()), dyadic(z.imag())};
}

ExactComplex add(const ExactComplex& a, const ExactComplex& b) { return {a.re + b.re, a.im + b.im}; }
ExactComplex sub(const ExactComplex& a, const ExactComplex& b) { return {a.re - b.re, a.im - b.im}; }

ExactComplex mul(const ExactComplex& a, const ExactComplex& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

ExactComplex div(const ExactComplex& a, const ExactComplex& b) {
    BigRational n = b.re * b.re + b.im * b.im;
    if (n == 0) throw std::domain_error("exact division by zero");
    ExactComplex num = mul(a, {b.re, -b.im});
    return {num.re / n, num.im / n};
}

ExactComplex determinant(const std::vector<std::vector<ExactComplex>>& m) {
    const std::size_t n = m.size();
    if (n == 0) return {BigRational(1), BigRational(0)};
    for (const auto& row : m)
        if (row.size() != n) throw std::invalid_argument("matrix must be square");

    // Clear denominators with one common scale; det(c M) = c^n det(M).
    BigInt scale = 1;
    for (const auto& row : m)
        for (const auto& e : row) {
            scale = lcm(scale, denominator(e.re));
            scale = lcm(scale, denominator(e.im));
        }
    std::vector<std::vector<Gint>> a(n, std::vector<Gint>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            BigRational re = m[i][j].re * scale;
            BigRational im = m[i][j].im * scale;
            a[i][j] = {numerator(re), numerator(im)};
        }

    // Bareiss fraction-free elimination with row pivoting.
    Gint prev{1, 0};
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a[k][k].is_zero()) {
            std::size_t p = k + 1;
            while (p < n && a[p][k].is_zero()) ++p;
            if (p == n) return {BigRational(0), BigRational(0)};
            std::swap(a[k], a[p]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                Gint t = gsub(gmul(a[i][j], a[k][k]), gmul(a[i][k], a[k][j]));
                a[i][j] = gdiv_exact(t, prev);
            }
            a[i][k] = {0, 0};
        }
        prev = a[k][k];
    }
    Gint det = a[n - 1][n - 1];
    if (sign < 0) det = {-det.re, -det.im};

    BigRational denom = BigRational(scale);
    BigRational denom_pow = 1;
    for (std::size_t i = 0; i < n; ++i) denom_pow *= denom;
    return {BigRational(det.re) / denom_pow, BigRational(det.im) / denom_pow};
}

std::size_t rank(std::vector<std::vector<ExactComplex>> m) {
    if (m.empty()) return 0;
    const std::size_t rows = m.size();
    const std::size_t cols = m[0].size();
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t pivot = r;
        while (pivot < rows && m[pivot][c].is_zero()) ++pivot;
        if (pivot == rows) continue;
        std::swap(m[r], m[pivot]);
        for (std::size_t i = r + 1; i < rows; ++i) {
            if (m[i][c].is_zero()) continue;
            ExactComplex f = div(m[i][c], m[r][c]);
            for (std::size_t j = c; j < cols; ++j) m[i][j] = sub(m[i][j], mul(f, m[r][j]));
        }
        ++r;
    }
    return r;
}

ExactHankelPattern hankel_pattern(const std::vector<Complex>& moments, std::size_t count) {
    if (count == 0) throw std::invalid_argument("count must be positive");
    if (moments.size() < 2 * count - 1)
        throw HorizonExceeded(2 * count - 2, moments.empty() ? 0 : moments.size() - 1);

    std::vector<ExactComplex> em;
    em.reserve(moments.size());
    for (Complex v : moments) em.push_back(to_exact(v));

    ExactHankelPattern out;
    for (std::size_t k = 0; k < count; ++k) {
        std::vector<std::vector<ExactComplex>> h(k + 1, std::vector<ExactComplex>(k + 1));
        for (std::size_t i = 0; i <= k; ++i)
            for (std::size_t j = 0; j <= k; ++j) h[i][j] = em[i + j];
        ExactComplex d = determinant(h);
        out.is_zero.push_back(d.is_zero());
        out.deltas.push_back(std::move(d));
    }
    return out;
}

}  // namespace fopq::exact
