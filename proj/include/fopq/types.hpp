// Core value types shared by every module: complex scalars, polynomials,
// moment sequences, and the tolerance policy.
#ifndef FOPQ_TYPES_HPP
#define FOPQ_TYPES_HPP

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace fopq {

using Complex = std::complex<double>;

/// Base class for all contract violations raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A moment index beyond the horizon of a finite moment sequence was requested.
class HorizonExceeded : public Error {
public:
    HorizonExceeded(std::size_t requested, std::size_t horizon)
        : Error("moment index " + std::to_string(requested) +
                " exceeds horizon " + std::to_string(horizon)),
          requested(requested), horizon(horizon) {}
    std::size_t requested;
    std::size_t horizon;
};

/// Some leading Hankel determinant vanishes where quasi-definiteness is required.
class NotQuasiDefinite : public Error {
public:
    explicit NotQuasiDefinite(std::size_t zero_index)
        : Error("Hankel determinant at index " + std::to_string(zero_index) +
                " is zero; functional is not quasi-definite"),
          zero_index(zero_index) {}
    std::size_t zero_index;
};

/// The requested degree is not a regular index, so no Gauss rule exists there.
class NotRegularDegree : public Error {
public:
    NotRegularDegree(std::size_t degree, std::vector<std::size_t> nearest)
        : Error("degree " + std::to_string(degree) + " is not regular"),
          degree(degree), nearest_regular(std::move(nearest)) {}
    std::size_t degree;
    std::vector<std::size_t> nearest_regular;
};

/// The coefficient system for a regular step is numerically singular.
/// The underlying theory guarantees nonsingularity, so this signals that the
/// zero classification of the determinant pattern was inconsistent.
class SingularAlphaSystem : public Error {
public:
    explicit SingularAlphaSystem(std::size_t degree)
        : Error("coefficient system at degree " + std::to_string(degree) +
                " is numerically singular; determinant pattern is inconsistent"),
          degree(degree) {}
    std::size_t degree;
};

/// The confluent Vandermonde solve for quadrature weights failed its residual check.
class IllConditionedWeights : public Error {
public:
    explicit IllConditionedWeights(double residual)
        : Error("weight system residual " + std::to_string(residual) +
                " exceeds tolerance; consider a larger cluster tolerance"),
          residual(residual) {}
    double residual;
};

/// The initial Lanczos coupling w*v vanishes.
class ZeroInitialCoupling : public Error {
public:
    ZeroInitialCoupling() : Error("initial vectors have zero coupling w*v") {}
};

/// No regular degree within the computed pattern realizes the requested horizon.
class NoRealizableDegree : public Error {
public:
    explicit NoRealizableDegree(std::size_t k)
        : Error("no regular degree within the pattern horizon is exact through degree " +
                std::to_string(k)),
          k(k) {}
    std::size_t k;
};

/// The determinant pattern does not extend far enough to classify a degree.
class InsufficientPattern : public Error {
public:
    InsufficientPattern(std::size_t degree, std::size_t needed_index)
        : Error("classifying degree " + std::to_string(degree) +
                " needs the determinant at index " + std::to_string(needed_index)),
          degree(degree), needed_index(needed_index) {}
    std::size_t degree;
    std::size_t needed_index;
};

/// Tolerances used for all floating-point zero decisions.
///
/// zero_det_tol   relative threshold for declaring a Hankel determinant zero
/// cluster_tol    relative radius for eigenvalue clustering
/// residual_tol   threshold for verification residuals
struct TolerancePolicy {
    double zero_det_tol = 1e-10;
    double cluster_tol = 1e-8;
    double residual_tol = 1e-9;

    void validate() const {
        auto check = [](double t, const char* name) {
            if (!(t > 0.0 && t < 1.0))
                throw std::invalid_argument(std::string(name) + " must lie in (0, 1)");
        };
        check(zero_det_tol, "zero_det_tol");
        check(cluster_tol, "cluster_tol");
        check(residual_tol, "residual_tol");
    }
};

inline bool is_finite(Complex z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

/// Principal complex square root with arg in (-pi/2, pi/2]. Differs from
/// std::sqrt only on the negative real axis with a negative-zero imaginary
/// part, where the principal branch is +i sqrt(|c|).
inline Complex principal_sqrt(Complex c) {
    Complex s = std::sqrt(c);
    if (s.real() < 0.0 || (s.real() == 0.0 && s.imag() < 0.0)) s = -s;
    return s;
}

/// z^e by binary exponentiation; z^0 = 1 for every z, including 0.
inline Complex cpow(Complex z, std::size_t e) {
    Complex acc(1.0);
    while (e > 0) {
        if (e & 1u) acc *= z;
        z *= z;
        e >>= 1u;
    }
    return acc;
}

/// Dense univariate polynomial with complex coefficients, lowest degree first.
/// Normalized so the stored leading coefficient is nonzero; the zero
/// polynomial has no coefficients and degree -1.
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<Complex> coeffs) : coeffs_(std::move(coeffs)) {
        normalize();
    }

    static Polynomial zero() { return Polynomial(); }
    static Polynomial one() { return constant(1.0); }
    static Polynomial constant(Complex c) { return Polynomial({c}); }
    /// The monomial lambda^n.
    static Polynomial monomial(std::size_t n, Complex lead = 1.0);

    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const { return coeffs_.empty(); }
    const std::vector<Complex>& coeffs() const { return coeffs_; }

    /// Coefficient of lambda^j (zero beyond the stored degree).
    Complex coeff(std::size_t j) const {
        return j < coeffs_.size() ? coeffs_[j] : Complex(0.0);
    }
    Complex leading() const { return coeffs_.empty() ? Complex(0.0) : coeffs_.back(); }

    Complex eval(Complex x) const;
    /// Value of the j-th derivative at x.
    Complex eval_derivative(Complex x, std::size_t j) const;
    Polynomial derivative() const;

    Polynomial operator+(const Polynomial& rhs) const;
    Polynomial operator-(const Polynomial& rhs) const;
    Polynomial operator*(const Polynomial& rhs) const;
    Polynomial operator*(Complex s) const;
    /// Multiplication by lambda^k.
    Polynomial shifted(std::size_t k) const;

    /// Euclidean division; the remainder of an exact division of sequence
    /// polynomials is zero up to rounding.
    struct DivisionResult;
    DivisionResult divide(const Polynomial& divisor) const;

    double max_abs_coeff() const;

private:
    void normalize() {
        while (!coeffs_.empty() && coeffs_.back() == Complex(0.0)) coeffs_.pop_back();
    }
    std::vector<Complex> coeffs_;
};

struct Polynomial::DivisionResult {
    Polynomial quotient;
    Polynomial remainder;
};

inline Polynomial operator*(Complex s, const Polynomial& p) { return p * s; }

/// Ordered complex moments m_0..m_K of a linear functional.
struct MomentSequence {
    std::vector<Complex> moments;

    MomentSequence() = default;
    explicit MomentSequence(std::vector<Complex> m) : moments(std::move(m)) {
        if (moments.empty())
            throw std::invalid_argument("moment sequence must be non-empty");
        for (Complex v : moments)
            if (!is_finite(v))
                throw std::invalid_argument("moments must be finite");
    }

    std::size_t horizon() const { return moments.size() - 1; }
    Complex operator[](std::size_t j) const { return moments[j]; }
};

}  // namespace fopq

#endif  // FOPQ_TYPES_HPP
