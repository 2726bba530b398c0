#include "fopq/types.hpp"

#include <algorithm>

namespace fopq {

Polynomial Polynomial::monomial(std::size_t n, Complex lead) {
    std::vector<Complex> c(n + 1, Complex(0.0));
    c[n] = lead;
    return Polynomial(std::move(c));
}

Complex Polynomial::eval(Complex x) const {
    Complex acc(0.0);
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

Complex Polynomial::eval_derivative(Complex x, std::size_t j) const {
    if (j == 0) return eval(x);
    // Horner on the j-th derivative coefficients: c_k * k!/(k-j)! lambda^{k-j}.
    Complex acc(0.0);
    for (int k = degree(); k >= static_cast<int>(j); --k) {
        double fall = 1.0;
        for (std::size_t u = 0; u < j; ++u) fall *= static_cast<double>(k - u);
        acc = acc * x + coeffs_[static_cast<std::size_t>(k)] * fall;
    }
    return acc;
}

Polynomial Polynomial::derivative() const {
    if (coeffs_.size() <= 1) return Polynomial();
    std::vector<Complex> d(coeffs_.size() - 1);
    for (std::size_t k = 1; k < coeffs_.size(); ++k)
        d[k - 1] = coeffs_[k] * static_cast<double>(k);
    return Polynomial(std::move(d));
}

Polynomial Polynomial::operator+(const Polynomial& rhs) const {
    std::vector<Complex> c(std::max(coeffs_.size(), rhs.coeffs_.size()), Complex(0.0));
    for (std::size_t i = 0; i < coeffs_.size(); ++i) c[i] += coeffs_[i];
    for (std::size_t i = 0; i < rhs.coeffs_.size(); ++i) c[i] += rhs.coeffs_[i];
    return Polynomial(std::move(c));
}

Polynomial Polynomial::operator-(const Polynomial& rhs) const {
    std::vector<Complex> c(std::max(coeffs_.size(), rhs.coeffs_.size()), Complex(0.0));
    for (std::size_t i = 0; i < coeffs_.size(); ++i) c[i] += coeffs_[i];
    for (std::size_t i = 0; i < rhs.coeffs_.size(); ++i) c[i] -= rhs.coeffs_[i];
    return Polynomial(std::move(c));
}

Polynomial Polynomial::operator*(const Polynomial& rhs) const {
    if (is_zero() || rhs.is_zero()) return Polynomial();
    std::vector<Complex> c(coeffs_.size() + rhs.coeffs_.size() - 1, Complex(0.0));
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
        for (std::size_t j = 0; j < rhs.coeffs_.size(); ++j)
            c[i + j] += coeffs_[i] * rhs.coeffs_[j];
    return Polynomial(std::move(c));
}

Polynomial Polynomial::operator*(Complex s) const {
    std::vector<Complex> c(coeffs_);
    for (auto& v : c) v *= s;
    return Polynomial(std::move(c));
}

Polynomial Polynomial::shifted(std::size_t k) const {
    if (is_zero()) return Polynomial();
    std::vector<Complex> c(coeffs_.size() + k, Complex(0.0));
    std::copy(coeffs_.begin(), coeffs_.end(), c.begin() + static_cast<long>(k));
    return Polynomial(std::move(c));
}

Polynomial::DivisionResult Polynomial::divide(const Polynomial& divisor) const {
    if (divisor.is_zero()) throw std::invalid_argument("division by zero polynomial");
    std::vector<Complex> rem(coeffs_);
    const int dd = divisor.degree();
    const int dn = degree();
    if (dn < dd) return {Polynomial(), *this};
    std::vector<Complex> quot(static_cast<std::size_t>(dn - dd) + 1, Complex(0.0));
    for (int k = dn; k >= dd; --k) {
        Complex q = rem[static_cast<std::size_t>(k)] / divisor.leading();
        quot[static_cast<std::size_t>(k - dd)] = q;
        for (int j = 0; j <= dd; ++j)
            rem[static_cast<std::size_t>(k - dd + j)] -= q * divisor.coeff(static_cast<std::size_t>(j));
    }
    rem.resize(static_cast<std::size_t>(std::max(dd, 0)));
    return {Polynomial(std::move(quot)), Polynomial(std::move(rem))};
}

double Polynomial::max_abs_coeff() const {
    double m = 0.0;
    for (Complex c : coeffs_) m = std::max(m, std::abs(c));
    return m;
}

}  // namespace fopq
