// Exact determinant pattern for moment sequences whose entries are exactly
// representable doubles (every finite double is a dyadic rational, so this
// covers any parsed input). Determinants are computed by fraction-free
// Gaussian elimination over Gaussian integers, making zero tests exact.
// This path is the oracle the floating determinant classification is tested
// against; it shares no code with it.
#ifndef FOPQ_EXACT_HPP
#define FOPQ_EXACT_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <string>
#include <vector>

#include "fopq/types.hpp"

namespace fopq::exact {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

/// Complex number with exact rational real and imaginary parts.
struct ExactComplex {
    BigRational re;
    BigRational im;

    bool is_zero() const { return re == 0 && im == 0; }
    std::string str() const;
};

/// Exact conversion; every finite double is a dyadic rational.
ExactComplex to_exact(Complex z);

ExactComplex add(const ExactComplex& a, const ExactComplex& b);
ExactComplex sub(const ExactComplex& a, const ExactComplex& b);
ExactComplex mul(const ExactComplex& a, const ExactComplex& b);
ExactComplex div(const ExactComplex& a, const ExactComplex& b);

/// Exact determinant of a square matrix (row-major), via Bareiss
/// fraction-free elimination after clearing denominators.
ExactComplex determinant(const std::vector<std::vector<ExactComplex>>& m);

/// Exact rank over the field of complex rationals.
std::size_t rank(std::vector<std::vector<ExactComplex>> m);

struct ExactHankelPattern {
    std::vector<ExactComplex> deltas;  // Delta_0 .. Delta_{count-1}
    std::vector<bool> is_zero;         // exact zero tests
};

/// Hankel determinants Delta_0..Delta_{count-1} of the given moments,
/// computed exactly. Requires moments.size() >= 2*count - 1.
ExactHankelPattern hankel_pattern(const std::vector<Complex>& moments, std::size_t count);

}  // namespace fopq::exact

#endif  // FOPQ_EXACT_HPP
