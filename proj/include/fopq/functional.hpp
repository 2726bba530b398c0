// Linear functionals on polynomials, given either by an explicit moment
// sequence or by a matrix bilinear form w* p(A) v.
#ifndef FOPQ_FUNCTIONAL_HPP
#define FOPQ_FUNCTIONAL_HPP

#include <Eigen/Dense>
#include <memory>
#include <mutex>
#include <optional>

#include "fopq/types.hpp"

namespace fopq {

/// A linear functional L determined by its moments L(lambda^j) = m_j.
///
/// FromMoments has a finite horizon and raises HorizonExceeded beyond it.
/// FromTriplet computes m_j = w* A^j v on demand by repeated matrix-vector
/// products (never forming A^j) and memoizes the results; its horizon is
/// unbounded.
class Functional {
public:
    static Functional from_moments(MomentSequence m);
    static Functional from_triplet(Eigen::VectorXcd w, Eigen::MatrixXcd A, Eigen::VectorXcd v);

    /// m_j.
    Complex moment(std::size_t j) const;

    /// L(p) = sum_j coeff_j m_j.
    Complex apply(const Polynomial& p) const;

    /// L(lambda^shift p q), the workhorse of the recurrence coefficients.
    Complex apply_product(const Polynomial& p, const Polynomial& q, std::size_t shift = 0) const;

    /// Horizon K for FromMoments; nullopt (unbounded) for FromTriplet.
    std::optional<std::size_t> horizon() const;

    bool is_triplet() const { return triplet_ != nullptr; }
    /// Dimension N of A for FromTriplet; 0 otherwise.
    std::size_t dimension() const { return triplet_ ? static_cast<std::size_t>(triplet_->A.rows()) : 0; }

    const Eigen::MatrixXcd& matrix() const { return triplet_->A; }
    const Eigen::VectorXcd& left_vector() const { return triplet_->w; }
    const Eigen::VectorXcd& right_vector() const { return triplet_->v; }

private:
    Functional() = default;

    struct Triplet {
        Eigen::VectorXcd w;
        Eigen::MatrixXcd A;
        Eigen::VectorXcd v;
        // Memoized moments and the running power vector A^j v.
        mutable std::mutex mutex;
        mutable std::vector<Complex> cache;
        mutable Eigen::VectorXcd power;
    };

    std::optional<MomentSequence> moments_;
    std::shared_ptr<Triplet> triplet_;
};

}  // namespace fopq

#endif  // FOPQ_FUNCTIONAL_HPP
