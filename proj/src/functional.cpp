#include "fopq/functional.hpp"

namespace fopq {

Functional Functional::from_moments(MomentSequence m) {
    Functional f;
    f.moments_ = std::move(m);
    return f;
}

Functional Functional::from_triplet(Eigen::VectorXcd w, Eigen::MatrixXcd A, Eigen::VectorXcd v) {
    if (A.rows() != A.cols()) throw std::invalid_argument("A must be square");
    if (v.size() != A.rows() || w.size() != A.rows())
        throw std::invalid_argument("vector lengths must match the matrix dimension");
    Functional f;
    f.triplet_ = std::make_shared<Triplet>();
    f.triplet_->w = std::move(w);
    f.triplet_->A = std::move(A);
    f.triplet_->v = std::move(v);
    f.triplet_->power = f.triplet_->v;
    return f;
}

Complex Functional::moment(std::size_t j) const {
    if (moments_) {
        if (j > moments_->horizon()) throw HorizonExceeded(j, moments_->horizon());
        return (*moments_)[j];
    }
    std::lock_guard<std::mutex> lock(triplet_->mutex);
    auto& cache = triplet_->cache;
    while (cache.size() <= j) {
        if (!cache.empty()) triplet_->power = triplet_->A * triplet_->power;
        cache.push_back(triplet_->w.dot(triplet_->power));
    }
    return cache[j];
}

Complex Functional::apply(const Polynomial& p) const {
    Complex acc(0.0);
    for (std::size_t j = 0; j < p.coeffs().size(); ++j)
        if (p.coeffs()[j] != Complex(0.0)) acc += p.coeffs()[j] * moment(j);
    return acc;
}

Complex Functional::apply_product(const Polynomial& p, const Polynomial& q, std::size_t shift) const {
    return apply((p * q).shifted(shift));
}

std::optional<std::size_t> Functional::horizon() const {
    if (moments_) return moments_->horizon();
    return std::nullopt;
}

}  // namespace fopq
