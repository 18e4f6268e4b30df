#pragma once

#include <optional>
#include <stdexcept>

#include "nogo/linalg.hpp"

namespace nogo {

// Thrown on malformed files and CLI arguments; the CLI maps it to exit 2.
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Hermitian operator on a finite-dimensional Hilbert space. Always carries
// a complex-double matrix; exact entries (over Q(sqrt2)+iQ(sqrt2)) ride
// along when the source data was exact.
class Observable {
public:
    explicit Observable(Matrix m, double tol = kDefaultTol) : m_(std::move(m)) {
        if (!is_hermitian(m_, tol))
            throw std::invalid_argument("Observable: matrix is not Hermitian");
    }
    explicit Observable(ExactMatrix m) : exact_(std::move(m)) {
        if (!is_hermitian_exact(*exact_))
            throw std::invalid_argument("Observable: matrix is not Hermitian (exact)");
        m_ = to_complex(*exact_);
    }

    Eigen::Index dim() const { return m_.rows(); }
    const Matrix& matrix() const { return m_; }
    bool has_exact() const { return exact_.has_value(); }
    const ExactMatrix& exact() const { return *exact_; }

private:
    Matrix m_;
    std::optional<ExactMatrix> exact_;
};

// Nonzero vector up to phase; carrier of the rank-1 projection vv*/<v,v>.
class Ray {
public:
    explicit Ray(Vector coords) : v_(std::move(coords)) {
        if (v_.size() == 0 || v_.norm() == 0.0)
            throw std::invalid_argument("Ray: coordinates must not all be zero");
    }
    explicit Ray(ExactVector coords) : exact_(std::move(coords)) {
        bool nonzero = false;
        for (Eigen::Index i = 0; i < exact_->size(); ++i)
            nonzero = nonzero || !(*exact_)(i).is_zero();
        if (!nonzero) throw std::invalid_argument("Ray: coordinates must not all be zero");
        v_ = to_complex(*exact_);
    }

    Eigen::Index dim() const { return v_.size(); }
    const Vector& coords() const { return v_; }
    bool has_exact() const { return exact_.has_value(); }
    const ExactVector& exact() const { return *exact_; }

    Matrix projector() const {
        return (v_ * v_.adjoint()) / v_.squaredNorm();
    }
    ExactMatrix exact_projector() const {
        ExactScalar n2(0);
        for (Eigen::Index i = 0; i < exact_->size(); ++i)
            n2 += conj((*exact_)(i)) * (*exact_)(i);
        return ExactMatrix((*exact_) * exact_->adjoint()) / n2;
    }

    // <u,v> with the convention conj(u) . v.
    Cplx inner(const Ray& other) const { return v_.dot(other.v_); }

    // Exact when both sides carry exact coordinates, tolerance otherwise.
    bool orthogonal_to(const Ray& other, double tol = kDefaultTol) const {
        if (exact_ && other.exact_) {
            ExactScalar ip(0);
            for (Eigen::Index i = 0; i < exact_->size(); ++i)
                ip += conj((*exact_)(i)) * (*other.exact_)(i);
            return ip.is_zero();
        }
        return std::abs(inner(other)) <= tol * v_.norm() * other.v_.norm();
    }

    // Proportional by a nonzero scalar: |<u,v>|^2 == <u,u><v,v>.
    bool equivalent_to(const Ray& other, double tol = kDefaultTol) const {
        if (exact_ && other.exact_) {
            ExactScalar ip(0);
            Surd nu(0), nv(0);
            for (Eigen::Index i = 0; i < exact_->size(); ++i) {
                ip += conj((*exact_)(i)) * (*other.exact_)(i);
                nu += abs2((*exact_)(i));
                nv += abs2((*other.exact_)(i));
            }
            return abs2(ip) == nu * nv;
        }
        double c = std::abs(inner(other)) / (v_.norm() * other.v_.norm());
        return std::abs(c - 1.0) <= tol;
    }

private:
    Vector v_;
    std::optional<ExactVector> exact_;
};

// Hermitian, positive semidefinite, unit trace (within tolerance).
class DensityMatrix {
public:
    explicit DensityMatrix(Matrix m, double tol = kDefaultTol) : m_(std::move(m)) {
        if (!is_hermitian(m_, tol))
            throw std::invalid_argument("DensityMatrix: not Hermitian");
        if (std::abs(m_.trace().real() - 1.0) > tol || std::abs(m_.trace().imag()) > tol)
            throw std::invalid_argument("DensityMatrix: trace != 1");
        Eigen::SelfAdjointEigenSolver<Matrix> es(m_, Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < -tol)
            throw std::invalid_argument("DensityMatrix: not positive semidefinite");
    }

    static DensityMatrix pure(const Ray& psi) { return DensityMatrix(psi.projector()); }

    Eigen::Index dim() const { return m_.rows(); }
    const Matrix& matrix() const { return m_; }

private:
    Matrix m_;
};

// Coordinate-padding realization of the subspace inclusion H -> H'.
// Inner products, traces Tr(rho E) and commutators are preserved.
inline Ray embed(const Ray& r, Eigen::Index dim2) {
    if (dim2 < r.dim()) throw std::invalid_argument("embed: target dim too small");
    if (r.has_exact()) {
        ExactVector v = ExactVector::Constant(dim2, ExactScalar(0));
        v.head(r.dim()) = r.exact();
        return Ray(std::move(v));
    }
    Vector v = Vector::Zero(dim2);
    v.head(r.dim()) = r.coords();
    return Ray(std::move(v));
}

inline Observable embed(const Observable& a, Eigen::Index dim2) {
    if (dim2 < a.dim()) throw std::invalid_argument("embed: target dim too small");
    if (a.has_exact()) {
        ExactMatrix m = ExactMatrix::Constant(dim2, dim2, ExactScalar(0));
        m.topLeftCorner(a.dim(), a.dim()) = a.exact();
        return Observable(std::move(m));
    }
    Matrix m = Matrix::Zero(dim2, dim2);
    m.topLeftCorner(a.dim(), a.dim()) = a.matrix();
    return Observable(std::move(m));
}

inline DensityMatrix embed(const DensityMatrix& rho, Eigen::Index dim2) {
    if (dim2 < rho.dim()) throw std::invalid_argument("embed: target dim too small");
    Matrix m = Matrix::Zero(dim2, dim2);
    m.topLeftCorner(rho.dim(), rho.dim()) = rho.matrix();
    return DensityMatrix(std::move(m));
}

}  // namespace nogo
