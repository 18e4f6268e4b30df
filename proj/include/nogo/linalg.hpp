#pragma once

#include <complex>
#include <random>

#include <Eigen/Dense>

#include "nogo/scalar.hpp"

namespace nogo {

using Cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr double kDefaultTol = 1e-9;

template <class Derived>
double frobenius(const Eigen::MatrixBase<Derived>& m) {
    return m.norm();
}

template <class Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& m, double tol) {
    if (m.rows() != m.cols()) return false;
    return (m - m.adjoint()).norm() <= tol * (1.0 + m.norm());
}

inline bool is_hermitian_exact(const ExactMatrix& m) {
    if (m.rows() != m.cols()) return false;
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i <= j; ++i)
            if (m(i, j) != conj(m(j, i))) return false;
    return true;
}

// Gaussian-component unit vector; rotation invariant.
inline Vector random_unit_vector(int dim, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    Vector v(dim);
    do {
        for (int i = 0; i < dim; ++i) v(i) = Cplx(g(rng), g(rng));
    } while (v.norm() < 1e-6);
    return v / v.norm();
}

inline Matrix random_hermitian(int dim, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    Matrix m(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) m(i, j) = Cplx(g(rng), g(rng));
    return 0.5 * (m + m.adjoint());
}

// QR of a Gaussian matrix with the phase convention R(i,i) > 0, so the
// result is Haar distributed.
inline Matrix random_unitary(int dim, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    Matrix m(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) m(i, j) = Cplx(g(rng), g(rng));
    Eigen::HouseholderQR<Matrix> qr(m);
    Matrix q = qr.householderQ();
    Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < dim; ++i) {
        Cplx d = r(i, i);
        double a = std::abs(d);
        q.col(i) *= (a > 0 ? d / a : Cplx(1, 0));
    }
    return q;
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

}  // namespace nogo
