#pragma once

#include <map>
#include <span>
#include <vector>

#include "nogo/observable.hpp"

namespace nogo {

// Raised when an operation requires a pairwise-commuting family; names the
// offending pair.
struct NonCommutingError : std::invalid_argument {
    NonCommutingError(int i, int j)
        : std::invalid_argument("operators " + std::to_string(i) + " and " +
                                std::to_string(j) + " do not commute"),
          first(i),
          second(j) {}
    int first;
    int second;
};

// True iff ||AB - BA|| is exactly zero (both operands exact) or within
// tol*(1 + ||A|| ||B||) in Frobenius norm.
bool commutes(const Observable& a, const Observable& b, double tol = kDefaultTol);

// Eigenvalues in nondecreasing order, with multiplicity.
std::vector<double> spectrum(const Observable& a);

struct Eigensystem {
    Eigen::VectorXd values;  // ascending
    Matrix vectors;          // unitary, columns aligned with values
};
Eigensystem eigensystem(const Observable& a);

// Simultaneous eigenvalue tuples of a commuting family over a common
// eigenbasis. Finite dimensions only; the epsilon-approximate clause for
// non-diagonalizable families has no finite procedure and is not offered.
struct JointSpectrumSet {
    int arity = 0;
    std::vector<Eigen::VectorXd> points;  // lexicographically sorted, deduplicated
    double tol = kDefaultTol;

    bool contains(const Eigen::VectorXd& p, double match_tol) const;
};

JointSpectrumSet joint_spectrum(std::span<const Observable> ops,
                                double tol = kDefaultTol);

// Real polynomial in n variables, sparse exponent-vector representation.
class Polynomial {
public:
    explicit Polynomial(int nvars) : nvars_(nvars) {}

    static Polynomial constant(int nvars, double c);
    static Polynomial variable(int nvars, int index);
    // c0 + c1 x + c2 x^2 + ... in one variable.
    static Polynomial univariate(std::span<const double> coeffs);

    int nvars() const { return nvars_; }
    int degree() const;
    bool empty() const { return terms_.empty(); }

    Polynomial& add_term(std::vector<int> exponents, double coeff);

    friend Polynomial operator+(const Polynomial& f, const Polynomial& g);
    friend Polynomial operator-(const Polynomial& f, const Polynomial& g);
    friend Polynomial operator*(const Polynomial& f, const Polynomial& g);
    friend Polynomial operator*(double c, const Polynomial& f);

    double operator()(const Eigen::VectorXd& x) const;
    // Substitution of pairwise commuting matrices.
    Matrix operator()(std::span<const Matrix> args) const;

    const std::map<std::vector<int>, double>& terms() const { return terms_; }

private:
    int nvars_;
    std::map<std::vector<int>, double> terms_;
};

struct VanishingCheck {
    bool lhs_zero;         // ||f(A_1,...,A_n)|| <= tol
    bool rhs_zero;         // |f(p)| <= tol for every joint-spectrum point p
    double operator_norm;  // ||f(A_1,...,A_n)||_F
    double max_point_abs;  // max |f(p)| over the joint spectrum
    double tol;            // tolerance both flags were decided with
};

// Both sides of the vanishing criterion; callers assert the flags agree.
VanishingCheck check_vanishing(const Polynomial& f, std::span<const Observable> ops,
                               double tol = kDefaultTol);

}  // namespace nogo
