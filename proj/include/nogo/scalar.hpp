#pragma once

#include <complex>
#include <string>

#include <Eigen/Core>

#include "nogo/rational.hpp"

namespace nogo {

// Element of Q(sqrt(2)): a + b*sqrt(2) with rational a, b. Closed under
// field operations; equality and zero tests are exact.
class Surd {
public:
    Surd() = default;
    Surd(std::int64_t a) : a_(a) {}
    Surd(Rational a) : a_(a) {}
    Surd(Rational a, Rational b) : a_(a), b_(b) {}

    const Rational& rat() const { return a_; }
    const Rational& surd() const { return b_; }

    bool is_zero() const { return a_.is_zero() && b_.is_zero(); }
    bool is_rational() const { return b_.is_zero(); }

    friend Surd operator+(const Surd& x, const Surd& y) {
        return Surd(x.a_ + y.a_, x.b_ + y.b_);
    }
    friend Surd operator-(const Surd& x, const Surd& y) {
        return Surd(x.a_ - y.a_, x.b_ - y.b_);
    }
    friend Surd operator*(const Surd& x, const Surd& y) {
        // (a + b s)(c + d s) = ac + 2bd + (ad + bc) s,  s = sqrt(2)
        return Surd(x.a_ * y.a_ + Rational(2) * x.b_ * y.b_,
                    x.a_ * y.b_ + x.b_ * y.a_);
    }
    friend Surd operator/(const Surd& x, const Surd& y) {
        // 1/(a + b s) = (a - b s)/(a^2 - 2 b^2); denominator is zero only
        // for a = b = 0 since sqrt(2) is irrational.
        Rational n = y.a_ * y.a_ - Rational(2) * y.b_ * y.b_;
        if (n.is_zero()) throw std::domain_error("Surd: division by zero");
        return x * Surd(y.a_ / n, -(y.b_ / n));
    }
    Surd operator-() const { return Surd(-a_, -b_); }
    Surd& operator+=(const Surd& y) { return *this = *this + y; }
    Surd& operator-=(const Surd& y) { return *this = *this - y; }
    Surd& operator*=(const Surd& y) { return *this = *this * y; }
    Surd& operator/=(const Surd& y) { return *this = *this / y; }

    friend bool operator==(const Surd& x, const Surd& y) {
        return x.a_ == y.a_ && x.b_ == y.b_;
    }
    friend bool operator!=(const Surd& x, const Surd& y) { return !(x == y); }
    friend bool operator<(const Surd& x, const Surd& y) {
        // Sign of (a + b s): compare a against -b s by squaring.
        Surd d = x - y;
        int sa = d.a_.sign(), sb = d.b_.sign();
        if (sb == 0) return sa < 0;
        if (sa == 0) return sb < 0;
        if (sa != sb) {
            // Opposite signs: |a| vs |b| sqrt(2) decides; compare a^2 vs 2 b^2.
            Rational lhs = d.a_ * d.a_, rhs = Rational(2) * d.b_ * d.b_;
            return sa < 0 ? rhs < lhs : lhs < rhs;
        }
        return sa < 0;
    }

    double to_double() const {
        return a_.to_double() + b_.to_double() * 1.4142135623730951;
    }

    std::string str() const {
        if (b_.is_zero()) return a_.str();
        std::string s = b_.str() + "*sqrt2";
        if (a_.is_zero()) return s;
        return a_.str() + (b_.sign() > 0 ? "+" : "") + s;
    }

private:
    Rational a_;
    Rational b_;
};

// Complex scalar over Q(sqrt(2)): (a + b sqrt2) + i (c + d sqrt2).
class ExactScalar {
public:
    ExactScalar() = default;
    ExactScalar(std::int64_t a) : re_(a) {}
    ExactScalar(Surd re) : re_(re) {}
    ExactScalar(Surd re, Surd im) : re_(re), im_(im) {}

    const Surd& real() const { return re_; }
    const Surd& imag() const { return im_; }

    bool is_zero() const { return re_.is_zero() && im_.is_zero(); }

    friend ExactScalar operator+(const ExactScalar& x, const ExactScalar& y) {
        return {x.re_ + y.re_, x.im_ + y.im_};
    }
    friend ExactScalar operator-(const ExactScalar& x, const ExactScalar& y) {
        return {x.re_ - y.re_, x.im_ - y.im_};
    }
    friend ExactScalar operator*(const ExactScalar& x, const ExactScalar& y) {
        return {x.re_ * y.re_ - x.im_ * y.im_, x.re_ * y.im_ + x.im_ * y.re_};
    }
    friend ExactScalar operator/(const ExactScalar& x, const ExactScalar& y) {
        Surd n = y.re_ * y.re_ + y.im_ * y.im_;
        if (n.is_zero()) throw std::domain_error("ExactScalar: division by zero");
        ExactScalar z = x * conj(y);
        return {z.re_ / n, z.im_ / n};
    }
    ExactScalar operator-() const { return {-re_, -im_}; }
    ExactScalar& operator+=(const ExactScalar& y) { return *this = *this + y; }
    ExactScalar& operator-=(const ExactScalar& y) { return *this = *this - y; }
    ExactScalar& operator*=(const ExactScalar& y) { return *this = *this * y; }
    ExactScalar& operator/=(const ExactScalar& y) { return *this = *this / y; }

    friend bool operator==(const ExactScalar& x, const ExactScalar& y) {
        return x.re_ == y.re_ && x.im_ == y.im_;
    }
    friend bool operator!=(const ExactScalar& x, const ExactScalar& y) {
        return !(x == y);
    }

    friend ExactScalar conj(const ExactScalar& x) { return {x.re_, -x.im_}; }
    friend Surd real(const ExactScalar& x) { return x.re_; }
    friend Surd imag(const ExactScalar& x) { return x.im_; }
    friend Surd abs2(const ExactScalar& x) {
        return x.re_ * x.re_ + x.im_ * x.im_;
    }

    std::complex<double> to_complex() const {
        return {re_.to_double(), im_.to_double()};
    }

    std::string str() const {
        if (im_.is_zero()) return re_.str();
        return "(" + re_.str() + ")+i(" + im_.str() + ")";
    }

private:
    Surd re_;
    Surd im_;
};

}  // namespace nogo

namespace Eigen {

template <>
struct NumTraits<nogo::Surd> {
    using Real = nogo::Surd;
    using NonInteger = nogo::Surd;
    using Nested = nogo::Surd;
    using Literal = nogo::Surd;
    enum {
        IsComplex = 0,
        IsInteger = 0,
        IsSigned = 1,
        RequireInitialization = 1,
        ReadCost = 2,
        AddCost = 10,
        MulCost = 20,
    };
    static inline Real epsilon() { return nogo::Surd(0); }
    static inline Real dummy_precision() { return nogo::Surd(0); }
    static inline int digits10() { return 0; }
};

template <>
struct NumTraits<nogo::ExactScalar> {
    using Real = nogo::Surd;
    using NonInteger = nogo::ExactScalar;
    using Nested = nogo::ExactScalar;
    using Literal = nogo::ExactScalar;
    enum {
        IsComplex = 1,
        IsInteger = 0,
        IsSigned = 1,
        RequireInitialization = 1,
        ReadCost = 4,
        AddCost = 20,
        MulCost = 80,
    };
    static inline Real epsilon() { return nogo::Surd(0); }
    static inline Real dummy_precision() { return nogo::Surd(0); }
    static inline int digits10() { return 0; }
};

}  // namespace Eigen

namespace nogo {

using ExactMatrix = Eigen::Matrix<ExactScalar, Eigen::Dynamic, Eigen::Dynamic>;
using ExactVector = Eigen::Matrix<ExactScalar, Eigen::Dynamic, 1>;

inline Eigen::MatrixXcd to_complex(const ExactMatrix& m) {
    Eigen::MatrixXcd out(m.rows(), m.cols());
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i) out(i, j) = m(i, j).to_complex();
    return out;
}

inline Eigen::VectorXcd to_complex(const ExactVector& v) {
    Eigen::VectorXcd out(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) out(i) = v(i).to_complex();
    return out;
}

}  // namespace nogo
