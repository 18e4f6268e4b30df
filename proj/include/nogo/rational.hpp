#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace nogo {

// Exact rational over checked 64-bit integers. Arithmetic that would
// overflow throws std::overflow_error instead of wrapping; desk-scale ray
// data keeps magnitudes tiny, so hitting the guard means the input is out
// of scope for the exact backend, not that the answer is wrong.
class Rational {
public:
    Rational() = default;
    Rational(std::int64_t n) : num_(n), den_(1) {}
    Rational(std::int64_t n, std::int64_t d) : num_(n), den_(d) {
        if (d == 0) throw std::invalid_argument("Rational: zero denominator");
        normalize();
    }

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    bool is_zero() const { return num_ == 0; }
    int sign() const { return num_ > 0 ? 1 : (num_ < 0 ? -1 : 0); }

    friend Rational operator+(const Rational& x, const Rational& y) {
        // n = x.num*y.den + y.num*x.den,  d = x.den*y.den
        return Rational(add(mul(x.num_, y.den_), mul(y.num_, x.den_)),
                        mul(x.den_, y.den_));
    }
    friend Rational operator-(const Rational& x, const Rational& y) {
        return x + (-y);
    }
    friend Rational operator*(const Rational& x, const Rational& y) {
        return Rational(mul(x.num_, y.num_), mul(x.den_, y.den_));
    }
    friend Rational operator/(const Rational& x, const Rational& y) {
        if (y.num_ == 0) throw std::domain_error("Rational: division by zero");
        return Rational(mul(x.num_, y.den_), mul(x.den_, y.num_));
    }
    Rational operator-() const {
        Rational r;
        r.num_ = neg(num_);
        r.den_ = den_;
        return r;
    }
    Rational& operator+=(const Rational& y) { return *this = *this + y; }
    Rational& operator-=(const Rational& y) { return *this = *this - y; }
    Rational& operator*=(const Rational& y) { return *this = *this * y; }
    Rational& operator/=(const Rational& y) { return *this = *this / y; }

    friend bool operator==(const Rational& x, const Rational& y) {
        return x.num_ == y.num_ && x.den_ == y.den_;
    }
    friend bool operator!=(const Rational& x, const Rational& y) { return !(x == y); }
    friend bool operator<(const Rational& x, const Rational& y) {
        return (x - y).sign() < 0;
    }

    double to_double() const {
        return static_cast<double>(num_) / static_cast<double>(den_);
    }

    // Accepts "p" or "p/q".
    static Rational parse(const std::string& s) {
        auto slash = s.find('/');
        try {
            if (slash == std::string::npos) return Rational(std::stoll(s));
            return Rational(std::stoll(s.substr(0, slash)),
                            std::stoll(s.substr(slash + 1)));
        } catch (const std::logic_error&) {
            throw std::invalid_argument("Rational: cannot parse '" + s + "'");
        }
    }

    std::string str() const {
        if (den_ == 1) return std::to_string(num_);
        return std::to_string(num_) + "/" + std::to_string(den_);
    }

private:
    static std::int64_t add(std::int64_t a, std::int64_t b) {
        std::int64_t r;
        if (__builtin_add_overflow(a, b, &r))
            throw std::overflow_error("Rational: add overflow");
        return r;
    }
    static std::int64_t mul(std::int64_t a, std::int64_t b) {
        std::int64_t r;
        if (__builtin_mul_overflow(a, b, &r))
            throw std::overflow_error("Rational: mul overflow");
        return r;
    }
    static std::int64_t neg(std::int64_t a) {
        std::int64_t r;
        if (__builtin_sub_overflow(std::int64_t{0}, a, &r))
            throw std::overflow_error("Rational: negate overflow");
        return r;
    }

    void normalize() {
        if (den_ < 0) {
            num_ = neg(num_);
            den_ = neg(den_);
        }
        std::int64_t g = std::gcd(num_ < 0 ? neg(num_) : num_, den_);
        if (g > 1) {
            num_ /= g;
            den_ /= g;
        }
        if (num_ == 0) den_ = 1;
    }

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

}  // namespace nogo
