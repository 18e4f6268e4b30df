#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "nogo/bell.hpp"

using namespace nogo;
using namespace nogo::bell;

namespace {

Observable sigma(int k) { return Observable(Matrix(pauli(k))); }

BlochState random_state(std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    Eigen::Vector3d n(g(rng), g(rng), g(rng));
    while (n.norm() < 1e-6) n = Eigen::Vector3d(g(rng), g(rng), g(rng));
    return BlochState(n / n.norm());
}

}  // namespace

TEST_CASE("decompose: Pauli coordinates") {
    PauliDecomposition p = decompose(sigma(3));
    CHECK(p.a0 == doctest::Approx(0.0));
    CHECK(p.a.isApprox(Eigen::Vector3d(0, 0, 1), 1e-12));

    p = decompose(sigma(0));
    CHECK(p.a0 == doctest::Approx(1.0));
    CHECK(p.a.norm() <= 1e-12);

    Matrix d31 = Matrix::Zero(2, 2);
    d31(0, 0) = 3;
    d31(1, 1) = 1;
    p = decompose(Observable(std::move(d31)));
    CHECK(p.a0 == doctest::Approx(2.0));
    CHECK(p.a.isApprox(Eigen::Vector3d(0, 0, 1), 1e-12));
}

TEST_CASE("decompose/compose: reconstruction within 1e-12") {
    std::mt19937_64 rng(2);
    for (int t = 0; t < 100; ++t) {
        Observable a(random_hermitian(2, rng));
        PauliDecomposition p = decompose(a);
        CHECK((compose(p).matrix() - a.matrix()).norm() <= 1e-12);
        auto sp = spectrum(a);
        CHECK(sp[0] == doctest::Approx(p.a0 - p.a.norm()).epsilon(1e-10));
        CHECK(sp[1] == doctest::Approx(p.a0 + p.a.norm()).epsilon(1e-10));
    }
}

TEST_CASE("orientation rule: total and exactly antisymmetric") {
    std::mt19937_64 rng(6);
    std::normal_distribution<double> g;
    for (int t = 0; t < 200; ++t) {
        Eigen::Vector3d axis(g(rng), g(rng), g(rng));
        if (axis.norm() < 1e-9) continue;
        axis.normalize();
        if (t % 3 == 0) axis(t % 2) = 0.0;  // exercise zero components
        if (axis.norm() < 1e-9) continue;
        CHECK(orientation_sign(axis) == -orientation_sign(-axis));
        CHECK(std::abs(orientation_sign(axis)) == 1);
    }
    CHECK(orientation_sign(Eigen::Vector3d(0, 1, 0)) == 1);
    CHECK(orientation_sign(Eigen::Vector3d(0, 0, -2)) == -1);
}

TEST_CASE("assign_value: stated examples") {
    BlochState up(Eigen::Vector3d(0, 0, 1));
    CHECK(assign_value(up, 0.3, sigma(3)) == doctest::Approx(1.0));

    Matrix five_i = 5.0 * Matrix::Identity(2, 2);
    CHECK(assign_value(up, -0.4, Observable(std::move(five_i))) ==
          doctest::Approx(5.0));

    // c(x-hat) = +1 under the first-nonzero-component rule
    CHECK(assign_value(up, 0.7, sigma(1)) == doctest::Approx(1.0));
    CHECK(assign_value(up, -0.7, sigma(1)) == doctest::Approx(-1.0));

    // tie lambda = -ahat.n/c: sign0 falls back to c = +1
    CHECK(assign_value(up, -1.0, sigma(3)) == doctest::Approx(1.0));
}

TEST_CASE("assign_value: always lands in the spectrum") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> lam(-1.0, 1.0);
    for (int t = 0; t < 500; ++t) {
        BlochState s = random_state(rng);
        Observable a(random_hermitian(2, rng));
        PauliDecomposition p = decompose(a);
        double v = assign_value(s, lam(rng), a);
        bool lo = std::abs(v - (p.a0 - p.a.norm())) <= 1e-12;
        bool hi = std::abs(v - (p.a0 + p.a.norm())) <= 1e-12;
        CHECK((lo || hi));
    }
}

TEST_CASE("expectation_exact: stated examples and trace oracle") {
    BlochState up(Eigen::Vector3d(0, 0, 1));
    CHECK(expectation_exact(up, sigma(1)) == doctest::Approx(0.0));
    CHECK(expectation_exact(up, sigma(3)) == doctest::Approx(1.0));

    std::mt19937_64 rng(10);
    for (int t = 0; t < 1000; ++t) {
        BlochState s = random_state(rng);
        Observable a(random_hermitian(2, rng));
        double e = expectation_exact(s, a);
        double tr = (density(s).matrix() * a.matrix()).trace().real();
        CHECK(std::abs(e - tr) <= 1e-12);
    }
}

TEST_CASE("expectation_mc: constant outcomes have zero spread") {
    BlochState up(Eigen::Vector3d(0, 0, 1));
    McEstimate est = expectation_mc(up, sigma(3), 10000, 42);
    CHECK(est.estimate == doctest::Approx(1.0));
    CHECK(est.stderr_ == doctest::Approx(0.0));

    Matrix a0 = 2.5 * Matrix::Identity(2, 2);
    est = expectation_mc(up, Observable(std::move(a0)), 1000, 1);
    CHECK(est.estimate == doctest::Approx(2.5));
    CHECK(est.stderr_ == doctest::Approx(0.0));

    CHECK_THROWS_AS(expectation_mc(up, sigma(3), 0, 1), std::invalid_argument);
}

TEST_CASE("expectation_mc: 4-sigma agreement with the closed form") {
    BlochState up(Eigen::Vector3d(0, 0, 1));
    McEstimate est = expectation_mc(up, sigma(1), 1'000'000, 7);
    CHECK(std::abs(est.estimate - 0.0) <= 4.0 * est.stderr_);
    CHECK(est.stderr_ == doctest::Approx(1.0 / 1000.0).epsilon(0.05));
}

TEST_CASE("expectation_mc: estimate is seed-deterministic and thread-stable") {
    std::mt19937_64 rng(3);
    BlochState s = random_state(rng);
    Observable a(random_hermitian(2, rng));
    McEstimate one = expectation_mc(s, a, 200'000, 99, 1);
    McEstimate again = expectation_mc(s, a, 200'000, 99, 1);
    McEstimate threaded = expectation_mc(s, a, 200'000, 99, 4);
    CHECK(one.estimate == again.estimate);
    CHECK(one.estimate == threaded.estimate);
    CHECK(one.stderr_ == threaded.stderr_);
}

TEST_CASE("functional consistency: stated examples") {
    BlochState up(Eigen::Vector3d(0, 0, 1));
    // f(x) = x^2 applied to sigma_z gives I: v(I) = 1 = v(sigma_z)^2.
    double sq[] = {0, 0, 1};
    Polynomial fsq = Polynomial::univariate(sq);
    CHECK(check_functional_consistency(up, 0.25, sigma(3), fsq));

    // f(x) = -x: forced by the antisymmetric orientation rule.
    double neg[] = {0, -1};
    Polynomial fneg = Polynomial::univariate(neg);
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> lam(-1.0, 1.0);
    for (int t = 0; t < 200; ++t)
        CHECK(check_functional_consistency(random_state(rng), lam(rng), sigma(1), fneg));
}

TEST_CASE("functional consistency: random polynomials, tie points included") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> lam(-1.0, 1.0);
    std::uniform_real_distribution<double> coeff(-2.0, 2.0);
    for (int t = 0; t < 2000; ++t) {
        BlochState s = random_state(rng);
        Observable a(random_hermitian(2, rng));
        double cs[4] = {coeff(rng), coeff(rng), coeff(rng), coeff(rng)};
        Polynomial f = Polynomial::univariate(cs);

        double lambda;
        if (t % 4 == 0) {
            // Constructed tie point: lambda = -ahat.n / c(ahat).
            PauliDecomposition p = decompose(a);
            if (p.a.norm() < 1e-12) continue;
            Eigen::Vector3d ahat = p.a / p.a.norm();
            lambda = -ahat.dot(s.n) / orientation_sign(ahat);
            if (std::abs(lambda) > 1.0) lambda = lam(rng);
        } else {
            lambda = lam(rng);
        }
        CHECK(check_functional_consistency(s, lambda, a, f));
    }
}

TEST_CASE("affinity in the state via the trace oracle") {
    std::mt19937_64 rng(31);
    for (int t = 0; t < 100; ++t) {
        BlochState n1 = random_state(rng), n2 = random_state(rng);
        Observable a(random_hermitian(2, rng));
        auto mixed_expectation = [&](const Eigen::Vector3d& m) {
            Matrix rho = 0.5 * pauli(0);
            for (int k = 1; k <= 3; ++k) rho += 0.5 * m(k - 1) * pauli(k);
            return (rho * a.matrix()).trace().real();
        };
        double mid = mixed_expectation(0.5 * n1.n + 0.5 * n2.n);
        double avg = 0.5 * expectation_exact(n1, a) + 0.5 * expectation_exact(n2, a);
        CHECK(std::abs(mid - avg) <= 1e-12);
    }
}

TEST_CASE("convex extension certificate: gap 1/2 for |0>,|+> on E=|0><0|") {
    Violation v = convex_extension_certificate();
    CHECK(v.gap == doctest::Approx(0.5).epsilon(1e-12));
    REQUIRE(v.lhs.size() == 2);
    CHECK(v.lhs[0] == doctest::Approx(1.0));
    CHECK(v.lhs[1] == doctest::Approx(0.5));
    CHECK(std::abs(bell::recheck(v) - v.gap) <= 1e-12);
}

TEST_CASE("convex extension certificate: orthogonal pair gives gap 1") {
    std::mt19937_64 rng(14);
    Vector e = random_unit_vector(2, rng);
    Vector perp(2);
    perp << -std::conj(e(1)), std::conj(e(0));
    Violation v = convex_extension_certificate(Ray(e), Ray(e), Ray(perp));
    CHECK(v.gap == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(bell::recheck(v) - v.gap) <= 1e-12);
}

TEST_CASE("convex extension certificate: Born-rule angle dependence") {
    Vector zero(2);
    zero << 1, 0;
    for (double theta : {0.3, 1.1, 2.0, 3.0}) {
        Vector other(2);
        other << std::cos(theta / 2), std::sin(theta / 2);
        Violation v = convex_extension_certificate(Ray(zero), Ray(zero), Ray(other));
        double expect = std::abs(1.0 - std::pow(std::cos(theta / 2), 2));
        CHECK(v.gap == doctest::Approx(expect).epsilon(1e-12));
    }
}
