#include "nogo/bell.hpp"

#include <atomic>
#include <cmath>
#include <thread>

namespace nogo {
namespace bell {

const Matrix& pauli(int k) {
    static const Matrix mats[4] = {
        (Matrix(2, 2) << 1, 0, 0, 1).finished(),
        (Matrix(2, 2) << 0, 1, 1, 0).finished(),
        (Matrix(2, 2) << 0, Cplx(0, -1), Cplx(0, 1), 0).finished(),
        (Matrix(2, 2) << 1, 0, 0, -1).finished(),
    };
    if (k < 0 || k > 3) throw std::invalid_argument("pauli: index in 0..3");
    return mats[k];
}

BlochState bloch_from_ray(const Ray& psi) {
    if (psi.dim() != 2) throw std::invalid_argument("bloch_from_ray: dim must be 2");
    Matrix rho = psi.projector();
    Eigen::Vector3d n;
    for (int k = 1; k <= 3; ++k) n(k - 1) = (rho * pauli(k)).trace().real();
    return BlochState(n / n.norm());
}

DensityMatrix density(const BlochState& s) {
    Matrix rho = 0.5 * pauli(0);
    for (int k = 1; k <= 3; ++k) rho += 0.5 * s.n(k - 1) * pauli(k);
    return DensityMatrix(std::move(rho));
}

PauliDecomposition decompose(const Observable& a) {
    if (a.dim() != 2) throw std::invalid_argument("decompose: dim must be 2");
    PauliDecomposition p;
    p.a0 = 0.5 * a.matrix().trace().real();
    for (int k = 1; k <= 3; ++k)
        p.a(k - 1) = 0.5 * (a.matrix() * pauli(k)).trace().real();
    return p;
}

Observable compose(const PauliDecomposition& p) {
    Matrix m = p.a0 * pauli(0);
    for (int k = 1; k <= 3; ++k) m += p.a(k - 1) * pauli(k);
    return Observable(std::move(m));
}

int orientation_sign(const Eigen::Vector3d& axis) {
    for (int k = 0; k < 3; ++k) {
        if (axis(k) > 1e-9) return 1;
        if (axis(k) < -1e-9) return -1;
    }
    throw std::invalid_argument("orientation_sign: zero axis");
}

namespace {

// Exact zeros arise only on a measure-zero set; the 1e-12 band makes the
// tie decision stable when t is reassembled through different expression
// orders (e.g. for f(A) built by the spectral calculus).
inline double sign0(double x, int tie) {
    if (x > 1e-12) return 1.0;
    if (x < -1e-12) return -1.0;
    return tie;
}

}  // namespace

double assign_value(const BlochState& s, HiddenVariable lambda,
                    const PauliDecomposition& p) {
    double r = p.a.norm();
    if (r == 0.0) return p.a0;
    Eigen::Vector3d ahat = p.a / r;
    int c = orientation_sign(ahat);
    return p.a0 + r * sign0(ahat.dot(s.n) + c * lambda, c);
}

double assign_value(const BlochState& s, HiddenVariable lambda, const Observable& a) {
    return assign_value(s, lambda, decompose(a));
}

double expectation_exact(const BlochState& s, const Observable& a) {
    PauliDecomposition p = decompose(a);
    // Uniform average of sign0(x + c lambda) over lambda in [-1,1] is x for
    // |x| <= 1 and either c, so the integral collapses to a0 + a.n.
    double value = p.a0 + p.a.dot(s.n);
    double trace = (density(s).matrix() * a.matrix()).trace().real();
    if (std::abs(value - trace) > 1e-12)
        throw std::logic_error("expectation_exact: closed form disagrees with Tr(rho A)");
    return value;
}

namespace {

constexpr int kSubstreams = 16;
constexpr std::uint64_t kSubstreamStride = 0x9E3779B97F4A7C15ull;

struct StreamMoments {
    double sum = 0.0;
    double sumsq = 0.0;
};

// One substream's contribution; uniform doubles from the top 53 bits.
StreamMoments run_substream(std::uint64_t seed, std::uint64_t count, double a0,
                            double r, double x, int c) {
    std::mt19937_64 rng(seed);
    StreamMoments m;
    for (std::uint64_t i = 0; i < count; ++i) {
        double u = static_cast<double>(rng() >> 11) * 0x1.0p-52 - 1.0;  // [-1,1)
        double v = a0 + r * sign0(x + c * u, c);
        m.sum += v;
        m.sumsq += v * v;
    }
    return m;
}

}  // namespace

McEstimate expectation_mc(const BlochState& s, const Observable& a, std::uint64_t n,
                          std::uint64_t seed, int threads) {
    if (n == 0) throw std::invalid_argument("expectation_mc: N must be >= 1");
    PauliDecomposition p = decompose(a);
    double r = p.a.norm();
    double x = 0.0;
    int c = 1;
    if (r > 0.0) {
        Eigen::Vector3d ahat = p.a / r;
        c = orientation_sign(ahat);
        x = ahat.dot(s.n);
    }

    std::uint64_t counts[kSubstreams];
    for (int j = 0; j < kSubstreams; ++j)
        counts[j] = n / kSubstreams + (static_cast<std::uint64_t>(j) < n % kSubstreams);
    StreamMoments moments[kSubstreams];

    threads = std::max(1, threads);
    if (threads == 1) {
        for (int j = 0; j < kSubstreams; ++j)
            moments[j] = run_substream(seed + j * kSubstreamStride, counts[j], p.a0, r, x, c);
    } else {
        std::vector<std::thread> pool;
        std::atomic<int> next{0};
        for (int t = 0; t < std::min(threads, kSubstreams); ++t)
            pool.emplace_back([&] {
                for (int j = next.fetch_add(1); j < kSubstreams; j = next.fetch_add(1))
                    moments[j] =
                        run_substream(seed + j * kSubstreamStride, counts[j], p.a0, r, x, c);
            });
        for (auto& th : pool) th.join();
    }

    double sum = 0.0, sumsq = 0.0;
    for (int j = 0; j < kSubstreams; ++j) {  // fixed combination order
        sum += moments[j].sum;
        sumsq += moments[j].sumsq;
    }
    McEstimate est;
    est.n = n;
    est.estimate = sum / static_cast<double>(n);
    if (n > 1) {
        double var = (sumsq - sum * sum / static_cast<double>(n)) /
                     static_cast<double>(n - 1);
        est.stderr_ = std::sqrt(std::max(0.0, var) / static_cast<double>(n));
    }
    return est;
}

bool check_functional_consistency(const BlochState& s, HiddenVariable lambda,
                                  const Observable& a, const Polynomial& f,
                                  double tol) {
    if (f.nvars() != 1)
        throw std::invalid_argument("check_functional_consistency: f must be univariate");
    PauliDecomposition p = decompose(a);
    double r = p.a.norm();
    Eigen::VectorXd x(1);
    if (r == 0.0) {
        x(0) = p.a0;
        return true;  // f(a0 I) and f(a0) coincide by definition
    }
    // f(A) through the spectral calculus: same eigenvectors, eigenvalues
    // mapped through f, so its Pauli axis is exactly +-ahat.
    Eigen::Vector3d ahat = p.a / r;
    x(0) = p.a0 + r;
    double f_hi = f(x);
    x(0) = p.a0 - r;
    double f_lo = f(x);
    PauliDecomposition fp{0.5 * (f_hi + f_lo), 0.5 * (f_hi - f_lo) * ahat};

    double lhs = assign_value(s, lambda, fp);
    x(0) = assign_value(s, lambda, p);
    double rhs = f(x);
    return std::abs(lhs - rhs) <= tol;
}

Violation convex_extension_certificate(const Ray& effect, const Ray& state_a,
                                       const Ray& state_b) {
    double pa = born(state_a, effect);
    double pb = born(state_b, effect);
    Violation v;
    v.kind = Violation::Kind::Eq1;
    v.constraint =
        "state-independent mu forces one Lambda-average of F(E) for all pure "
        "states, but the Born values Tr(rho E) differ between the two states";
    v.lhs = {pa, pb};
    v.rhs = {};  // the single common value both sides would have to equal
    v.gap = std::abs(pa - pb);
    v.tol = 1e-12;
    v.witness_rays = {effect, state_a, state_b};
    return v;
}

Violation convex_extension_certificate() {
    Vector zero(2), plus(2);
    zero << 1, 0;
    plus << 1, 1;
    Ray e(zero);
    return convex_extension_certificate(e, e, Ray(plus));
}

double recheck(const Violation& v) {
    if (v.witness_rays.size() != 3)
        throw std::invalid_argument("bell::recheck: certificate lacks witness rays");
    return std::abs(born(v.witness_rays[1], v.witness_rays[0]) -
                    born(v.witness_rays[2], v.witness_rays[0]));
}

}  // namespace bell
}  // namespace nogo
