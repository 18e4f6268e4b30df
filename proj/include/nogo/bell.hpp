#pragma once

#include "nogo/representation.hpp"
#include "nogo/spectra.hpp"

namespace nogo {
namespace bell {

// The hidden variable is a single real lambda drawn uniformly from [-1,1];
// (Lambda, uniform) is the model's probability space.
using HiddenVariable = double;

// Bloch vector of the pure state |psi><psi| = (I + n.sigma)/2.
struct BlochState {
    Eigen::Vector3d n;

    explicit BlochState(Eigen::Vector3d v) : n(std::move(v)) {
        if (std::abs(n.norm() - 1.0) > 1e-12)
            throw std::invalid_argument("BlochState: vector must have unit length");
    }
};

BlochState bloch_from_ray(const Ray& psi);
DensityMatrix density(const BlochState& s);

// A = a0 I + a . sigma; eigenvalues a0 +- |a|.
struct PauliDecomposition {
    double a0;
    Eigen::Vector3d a;
};

PauliDecomposition decompose(const Observable& a);
Observable compose(const PauliDecomposition& p);

const Matrix& pauli(int k);  // 1,2,3 -> x,y,z; 0 -> identity

// Antisymmetric total tie-breaking rule c(axis): the sign of the first
// nonzero component in the fixed order (x, y, z). c(-axis) == -c(axis).
// Components below 1e-9 count as zero so that axes recovered from noisy
// matrices orient the same way as their exact counterparts.
int orientation_sign(const Eigen::Vector3d& axis);

// The model's value map: a0 + |a| * sign0(ahat.n + c(ahat) lambda), where
// sign0(0) falls back to c(ahat); |t| <= 1e-12 counts as the tie. Always
// an eigenvalue of A.
double assign_value(const BlochState& s, HiddenVariable lambda, const Observable& a);
double assign_value(const BlochState& s, HiddenVariable lambda,
                    const PauliDecomposition& p);

// Closed-form lambda-average a0 + a.n; checked against Tr(rho A) to 1e-12
// on every call.
double expectation_exact(const BlochState& s, const Observable& a);

struct McEstimate {
    double estimate = 0.0;
    double stderr_ = 0.0;  // sample standard deviation / sqrt(N)
    std::uint64_t n = 0;
};

// Monte Carlo average of assign_value over N uniform lambda draws. The
// sample stream is split into 16 fixed substreams regardless of thread
// count (substream j is seeded with seed + j * 0x9E3779B97F4A7C15), so the
// estimate depends on the seed alone.
McEstimate expectation_mc(const BlochState& s, const Observable& a, std::uint64_t n,
                          std::uint64_t seed, int threads = 1);

// v(f(A)) == f(v(A)) for the implemented rule; holds everywhere, tie
// points included, by antisymmetry of the orientation rule.
bool check_functional_consistency(const BlochState& s, HiddenVariable lambda,
                                  const Observable& a, const Polynomial& f,
                                  double tol = 1e-9);

// The obstruction to extending the model convex-linearly: the model's
// state-independent measure forces one common Lambda-average on every pure
// state, yet the Born values already differ for E = |0><0| on |0> versus
// |+>. The certificate carries the witness rays and is re-checkable from
// them alone.
Violation convex_extension_certificate();
Violation convex_extension_certificate(const Ray& effect, const Ray& state_a,
                                       const Ray& state_b);
double recheck(const Violation& v);

}  // namespace bell
}  // namespace nogo
