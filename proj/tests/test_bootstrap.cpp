#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "nogo/bootstrap.hpp"
#include "sat_oracle.hpp"

using namespace nogo;

namespace {

const std::string kData = NOGO_DATA_DIR;

Ray unit_ray(int dim, int k) {
    Vector v = Vector::Zero(dim);
    v(k) = 1.0;
    return Ray(std::move(v));
}

DensityMatrix random_density(int dim, std::mt19937_64& rng) {
    Matrix h = random_hermitian(dim, rng);
    Matrix p = h * h.adjoint() + 0.1 * Matrix::Identity(dim, dim);
    return DensityMatrix(Matrix(p / p.trace().real()));
}

// Candidate with arbitrary tables over random dim-3 objects plus the
// embeddings of the requested dim-2 objects.
CandidateRepresentation random_parent_candidate(std::mt19937_64& rng,
                                                std::span<const DensityMatrix> small_states,
                                                std::span<const Ray> small_effects) {
    CandidateRepresentation c(3, {"a", "b", "c", "d"});
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto random_mu = [&] {
        Eigen::VectorXd mu(4);
        for (int i = 0; i < 4; ++i) mu(i) = u(rng) + 1e-3;
        return Eigen::VectorXd(mu / mu.sum());
    };
    auto random_f = [&] {
        Eigen::VectorXd f(4);
        for (int i = 0; i < 4; ++i) f(i) = u(rng);
        return f;
    };
    for (int t = 0; t < 3; ++t) c.add_state(random_density(3, rng), random_mu());
    for (const auto& rho : small_states) c.add_state(embed(rho, 3), random_mu());
    for (int t = 0; t < 3; ++t)
        c.add_effect(Ray(random_unit_vector(3, rng)), random_f());
    for (const auto& e : small_effects) c.add_effect(embed(e, 3), random_f());
    return c;
}

}  // namespace

TEST_CASE("restrict: trivial pure theory keeps the trace pairing exact") {
    std::vector<Ray> states;
    for (int k = 0; k < 3; ++k) states.push_back(unit_ray(3, k));
    CandidateRepresentation parent = trivial_pure_theory(3, states);
    CHECK(check_eq1(parent).empty());

    CandidateRepresentation child = restrict_expectation_rep(parent, 2);
    CHECK(child.dim() == 2);
    CHECK(child.states().size() == 2);   // the two states supported on the block
    CHECK(child.effects().size() == 2);
    CHECK(check_eq1(child).empty());
}

TEST_CASE("restrict: mu-rows are copied verbatim") {
    std::mt19937_64 rng(3);
    std::vector<DensityMatrix> want_states{random_density(2, rng)};
    std::vector<Ray> want_effects{Ray(random_unit_vector(2, rng))};
    CandidateRepresentation parent =
        random_parent_candidate(rng, want_states, want_effects);
    CandidateRepresentation child =
        restrict_expectation_rep(parent, 2, want_states, want_effects);
    REQUIRE(child.states().size() == 1);
    REQUIRE(child.effects().size() == 1);
    // Bit-identical row copies.
    const Eigen::VectorXd& got = child.states()[0].mu;
    const Eigen::VectorXd& src = parent.states()[3].mu;
    for (int i = 0; i < got.size(); ++i) CHECK(got(i) == src(i));
    const Eigen::VectorXd& gotf = child.effects()[0].f;
    const Eigen::VectorXd& srcf = parent.effects()[3].f;
    for (int i = 0; i < gotf.size(); ++i) CHECK(gotf(i) == srcf(i));
}

TEST_CASE("restrict: residuals equal the parent's on embedded pairs") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<DensityMatrix> ws{random_density(2, rng)};
        std::vector<Ray> we{Ray(random_unit_vector(2, rng))};
        CandidateRepresentation parent = random_parent_candidate(rng, ws, we);
        CandidateRepresentation child = restrict_expectation_rep(parent, 2, ws, we);

        double parent_lhs = (parent.states()[3].rho.matrix() *
                             parent.effects()[3].ray.projector())
                                .trace()
                                .real();
        double parent_rhs = parent.effects()[3].f.dot(parent.states()[3].mu);
        double child_lhs =
            (child.states()[0].rho.matrix() * child.effects()[0].ray.projector())
                .trace()
                .real();
        double child_rhs = child.effects()[0].f.dot(child.states()[0].mu);
        CHECK(std::abs(child_lhs - parent_lhs) <= 1e-12);  // Tr preserved by embed
        CHECK(child_rhs == parent_rhs);                    // copied tables
        CHECK(std::abs(std::abs(child_lhs - child_rhs) -
                       std::abs(parent_lhs - parent_rhs)) <= 1e-12);
    }
}

TEST_CASE("restrict: missing objects are reported") {
    std::mt19937_64 rng(9);
    CandidateRepresentation parent = random_parent_candidate(rng, {}, {});
    std::vector<DensityMatrix> want{random_density(2, rng)};
    CHECK_THROWS_AS(restrict_expectation_rep(parent, 2, want, {}), std::out_of_range);
}

TEST_CASE("lift: bundled dim-3 set lifts to dim 4, solver-certified") {
    RaySet rs = load_rayset(kData + "/peres33.json");
    LiftResult res = lift_rayset(rs, 4);
    CHECK(res.rayset.dim == 4);
    CHECK(res.certificate.outcome == SearchCertificate::Outcome::Exhausted);
    CHECK(res.rayset.expected == "uncolorable");
    // Independent oracle agrees.
    CHECK_FALSE(sat_oracle::colorable(res.rayset));

    // The padded original is a subset of the lift.
    for (const auto& r : rs.rays) {
        Ray padded = embed(r, 4);
        bool present = false;
        for (const auto& k : res.rayset.rays)
            present = present || k.equivalent_to(padded);
        CHECK(present);
    }
}

TEST_CASE("lift: colorable input is rejected up front") {
    RaySet rs = load_rayset(kData + "/basis3.json");
    CHECK_THROWS_AS(lift_rayset(rs, 4), std::invalid_argument);
}

TEST_CASE("lift: target dimension must exceed the input") {
    RaySet rs = load_rayset(kData + "/peres33.json");
    CHECK_THROWS_AS(lift_rayset(rs, 3), std::invalid_argument);
}

TEST_CASE("tensor_modulo_identity: k = 1 returns the original projections") {
    RaySet rs = load_rayset(kData + "/peres33.json");
    TensorResult res = tensor_modulo_identity(rs, 1);
    REQUIRE(res.operators.size() == rs.rays.size());
    for (size_t i = 0; i < rs.rays.size(); ++i)
        CHECK((res.operators[i].matrix() - rs.rays[i].projector()).norm() <= 1e-12);
    CHECK(res.certificate.outcome == SearchCertificate::Outcome::Exhausted);
}

TEST_CASE("tensor_modulo_identity: outputs are projections of trace k") {
    RaySet rs = load_rayset(kData + "/peres33.json");
    TensorResult res = tensor_modulo_identity(rs, 2);
    for (const auto& op : res.operators) {
        const Matrix& m = op.matrix();
        CHECK((m * m - m).norm() <= 1e-12);
        CHECK(std::abs(m.trace().real() - 2.0) <= 1e-12);
    }
    CHECK(res.certificate.outcome == SearchCertificate::Outcome::Exhausted);
}

TEST_CASE("tensor_modulo_identity: commutation mirrors ray orthogonality") {
    RaySet rs = load_rayset(kData + "/peres33.json");
    TensorResult res = tensor_modulo_identity(rs, 2);
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 40; ++trial) {
        size_t i = rng() % rs.rays.size(), j = rng() % rs.rays.size();
        if (i == j) continue;
        bool ortho = rs.rays[i].orthogonal_to(rs.rays[j]);
        CHECK(commutes(res.operators[i], res.operators[j]) == ortho);
    }
}

TEST_CASE("tensor_modulo_identity: colorable input is rejected") {
    RaySet rs = load_rayset(kData + "/basis3.json");
    CHECK_THROWS_AS(tensor_modulo_identity(rs, 2), std::invalid_argument);
}
