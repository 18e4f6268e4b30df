#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "nogo/representation.hpp"

using namespace nogo;

namespace {

const std::string kData = NOGO_DATA_DIR;

Ray basis_ray(int dim, int k) {
    Vector v = Vector::Zero(dim);
    v(k) = 1.0;
    return Ray(std::move(v));
}

Ray plus_ray() {
    Vector v(2);
    v << 1, 1;
    return Ray(std::move(v));
}

Ray minus_ray() {
    Vector v(2);
    v << 1, -1;
    return Ray(std::move(v));
}

}  // namespace

TEST_CASE("candidate validation rejects malformed rows") {
    CandidateRepresentation c(2, {"a", "b"});
    Eigen::VectorXd bad_mu(2);
    bad_mu << 0.7, 0.7;
    CHECK_THROWS_AS(c.add_state(DensityMatrix::pure(basis_ray(2, 0)), bad_mu),
                    std::invalid_argument);
    Eigen::VectorXd bad_f(2);
    bad_f << 1.5, 0.0;
    CHECK_THROWS_AS(c.add_effect(basis_ray(2, 0), bad_f), std::invalid_argument);
}

TEST_CASE("trivial pure theory: the trace pairing holds on all listed pairs") {
    std::vector<Ray> states{basis_ray(2, 0), basis_ray(2, 1), plus_ray()};
    CandidateRepresentation c = trivial_pure_theory(2, states);
    CHECK(check_eq1(c).empty());

    // Completeness: F(|0><0|) + F(|1><1|) = 1 at every hidden point.
    const auto& f0 = c.effects()[0].f;
    const auto& f1 = c.effects()[1].f;
    for (int i = 0; i < c.lambda_size(); ++i)
        CHECK(f0(i) + f1(i) == doctest::Approx(1.0).epsilon(1e-12));

    // Orthogonal state/effect gives F = 0.
    CHECK(c.effects()[1].f(0) == doctest::Approx(0.0));

    CHECK_THROWS_AS(trivial_pure_theory(2, std::vector<Ray>{basis_ray(2, 0),
                                                            basis_ray(2, 0)}),
                    std::invalid_argument);
}

TEST_CASE("check_eq1: the F=1/2 adversary gives gap 1/2") {
    CandidateRepresentation c(2, {"l0", "l1"});
    Eigen::VectorXd mu(2), f(2);
    mu << 0.5, 0.5;
    f << 0.5, 0.5;
    c.add_state(DensityMatrix::pure(basis_ray(2, 0)), mu);
    c.add_effect(basis_ray(2, 0), f);
    auto vs = check_eq1(c);
    REQUIRE(vs.size() == 1);
    CHECK(vs[0].kind == Violation::Kind::Eq1);
    CHECK(vs[0].gap == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(std::abs(recheck(c, vs[0]) - vs[0].gap) <= 1e-12);
}

TEST_CASE("check_eq1: state-independent mu cannot serve two states") {
    CandidateRepresentation c = load_candidate(kData + "/candidate_bell_uniform.json");
    auto vs = check_eq1(c);
    REQUIRE(!vs.empty());
    double maxgap = 0;
    for (const auto& v : vs) maxgap = std::max(maxgap, v.gap);
    CHECK(maxgap >= 0.25);
    // The two Born values 1 and 1/2 cannot equal one common Lambda-sum.
    CHECK(check_mixture_consistency(c).empty());
}

TEST_CASE("check_convex: degenerate and consistent mixtures pass") {
    std::vector<Ray> states{basis_ray(2, 0), basis_ray(2, 1)};
    CandidateRepresentation c = trivial_pure_theory(2, states);
    // I/2 with the convex-consistent row.
    Eigen::VectorXd mu(2);
    mu << 0.5, 0.5;
    c.add_state(DensityMatrix(Matrix(Matrix::Identity(2, 2) / 2.0)), mu);

    std::vector<MixTriple> triples{{1.0, 0, 1, 0},   // p=1: rho_0 = rho_0
                                   {0.5, 0, 1, 2}};  // I/2 = (rho_0 + rho_1)/2
    CHECK(check_convex(c, triples).empty());
}

TEST_CASE("check_convex: inconsistent mixture row is reported") {
    std::vector<Ray> states{basis_ray(2, 0), basis_ray(2, 1)};
    CandidateRepresentation c = trivial_pure_theory(2, states);
    Eigen::VectorXd mu(2);
    mu << 0.9, 0.1;  // deliberately not the average
    c.add_state(DensityMatrix(Matrix(Matrix::Identity(2, 2) / 2.0)), mu);

    std::vector<MixTriple> triples{{0.5, 0, 1, 2}};
    auto vs = check_convex(c, triples);
    REQUIRE(vs.size() == 1);
    CHECK(vs[0].kind == Violation::Kind::Convexity);
    CHECK(vs[0].gap == doctest::Approx(0.4).epsilon(1e-9));
    CHECK(std::abs(recheck(c, vs[0]) - vs[0].gap) <= 1e-12);

    std::vector<MixTriple> ill{{0.3, 0, 1, 2}};  // not a matrix identity
    CHECK_THROWS_AS(check_convex(c, ill), std::invalid_argument);
}

TEST_CASE("discover_mixtures finds listed decompositions") {
    std::vector<Ray> states{basis_ray(2, 0), basis_ray(2, 1)};
    CandidateRepresentation c = trivial_pure_theory(2, states);
    Eigen::VectorXd mu(2);
    mu << 0.5, 0.5;
    c.add_state(DensityMatrix(Matrix(Matrix::Identity(2, 2) / 2.0)), mu);
    auto triples = discover_mixtures(c);
    bool found = false;
    for (const auto& t : triples)
        found = found || (t.k == 2 && std::abs(t.p - 0.5) < 1e-9);
    CHECK(found);
}

TEST_CASE("check_mixture_consistency: the two-basis I/2 example has gap 1/2") {
    std::vector<Ray> states{basis_ray(2, 0), basis_ray(2, 1), plus_ray(), minus_ray()};
    CandidateRepresentation c = trivial_pure_theory(2, states);
    auto vs = check_mixture_consistency(c);
    REQUIRE(!vs.empty());
    double maxgap = 0;
    const Violation* best = nullptr;
    for (const auto& v : vs)
        if (v.gap > maxgap) maxgap = v.gap, best = &v;
    REQUIRE(best);
    CHECK(maxgap == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(best->kind == Violation::Kind::MixtureConsistency);
    CHECK(std::abs(recheck(c, *best) - best->gap) <= 1e-12);
}

TEST_CASE("check_mixture_consistency: single decomposition stays silent") {
    std::vector<Ray> states{basis_ray(2, 0), basis_ray(2, 1)};
    CandidateRepresentation c = trivial_pure_theory(2, states);
    CHECK(check_mixture_consistency(c).empty());
}

TEST_CASE("check_mixture_consistency: duplicate states with different rows") {
    CandidateRepresentation c(2, {"a", "b"});
    Eigen::VectorXd m1(2), m2(2);
    m1 << 1.0, 0.0;
    m2 << 0.0, 1.0;
    c.add_state(DensityMatrix::pure(basis_ray(2, 0)), m1);
    c.add_state(DensityMatrix::pure(basis_ray(2, 0)), m2);
    auto vs = check_mixture_consistency(c);
    REQUIRE(!vs.empty());
    CHECK(vs[0].gap == doctest::Approx(1.0));
}

TEST_CASE("falsify: table violations surface without probing") {
    CandidateRepresentation c = load_candidate(kData + "/candidate_fhalf.json");
    FalsifyReport rep = falsify(c);
    REQUIRE(rep.violation);
    CHECK(rep.violation->kind == Violation::Kind::Eq1);
    CHECK(rep.violation->gap == doctest::Approx(0.5));
    CHECK(rep.probes_used == 0);
}

TEST_CASE("falsify: trivial pure theory falls to the I/2 probe") {
    std::vector<Ray> states{basis_ray(2, 0), basis_ray(2, 1)};
    CandidateRepresentation c = trivial_pure_theory(2, states);
    ExtensionHook hook = make_born_hook(states);
    FalsifyOptions opts;
    opts.seed = 5;
    FalsifyReport rep = falsify(c, opts, &hook);
    REQUIRE(rep.violation);
    CHECK(rep.violation->kind == Violation::Kind::MixtureConsistency);
    CHECK(rep.violation->gap == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(rep.probes_used == 1);
}

TEST_CASE("falsify: the bell-uniform candidate dies in the listed tables") {
    CandidateRepresentation c = load_candidate(kData + "/candidate_bell_uniform.json");
    FalsifyReport rep = falsify(c);
    REQUIRE(rep.violation);
    CHECK(rep.violation->kind == Violation::Kind::Eq1);
    CHECK(rep.violation->gap >= 0.25);
}

TEST_CASE("falsify: consistent table without hook demands one") {
    std::vector<Ray> states{basis_ray(2, 0), basis_ray(2, 1)};
    CandidateRepresentation c = trivial_pure_theory(2, states);
    CHECK_THROWS_AS(falsify(c), HookRequired);
}

TEST_CASE("falsify: no bundled adversary survives the default budget") {
    for (const char* name :
         {"/candidate_trivial_pure.json", "/candidate_fhalf.json",
          "/candidate_bell_uniform.json"}) {
        CandidateRepresentation c = load_candidate(kData + name);
        std::optional<ExtensionHook> hook;
        try {
            std::vector<Ray> lambda_rays;
            for (const auto& s : c.states()) {
                Eigen::SelfAdjointEigenSolver<Matrix> es(s.rho.matrix());
                lambda_rays.emplace_back(Vector(es.eigenvectors().col(c.dim() - 1)));
            }
            if (static_cast<int>(lambda_rays.size()) == c.lambda_size())
                hook = make_born_hook(std::move(lambda_rays));
        } catch (...) {
        }
        FalsifyReport rep;
        try {
            rep = falsify(c, {}, hook ? &*hook : nullptr);
        } catch (const HookRequired&) {
            continue;  // consistent tables, no way to probe: not a survival
        }
        INFO(name);
        CHECK(rep.violation);
    }
}

TEST_CASE("violations are invariant under relabeling of Lambda") {
    CandidateRepresentation a(2, {"x", "y"});
    CandidateRepresentation b(2, {"first", "second"});
    Eigen::VectorXd mu(2), f(2);
    mu << 0.5, 0.5;
    f << 0.5, 0.5;
    for (auto* c : {&a, &b}) {
        c->add_state(DensityMatrix::pure(basis_ray(2, 0)), mu);
        c->add_effect(basis_ray(2, 0), f);
    }
    auto va = check_eq1(a), vb = check_eq1(b);
    REQUIRE(va.size() == vb.size());
    CHECK(va[0].gap == vb[0].gap);
    CHECK(va[0].lhs == vb[0].lhs);
}

TEST_CASE("born hook keeps the candidate eq1-consistent on pure states") {
    std::vector<Ray> states{basis_ray(2, 0), basis_ray(2, 1)};
    CandidateRepresentation c = trivial_pure_theory(2, states);
    ExtensionHook hook = make_born_hook(states);
    std::mt19937_64 rng(3);
    for (int t = 0; t < 5; ++t) {
        hook.extend_state(c, DensityMatrix::pure(Ray(random_unit_vector(2, rng))));
        hook.extend_effect(c, Ray(random_unit_vector(2, rng)));
    }
    c.validate();
    CHECK(check_eq1(c).empty());
}

TEST_CASE("candidate JSON round-trip") {
    std::vector<Ray> states{basis_ray(2, 0), plus_ray()};
    CandidateRepresentation c = trivial_pure_theory(2, states);
    std::string tmp = std::string(NOGO_DATA_DIR) + "/../build/tmp_candidate.json";
    save_candidate(tmp, c);
    CandidateRepresentation back = load_candidate(tmp);
    CHECK(back.dim() == c.dim());
    REQUIRE(back.states().size() == c.states().size());
    REQUIRE(back.effects().size() == c.effects().size());
    for (size_t i = 0; i < c.states().size(); ++i) {
        CHECK((back.states()[i].rho.matrix() - c.states()[i].rho.matrix()).norm() <=
              1e-12);
        CHECK((back.states()[i].mu - c.states()[i].mu).norm() <= 1e-15);
    }
    CHECK(check_eq1(back).empty());
}
