// Regenerates the bundled data files. Every ray set is certified by the
// solver before it is written; nothing is trusted by citation.

#include <filesystem>
#include <iostream>

#include "nogo/bell.hpp"
#include "nogo/json_io.hpp"
#include "nogo/representation.hpp"
#include "nogo/valuation.hpp"

using namespace nogo;
using io::json;

namespace {

ExactScalar exact_int(std::int64_t a, std::int64_t b = 0) {
    return ExactScalar(Surd(Rational(a), Rational(b)));
}

Ray exact_ray(std::initializer_list<std::pair<std::int64_t, std::int64_t>> comps) {
    ExactVector v(comps.size());
    int i = 0;
    for (auto [a, b] : comps) v(i++) = exact_int(a, b);
    return Ray(std::move(v));
}

void add_unique(RaySet& rs, Ray r) {
    for (const auto& k : rs.rays)
        if (k.equivalent_to(r)) return;
    rs.rays.push_back(std::move(r));
}

// The classic dim-3 uncolorable family: every ray whose coordinates (up to
// scale) are 0, +-1 or +-sqrt2, restricted to the 3+6+12+12 pattern of
// squared norms 1,2,3,4.
RaySet square_root_two_rays() {
    RaySet rs;
    rs.dim = 3;
    rs.name = "peres33";
    rs.provenance =
        "33 rays in R^3 with coordinates from {0,+-1,+-sqrt2}; certified "
        "uncolorable by exhaustive search and an independent SAT oracle";
    rs.expected = "uncolorable";

    // (1,0,0) type
    for (int p = 0; p < 3; ++p) {
        std::int64_t c[3] = {0, 0, 0};
        c[p] = 1;
        add_unique(rs, exact_ray({{c[0], 0}, {c[1], 0}, {c[2], 0}}));
    }
    // (0,1,+-1) type
    for (int z = 0; z < 3; ++z)
        for (int s : {1, -1}) {
            std::int64_t c[3];
            c[z] = 0;
            c[(z + 1) % 3] = 1;
            c[(z + 2) % 3] = s;
            add_unique(rs, exact_ray({{c[0], 0}, {c[1], 0}, {c[2], 0}}));
        }
    // (0,1,+-sqrt2) type: one zero, one unit, one +-sqrt2
    for (int z = 0; z < 3; ++z)
        for (int upos = 0; upos < 2; ++upos)
            for (int s : {1, -1}) {
                int a = (z + 1) % 3, b = (z + 2) % 3;
                int one = upos ? a : b;
                int rt = upos ? b : a;
                std::pair<std::int64_t, std::int64_t> c[3];
                c[z] = {0, 0};
                c[one] = {1, 0};
                c[rt] = {0, s};
                add_unique(rs, exact_ray({c[0], c[1], c[2]}));
            }
    // (+-1,+-1,sqrt2) type: sqrt2 in each position, all sign patterns
    for (int rt = 0; rt < 3; ++rt)
        for (int s1 : {1, -1})
            for (int s2 : {1, -1}) {
                std::pair<std::int64_t, std::int64_t> c[3];
                c[rt] = {0, 1};
                c[(rt + 1) % 3] = {s1, 0};
                c[(rt + 2) % 3] = {s2, 0};
                add_unique(rs, exact_ray({c[0], c[1], c[2]}));
            }
    return rs;
}

RaySet standard_basis(int dim) {
    RaySet rs;
    rs.dim = dim;
    rs.name = "basis" + std::to_string(dim);
    rs.provenance = "standard basis; colorable";
    rs.expected = "colorable";
    for (int i = 0; i < dim; ++i) {
        ExactVector v = ExactVector::Constant(dim, exact_int(0));
        v(i) = exact_int(1);
        rs.rays.emplace_back(std::move(v));
    }
    return rs;
}

json exact_matrix_json(const Matrix& m) {
    // Entries of the magic-square operators are 0, +-1 or +-i exactly.
    json arr = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            double re = m(i, j).real(), im = m(i, j).imag();
            arr.push_back(json::array({std::llround(re), 0, std::llround(im), 0}));
        }
    return arr;
}

// Nine two-qubit Pauli products whose rows and columns commute; the row
// products are +I and the column products are +I, +I, -I, so no valuation
// can satisfy every joint-spectrum constraint.
void write_magic_square(const std::string& path) {
    const Matrix &I = bell::pauli(0), &X = bell::pauli(1), &Y = bell::pauli(2),
                 &Z = bell::pauli(3);
    std::vector<Matrix> ops = {
        kron(Z, I), kron(I, Z), kron(Z, Z),
        kron(I, X), kron(X, I), kron(X, X),
        kron(Z, X), kron(X, Z), kron(Y, Y),
    };
    std::vector<Observable> check;
    for (const auto& m : ops) check.emplace_back(Matrix(m));
    SearchCertificate cert = find_valuation_general(check);
    if (cert.outcome != SearchCertificate::Outcome::Exhausted)
        throw std::runtime_error("magic square unexpectedly admits a valuation");

    json j;
    j["dim"] = 4;
    j["scalars"] = "exact";
    j["name"] = "pauli-square";
    j["provenance"] =
        "3x3 square of two-qubit Pauli products; rows and columns commute, "
        "row products are +I, column products +I,+I,-I";
    j["expected"] = "exhausted";
    json arr = json::array();
    for (const auto& m : ops) arr.push_back(exact_matrix_json(m));
    j["operators"] = arr;
    io::save_file(path, j);
    std::cout << path << ": " << outcome_name(cert.outcome) << " (" << cert.nodes
              << " nodes)\n";
}

void write_commuting_diagonals(const std::string& path) {
    json j;
    j["dim"] = 3;
    j["scalars"] = "float";
    j["name"] = "commuting-diagonals";
    j["operators"] = json::array();
    auto diag = [](double a, double b, double c) {
        json m = json::array();
        double vals[9] = {a, 0, 0, 0, b, 0, 0, 0, c};
        for (double x : vals) m.push_back(json{{"re", x}, {"im", 0.0}});
        return m;
    };
    j["operators"].push_back(diag(1, 1, 0));
    j["operators"].push_back(diag(1, 0, 0));
    io::save_file(path, j);
}

void write_trivial_pure(const std::string& path) {
    Vector e0(2), e1(2);
    e0 << 1, 0;
    e1 << 0, 1;
    std::vector<Ray> states{Ray(e0), Ray(e1)};
    CandidateRepresentation c = trivial_pure_theory(2, states);
    if (!check_eq1(c).empty())
        throw std::runtime_error("trivial pure theory violates eq1");
    save_candidate(path, c);
    json j = io::load_file(path);
    j["name"] = "trivial-pure-dim2";
    j["provenance"] = "the quantum state itself as hidden variable";
    j["expected_violation"] = nullptr;
    io::save_file(path, j);
    std::cout << path << ": eq1 clean\n";
}

void write_fhalf(const std::string& path) {
    CandidateRepresentation c(2, {"l0", "l1"});
    Vector e0(2);
    e0 << 1, 0;
    Eigen::VectorXd mu(2), f(2);
    mu << 0.5, 0.5;
    f << 0.5, 0.5;
    c.add_state(DensityMatrix::pure(Ray(e0)), mu);
    c.add_effect(Ray(e0), f);
    auto v = check_eq1(c);
    if (v.size() != 1 || std::abs(v[0].gap - 0.5) > 1e-12)
        throw std::runtime_error("F=1/2 candidate should give an eq1 gap of 1/2");
    save_candidate(path, c);
    json j = io::load_file(path);
    j["name"] = "constant-half-F";
    j["provenance"] = "adversarial candidate: F(E) = 1/2 everywhere";
    j["expected_violation"] = {{"kind", "eq1"}, {"min_gap", 0.5}};
    io::save_file(path, j);
    std::cout << path << ": eq1 gap " << v[0].gap << "\n";
}

void write_bell_uniform(const std::string& path) {
    // The dim-2 value representation has a state-independent uniform hidden
    // measure; freezing any F table forces one Lambda-average on every pure
    // state, so |0> and |+> cannot both match their Born values for E = |0><0|.
    const int K = 21;
    std::vector<std::string> labels;
    for (int i = 0; i < K; ++i) labels.push_back("lam" + std::to_string(i));
    CandidateRepresentation c(2, labels);
    Eigen::VectorXd mu = Eigen::VectorXd::Constant(K, 1.0 / K);
    Vector e0(2), plus(2);
    e0 << 1, 0;
    plus << 1, 1;
    c.add_state(DensityMatrix::pure(Ray(e0)), mu);
    c.add_state(DensityMatrix::pure(Ray(plus)), mu);
    Observable proj0{Matrix(Ray(e0).projector())};
    bell::BlochState up(Eigen::Vector3d(0, 0, 1));
    Eigen::VectorXd f(K);
    for (int i = 0; i < K; ++i) {
        double lambda = -1.0 + 2.0 * i / (K - 1);
        f(i) = bell::assign_value(up, lambda, proj0);
    }
    c.add_effect(Ray(e0), f);
    double maxgap = 0;
    for (const auto& v : check_eq1(c)) maxgap = std::max(maxgap, v.gap);
    if (maxgap < 0.25)
        throw std::runtime_error("bell-uniform candidate should give a gap >= 1/4");
    save_candidate(path, c);
    json j = io::load_file(path);
    j["name"] = "bell-uniform-mu";
    j["provenance"] =
        "finite table of the dim-2 value representation with its "
        "state-independent uniform measure; the two listed states share one "
        "mu-row";
    j["expected_violation"] = {{"kind", "eq1"}, {"min_gap", 0.25}};
    io::save_file(path, j);
    std::cout << path << ": eq1 max gap " << maxgap << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    std::string dir = argc > 1 ? argv[1] : "data";
    std::filesystem::create_directories(dir);

    {
        RaySet rs = square_root_two_rays();
        std::cout << rs.name << ": " << rs.rays.size() << " rays\n";
        ContextSystem cs = build_contexts(rs);
        std::cout << "  pairs " << cs.pairs.size() << ", bases " << cs.bases.size()
                  << "\n";
        SearchCertificate cert = find_valuation(rs);
        std::cout << "  solver: " << outcome_name(cert.outcome) << " ("
                  << cert.nodes << " nodes, " << cert.elapsed_seconds << " s)\n";
        if (cert.outcome != SearchCertificate::Outcome::Exhausted)
            return 1;  // refuse to write an uncertified file
        json j = rayset_to_json(rs);
        j["context_counts"] = {{"pairs", cs.pairs.size()},
                               {"bases", cs.bases.size()}};
        io::save_file(dir + "/peres33.json", j);
    }
    {
        RaySet rs = standard_basis(3);
        SearchCertificate cert = find_valuation(rs);
        if (cert.outcome != SearchCertificate::Outcome::Found) return 1;
        save_rayset(dir + "/basis3.json", rs);
        std::cout << "basis3: " << outcome_name(cert.outcome) << "\n";
    }
    write_magic_square(dir + "/pauli_square.json");
    write_commuting_diagonals(dir + "/commuting_diagonals.json");
    write_trivial_pure(dir + "/candidate_trivial_pure.json");
    write_fhalf(dir + "/candidate_fhalf.json");
    write_bell_uniform(dir + "/candidate_bell_uniform.json");
    std::cout << "data written to " << dir << "\n";
    return 0;
}
