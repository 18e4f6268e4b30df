#include "nogo/bootstrap.hpp"

#include <algorithm>
#include <numeric>

namespace nogo {

namespace {

bool supported_on_block(const Matrix& m, int d, double tol) {
    Matrix padded = Matrix::Zero(m.rows(), m.cols());
    padded.topLeftCorner(d, d) = m.topLeftCorner(d, d);
    return (m - padded).norm() <= tol;
}

}  // namespace

CandidateRepresentation restrict_expectation_rep(const CandidateRepresentation& c,
                                                 int d) {
    if (d < 1 || d > c.dim())
        throw std::invalid_argument("restrict_expectation_rep: need 1 <= d <= dim");
    CandidateRepresentation out(d, c.lambda());
    for (const auto& s : c.states()) {
        if (!supported_on_block(s.rho.matrix(), d, 1e-12)) continue;
        out.add_state(DensityMatrix(Matrix(s.rho.matrix().topLeftCorner(d, d))),
                      s.mu);
    }
    for (const auto& e : c.effects()) {
        if (e.ray.coords().tail(c.dim() - d).norm() > 1e-12) continue;
        out.add_effect(Ray(Vector(e.ray.coords().head(d))), e.f);
    }
    return out;
}

CandidateRepresentation restrict_expectation_rep(
    const CandidateRepresentation& c, int d,
    std::span<const DensityMatrix> want_states, std::span<const Ray> want_effects) {
    if (d < 1 || d > c.dim())
        throw std::invalid_argument("restrict_expectation_rep: need 1 <= d <= dim");
    CandidateRepresentation out(d, c.lambda());
    for (const auto& rho : want_states) {
        if (rho.dim() != d)
            throw std::invalid_argument("restrict_expectation_rep: state has wrong dim");
        Matrix target = embed(rho, c.dim()).matrix();
        const auto& S = c.states();
        auto it = std::find_if(S.begin(), S.end(), [&](const auto& s) {
            return (s.rho.matrix() - target).norm() <= 1e-12;
        });
        if (it == S.end())
            throw std::out_of_range(
                "restrict_expectation_rep: embedded state missing from parent tables");
        out.add_state(rho, it->mu);  // mu-row copied verbatim
    }
    for (const auto& e : want_effects) {
        if (e.dim() != d)
            throw std::invalid_argument("restrict_expectation_rep: effect has wrong dim");
        Ray target = embed(e, c.dim());
        const auto& E = c.effects();
        auto it = std::find_if(E.begin(), E.end(), [&](const auto& entry) {
            return entry.ray.equivalent_to(target);
        });
        if (it == E.end())
            throw std::out_of_range(
                "restrict_expectation_rep: embedded effect missing from parent tables");
        out.add_effect(e, it->f);
    }
    return out;
}

namespace {

// Copy of `rs` with ray coordinates placed at `positions` (ascending) in
// dimension `dim`.
void append_copy(std::vector<Ray>& out, const RaySet& rs,
                 const std::vector<int>& positions, int dim) {
    for (const auto& r : rs.rays) {
        if (r.has_exact()) {
            ExactVector v = ExactVector::Constant(dim, ExactScalar(0));
            for (int k = 0; k < rs.dim; ++k) v(positions[k]) = r.exact()(k);
            out.emplace_back(std::move(v));
        } else {
            Vector v = Vector::Zero(dim);
            for (int k = 0; k < rs.dim; ++k) v(positions[k]) = r.coords()(k);
            out.emplace_back(std::move(v));
        }
    }
}

void append_standard_basis(std::vector<Ray>& out, int dim, bool exact) {
    for (int i = 0; i < dim; ++i) {
        if (exact) {
            ExactVector v = ExactVector::Constant(dim, ExactScalar(0));
            v(i) = ExactScalar(1);
            out.emplace_back(std::move(v));
        } else {
            Vector v = Vector::Zero(dim);
            v(i) = 1.0;
            out.emplace_back(std::move(v));
        }
    }
}

std::vector<Ray> dedup(std::vector<Ray> rays, double tol) {
    std::vector<Ray> out;
    for (auto& r : rays) {
        bool dup = false;
        for (const auto& kept : out) dup = dup || kept.equivalent_to(r, tol);
        if (!dup) out.push_back(std::move(r));
    }
    return out;
}

// All size-d subsets of {0..dim-1}, ascending lexicographic.
std::vector<std::vector<int>> coordinate_subsets(int dim, int d) {
    std::vector<std::vector<int>> out;
    std::vector<int> idx(d);
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
        out.push_back(idx);
        int t = d - 1;
        while (t >= 0 && idx[t] == dim - d + t) --t;
        if (t < 0) break;
        ++idx[t];
        for (int u = t + 1; u < d; ++u) idx[u] = idx[u - 1] + 1;
    }
    return out;
}

LiftResult lift_one_step(const RaySet& rs, int to_dim, const LiftOptions& opts) {
    const int d = rs.dim;
    bool exact = std::all_of(rs.rays.begin(), rs.rays.end(),
                             [](const Ray& r) { return r.has_exact(); });

    // Sliding windows {s..s+d-1}: the two extreme windows have disjoint
    // coordinate complements whenever to_dim <= 2d, which pins at least two
    // orthogonal standard directions to the value 1.
    std::vector<std::vector<int>> used;
    std::vector<Ray> rays;
    for (int s = 0; s + d <= to_dim; ++s) {
        std::vector<int> w(d);
        std::iota(w.begin(), w.end(), s);
        append_copy(rays, rs, w, to_dim);
        used.push_back(std::move(w));
    }
    append_standard_basis(rays, to_dim, exact);

    auto subsets = coordinate_subsets(to_dim, d);
    size_t next_subset = 0;
    int extras = 0;
    std::string recipe = "coordinate windows + standard basis";
    while (true) {
        RaySet candidate;
        candidate.dim = to_dim;
        candidate.name = rs.name.empty() ? "lifted" : rs.name + "-lift" +
                                                          std::to_string(to_dim);
        candidate.rays = dedup(rays, opts.tol);
        candidate.provenance = "lifted from '" + rs.name + "' (dim " +
                               std::to_string(d) + ") via " + recipe +
                               "; solver-certified";
        SolverOptions sopts;
        sopts.tol = opts.tol;
        sopts.node_budget = opts.node_budget;
        SearchCertificate cert = find_valuation(candidate, sopts);
        if (cert.outcome == SearchCertificate::Outcome::Exhausted) {
            candidate.expected = "uncolorable";
            return {std::move(candidate), std::move(cert)};
        }
        if (cert.outcome == SearchCertificate::Outcome::Budget)
            throw LiftError("lift_rayset: verification budget exhausted after " +
                                std::to_string(cert.nodes) + " nodes",
                            std::nullopt);
        // Solver found a coloring: append another rotated copy and retry.
        while (next_subset < subsets.size() &&
               std::find(used.begin(), used.end(), subsets[next_subset]) != used.end())
            ++next_subset;
        if (next_subset >= subsets.size() || ++extras > opts.max_extra_copies)
            throw LiftError(
                "lift_rayset: candidate set remained colorable after all copies",
                std::move(cert.valuation));
        append_copy(rays, rs, subsets[next_subset], to_dim);
        used.push_back(subsets[next_subset]);
        recipe = "coordinate windows + standard basis + " + std::to_string(extras) +
                 " extra coordinate-subset copies";
        ++next_subset;
    }
}

}  // namespace

LiftResult lift_rayset(const RaySet& rs, int to_dim, const LiftOptions& opts) {
    if (to_dim <= rs.dim)
        throw std::invalid_argument("lift_rayset: target dimension must exceed input");
    rs.validate(opts.tol);
    SolverOptions pre;
    pre.tol = opts.tol;
    pre.node_budget = opts.node_budget;
    SearchCertificate base = find_valuation(rs, pre);
    if (base.outcome == SearchCertificate::Outcome::Found)
        throw std::invalid_argument(
            "lift_rayset: input admits a valuation; only certified uncolorable sets lift");
    if (base.outcome == SearchCertificate::Outcome::Budget)
        throw LiftError("lift_rayset: could not certify the input within budget",
                        std::nullopt);

    // Each step at most doubles the dimension so the disjoint-complement
    // argument applies; chain steps for larger jumps.
    RaySet cur = rs;
    LiftResult res{cur, base};
    while (cur.dim < to_dim) {
        int next = std::min(2 * cur.dim, to_dim);
        res = lift_one_step(cur, next, opts);
        cur = res.rayset;
    }
    return res;
}

TensorResult tensor_modulo_identity(const RaySet& rs, int k,
                                    const GeneralSolverOptions& opts) {
    if (k < 1) throw std::invalid_argument("tensor_modulo_identity: k must be >= 1");
    rs.validate(opts.tol);
    SolverOptions pre;
    pre.tol = opts.tol;
    SearchCertificate base = find_valuation(rs, pre);
    if (base.outcome != SearchCertificate::Outcome::Exhausted)
        throw std::invalid_argument(
            "tensor_modulo_identity: input is not certified uncolorable");

    Matrix id = Matrix::Identity(k, k);
    std::vector<Observable> ops;
    ops.reserve(rs.rays.size());
    for (const auto& r : rs.rays) ops.emplace_back(kron(r.projector(), id));

    SearchCertificate cert = find_valuation_general(ops, opts);
    if (cert.outcome == SearchCertificate::Outcome::Found)
        throw std::runtime_error(
            "tensor_modulo_identity: verification failed, output admits a valuation");
    if (cert.outcome == SearchCertificate::Outcome::Budget)
        throw std::runtime_error(
            "tensor_modulo_identity: verification budget exhausted");
    return {std::move(ops), std::move(cert)};
}

}  // namespace nogo
