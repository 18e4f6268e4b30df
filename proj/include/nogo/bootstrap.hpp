#pragma once

#include "nogo/representation.hpp"
#include "nogo/valuation.hpp"

namespace nogo {

// Downward transfer of expectation representations: the restricted
// candidate answers for a dim-d object exactly what the parent answers for
// its zero-padded embedding (rows are copied verbatim, so every pairing
// instance Tr(rho E) = <F(E), mu> the parent satisfies stays satisfied).
//
// The scan form keeps every parent state/effect supported on the leading
// d-dimensional block; the request form demands specific objects and
// throws std::out_of_range when the parent tables do not cover one.
CandidateRepresentation restrict_expectation_rep(const CandidateRepresentation& c,
                                                 int d);
CandidateRepresentation restrict_expectation_rep(
    const CandidateRepresentation& c, int d,
    std::span<const DensityMatrix> want_states, std::span<const Ray> want_effects);

struct LiftError : std::runtime_error {
    LiftError(std::string msg, std::optional<Valuation> counterexample)
        : std::runtime_error(std::move(msg)),
          counterexample(std::move(counterexample)) {}
    std::optional<Valuation> counterexample;  // coloring of the failed candidate
};

struct LiftOptions {
    double tol = kDefaultTol;
    std::uint64_t node_budget = 100'000'000;
    int max_extra_copies = 16;
};

struct LiftResult {
    RaySet rayset;
    SearchCertificate certificate;  // Exhausted; attached as the verification
};

// Upward transfer of uncolorable ray sets. Candidate-and-verify: copies of
// the input are spread across coordinate windows and joined with the
// standard basis rays; the solver must certify the union uncolorable or
// the operation fails with the found coloring as a counterexample.
// Requires the input itself to be certified uncolorable first.
LiftResult lift_rayset(const RaySet& rs, int to_dim, const LiftOptions& opts = {});

struct TensorResult {
    std::vector<Observable> operators;  // P (x) I_k per ray, dim m*k
    SearchCertificate certificate;
};

// Rank-1 projections modulo identity: P (x) I_k for each ray of an
// uncolorable set; the general solver must certify the output admits no
// valuation (desk-scale verification is part of the contract).
TensorResult tensor_modulo_identity(const RaySet& rs, int k,
                                    const GeneralSolverOptions& opts = {});

}  // namespace nogo
