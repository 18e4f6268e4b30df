#pragma once

#include <cstdint>
#include <optional>
#include <span>

#include "nogo/rayset.hpp"
#include "nogo/spectra.hpp"

namespace nogo {

// Index-aligned assignment of a spectrum value to each observable (for
// rays: 0/1 values for the induced projections).
struct Valuation {
    std::vector<double> values;
};

struct SearchCertificate {
    enum class Outcome { Found, Exhausted, Budget };
    Outcome outcome = Outcome::Exhausted;
    std::optional<Valuation> valuation;  // present iff Found
    std::uint64_t nodes = 0;             // decisions taken
    std::uint64_t propagations = 0;      // forced assignments
    double elapsed_seconds = 0.0;
    std::uint64_t node_budget = 0;  // 0 = complete search, no cutoff
    double tol = kDefaultTol;
};

const char* outcome_name(SearchCertificate::Outcome o);

struct SolverOptions {
    double tol = kDefaultTol;
    std::uint64_t node_budget = 0;  // 0 = unlimited; ray search space is finite
};

// Backtracking with unit propagation over the 0/1 ray coloring problem:
// no orthogonal pair may be (1,1), every complete basis has exactly one 1.
// Exhausted means the full tree was explored.
SearchCertificate find_valuation(const RaySet& rs, const SolverOptions& opts = {});

struct VerifyResult {
    bool ok = false;
    std::string failure;  // first violated constraint when !ok
};

// Independent re-check of the valuation constraints; shares no state with
// the solver.
VerifyResult verify_valuation(const RaySet& rs, const Valuation& v,
                              double tol = kDefaultTol);

struct GeneralSolverOptions {
    double tol = kDefaultTol;
    std::uint64_t node_budget = 10'000'000;
};

// Valuations of arbitrary Hermitian families: each value in the spectrum,
// each maximal pairwise-commuting subset's tuple inside its joint spectrum.
// Budget overrun yields an explicit Budget outcome, distinct from Exhausted.
SearchCertificate find_valuation_general(std::span<const Observable> obs,
                                         const GeneralSolverOptions& opts = {});

VerifyResult verify_valuation(std::span<const Observable> obs, const Valuation& v,
                              double tol = kDefaultTol);

}  // namespace nogo
