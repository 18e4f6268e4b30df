#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nogo/observable.hpp"

namespace nogo {

// Finite candidate expectation model (Lambda, mu, F): a labeled hidden
// point set, a mu-row per listed density matrix and an F-row per listed
// rank-1 projection. Integrals over Lambda become weighted sums; arbitrary
// measurable spaces are out of scope for a testing tool.
class CandidateRepresentation {
public:
    struct StateEntry {
        DensityMatrix rho;
        Eigen::VectorXd mu;  // probability row over Lambda
    };
    struct EffectEntry {
        Ray ray;             // carrier of E = vv*/<v,v>
        Eigen::VectorXd f;   // F(E) over Lambda, entries in [0,1]
    };

    CandidateRepresentation(int dim, std::vector<std::string> lambda_labels)
        : dim_(dim), lambda_(std::move(lambda_labels)) {
        if (dim < 1) throw std::invalid_argument("CandidateRepresentation: dim < 1");
    }

    int dim() const { return dim_; }
    int lambda_size() const { return static_cast<int>(lambda_.size()); }
    const std::vector<std::string>& lambda() const { return lambda_; }
    const std::vector<StateEntry>& states() const { return states_; }
    const std::vector<EffectEntry>& effects() const { return effects_; }

    int add_state(DensityMatrix rho, Eigen::VectorXd mu, double tol = kDefaultTol);
    int add_effect(Ray e, Eigen::VectorXd f, double tol = kDefaultTol);

    // Appends a hidden point. Existing mu-rows are padded with 0 (so they
    // stay normalized); each existing effect's F-row gains f_new[effect].
    int add_lambda_point(std::string label, std::span<const double> f_new);

    void validate(double tol = kDefaultTol) const;

private:
    int dim_;
    std::vector<std::string> lambda_;
    std::vector<StateEntry> states_;
    std::vector<EffectEntry> effects_;
};

// Machine-readable certificate of one violated constraint: the constraint
// kind, the two evaluated sides and their gap. Re-checkable from its own
// fields plus the candidate (or from the witness rays alone).
struct Violation {
    enum class Kind { Eq1, Convexity, MixtureConsistency };
    Kind kind;
    std::string constraint;         // human-readable statement
    std::vector<int> states;        // candidate state indices involved
    std::vector<int> effects;       // candidate effect indices involved
    std::vector<double> weights;    // mixture weights involved
    std::vector<double> lhs, rhs;
    double gap = 0.0;
    double tol = 0.0;
    std::vector<Ray> witness_rays;  // self-contained certificates carry rays
};

const char* kind_name(Violation::Kind k);

// Born probability Tr(rho_psi E_e) for the rays' induced projections.
double born(const Ray& psi, const Ray& e);

// Pairing residuals: compares Tr(rho E) with sum_L F(E) mu(rho) for every
// listed pair; one Violation per pair with gap > tol.
std::vector<Violation> check_eq1(const CandidateRepresentation& c,
                                 double tol = kDefaultTol);

struct MixTriple {
    double p;
    int i, j, k;  // claims rho_k == p rho_i + (1-p) rho_j
};

// Each triple's matrix identity is verified first; an unverifiable triple
// is rejected as ill-posed (std::invalid_argument).
std::vector<Violation> check_convex(const CandidateRepresentation& c,
                                    std::span<const MixTriple> triples,
                                    double tol = kDefaultTol);

// Convex mixtures that hold among the listed states themselves.
std::vector<MixTriple> discover_mixtures(const CandidateRepresentation& c,
                                         double tol = kDefaultTol);

// Distinct decompositions of one mixed state whose combined mu-rows differ:
// duplicate listed states, solved two-term decompositions, and uniform
// mixtures of listed orthonormal bases (I/dim).
std::vector<Violation> check_mixture_consistency(const CandidateRepresentation& c,
                                                 double tol = kDefaultTol);

// Extends a candidate's tables on demand so probe objects can be evaluated.
struct ExtensionHook {
    std::function<int(CandidateRepresentation&, const DensityMatrix&)> extend_state;
    std::function<int(CandidateRepresentation&, const Ray&)> extend_effect;
};

struct HookRequired : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct FalsifyOptions {
    std::uint64_t budget = 32;  // probe count before giving up
    std::uint64_t seed = 1;
    double tol = kDefaultTol;
};

struct FalsifyReport {
    std::optional<Violation> violation;  // largest gap found
    std::uint64_t probes_used = 0;
    std::string summary;
};

// Runs the three checks on the listed tables; if they pass, probes the
// candidate with random pure states, rank-1 projections and decompositions
// of I/dim through the extension hook. A finite table can dodge finitely
// many probes, so exhausting the budget is an explicit outcome, not a pass.
FalsifyReport falsify(CandidateRepresentation c, const FalsifyOptions& opts = {},
                      const ExtensionHook* hook = nullptr);

// The trivial theory: the quantum state itself as hidden variable. Lambda
// has one point per given pure state, mu is the point mass there and
// F(E)(lambda_psi) = <psi|E|psi>. Effects are seeded with the projections
// onto the given states.
CandidateRepresentation trivial_pure_theory(int dim, std::span<const Ray> pure_states);

// Extension hook applying the same rule to new objects: new pure states
// become new hidden points; mixed states are eigendecomposed and mapped to
// the weighted point masses of their eigenvectors.
ExtensionHook make_born_hook(std::vector<Ray> lambda_rays);

// Recomputes a violation's gap from its recorded objects; tests assert the
// result is within 1e-12 of the recorded gap.
double recheck(const CandidateRepresentation& c, const Violation& v);

CandidateRepresentation load_candidate(const std::string& path);
void save_candidate(const std::string& path, const CandidateRepresentation& c);

}  // namespace nogo
