#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "nogo/observable.hpp"

namespace nogo {

// Finite set of rays in a fixed dimension, pairwise inequivalent up to
// phase. Theorem-grade data should use exact scalars so orthogonality is
// decided without tolerance.
struct RaySet {
    int dim = 0;
    std::string name;
    std::string provenance;
    std::vector<Ray> rays;
    std::optional<std::string> expected;  // "colorable" | "uncolorable"

    void validate(double tol = kDefaultTol) const;
};

// Orthogonality structure of a RaySet: all exactly-orthogonal index pairs
// and all complete contexts (orthogonal cliques of size dim).
struct ContextSystem {
    std::vector<std::pair<int, int>> pairs;  // i < j
    std::vector<std::vector<int>> bases;     // ascending indices, size == dim
};

ContextSystem build_contexts(const RaySet& rs, double tol = kDefaultTol);

RaySet load_rayset(const std::string& path);
void save_rayset(const std::string& path, const RaySet& rs);
nlohmann::json rayset_to_json(const RaySet& rs);

// Observable-set file: { dim, scalars, operators: [row-major matrix, ...] }.
std::vector<Observable> load_observables(const std::string& path);

}  // namespace nogo
