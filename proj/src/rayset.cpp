#include "nogo/rayset.hpp"

#include <algorithm>

#include "nogo/json_io.hpp"

namespace nogo {

void RaySet::validate(double tol) const {
    if (dim < 1) throw std::invalid_argument("RaySet: dim must be positive");
    for (size_t i = 0; i < rays.size(); ++i)
        if (rays[i].dim() != dim)
            throw std::invalid_argument("RaySet: ray " + std::to_string(i) +
                                        " has wrong dimension");
    for (size_t i = 0; i < rays.size(); ++i)
        for (size_t j = i + 1; j < rays.size(); ++j)
            if (rays[i].equivalent_to(rays[j], tol))
                throw std::invalid_argument("RaySet: rays " + std::to_string(i) +
                                            " and " + std::to_string(j) +
                                            " are equivalent up to phase");
}

namespace {

void extend_cliques(const std::vector<std::vector<int>>& nbr, int dim,
                    std::vector<int>& clique, const std::vector<int>& candidates,
                    std::vector<std::vector<int>>& out) {
    if (static_cast<int>(clique.size()) == dim) {
        out.push_back(clique);
        return;
    }
    // Candidates are > clique.back() and adjacent to every clique member.
    for (size_t ci = 0; ci < candidates.size(); ++ci) {
        int v = candidates[ci];
        if (static_cast<int>(clique.size()) + 1 +
                static_cast<int>(candidates.size() - ci - 1) < dim)
            break;  // not enough vertices left
        std::vector<int> next;
        const auto& nv = nbr[v];
        for (size_t cj = ci + 1; cj < candidates.size(); ++cj)
            if (std::binary_search(nv.begin(), nv.end(), candidates[cj]))
                next.push_back(candidates[cj]);
        clique.push_back(v);
        extend_cliques(nbr, dim, clique, next, out);
        clique.pop_back();
    }
}

}  // namespace

ContextSystem build_contexts(const RaySet& rs, double tol) {
    const int n = static_cast<int>(rs.rays.size());
    ContextSystem cs;
    std::vector<std::vector<int>> nbr(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (rs.rays[i].orthogonal_to(rs.rays[j], tol)) {
                cs.pairs.emplace_back(i, j);
                nbr[i].push_back(j);
                nbr[j].push_back(i);
            }
    std::vector<int> clique;
    std::vector<int> all(n);
    for (int i = 0; i < n; ++i) all[i] = i;
    extend_cliques(nbr, rs.dim, clique, all, cs.bases);
    return cs;
}

RaySet load_rayset(const std::string& path) {
    io::json j = io::load_file(path);
    RaySet rs;
    if (!j.contains("dim") || !j["dim"].is_number_integer())
        throw InputError(path + ": missing integer field \"dim\"");
    rs.dim = j["dim"].get<int>();
    rs.name = j.value("name", "");
    rs.provenance = j.value("provenance", "");
    if (j.contains("expected") && !j["expected"].is_null()) {
        std::string e = j["expected"].get<std::string>();
        if (e != "colorable" && e != "uncolorable")
            throw InputError(path + ": \"expected\" must be colorable|uncolorable|null");
        rs.expected = e;
    }
    if (!j.contains("rays") || !j["rays"].is_array())
        throw InputError(path + ": missing array field \"rays\"");
    bool exact = io::exact_mode(j);
    for (const auto& rj : j["rays"]) {
        Ray r = io::parse_ray(rj, exact);
        if (r.dim() != rs.dim)
            throw InputError(path + ": ray of dimension " + std::to_string(r.dim()) +
                             " in a dim-" + std::to_string(rs.dim) + " set");
        rs.rays.push_back(std::move(r));
    }
    try {
        rs.validate();
    } catch (const std::invalid_argument& e) {
        throw InputError(path + ": " + e.what());
    }
    return rs;
}

nlohmann::json rayset_to_json(const RaySet& rs) {
    io::json j;
    j["dim"] = rs.dim;
    bool exact = !rs.rays.empty() &&
                 std::all_of(rs.rays.begin(), rs.rays.end(),
                             [](const Ray& r) { return r.has_exact(); });
    j["scalars"] = exact ? "exact" : "float";
    j["name"] = rs.name;
    if (!rs.provenance.empty()) j["provenance"] = rs.provenance;
    j["expected"] = rs.expected ? io::json(*rs.expected) : io::json(nullptr);
    io::json arr = io::json::array();
    for (const auto& r : rs.rays) arr.push_back(io::ray_to_json(r));
    j["rays"] = arr;
    return j;
}

void save_rayset(const std::string& path, const RaySet& rs) {
    io::save_file(path, rayset_to_json(rs));
}

std::vector<Observable> load_observables(const std::string& path) {
    io::json j = io::load_file(path);
    if (!j.contains("dim") || !j["dim"].is_number_integer())
        throw InputError(path + ": missing integer field \"dim\"");
    int dim = j["dim"].get<int>();
    if (!j.contains("operators") || !j["operators"].is_array())
        throw InputError(path + ": missing array field \"operators\"");
    bool exact = io::exact_mode(j);
    std::vector<Observable> ops;
    for (const auto& oj : j["operators"]) {
        try {
            if (exact)
                ops.emplace_back(io::parse_exact_matrix(oj, dim));
            else
                ops.emplace_back(io::parse_matrix(oj, dim));
        } catch (const std::invalid_argument& e) {
            throw InputError(path + ": operator " + std::to_string(ops.size()) +
                             ": " + e.what());
        }
    }
    return ops;
}

}  // namespace nogo
