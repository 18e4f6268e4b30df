// Test-only oracle: an independent route to ray-set colorability. Builds
// the pair/basis constraints straight from the ray coordinates (its own
// orthogonality scan and clique enumeration) and decides satisfiability
// with a small DPLL solver. Shares no code with the production search.
#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

#include "nogo/rayset.hpp"

namespace sat_oracle {

struct Cnf {
    int nvars = 0;
    // Literal encoding: +v means variable v true, -v false (v is 1-based).
    std::vector<std::vector<int>> clauses;
};

inline bool orthogonal(const nogo::Ray& a, const nogo::Ray& b) {
    if (a.has_exact() && b.has_exact()) {
        nogo::ExactScalar ip(0);
        for (Eigen::Index i = 0; i < a.dim(); ++i)
            ip += conj(a.exact()(i)) * b.exact()(i);
        return ip.is_zero();
    }
    return std::abs(a.coords().dot(b.coords())) <=
           1e-9 * a.coords().norm() * b.coords().norm();
}

// x_i = "ray i is assigned 1". Orthogonal pairs exclude (1,1); every
// complete orthogonal basis needs at least one 1 (at-most-one follows from
// the pair clauses).
inline Cnf encode(const nogo::RaySet& rs) {
    const int n = static_cast<int>(rs.rays.size());
    Cnf cnf;
    cnf.nvars = n;
    std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (orthogonal(rs.rays[i], rs.rays[j])) {
                adj[i][j] = adj[j][i] = 1;
                cnf.clauses.push_back({-(i + 1), -(j + 1)});
            }
    // Complete bases: orthogonal cliques of size dim.
    std::vector<int> clique;
    auto grow = [&](auto&& self, int from) -> void {
        if (static_cast<int>(clique.size()) == rs.dim) {
            std::vector<int> cl;
            for (int v : clique) cl.push_back(v + 1);
            cnf.clauses.push_back(std::move(cl));
            return;
        }
        for (int v = from; v < n; ++v) {
            bool ok = true;
            for (int u : clique) ok = ok && adj[u][v];
            if (!ok) continue;
            clique.push_back(v);
            self(self, v + 1);
            clique.pop_back();
        }
    };
    grow(grow, 0);
    return cnf;
}

// Plain DPLL with unit propagation; model filled with 0/1 when SAT.
inline bool dpll(const Cnf& cnf, std::vector<std::int8_t>& model) {
    std::vector<std::int8_t> assign(cnf.nvars + 1, -1);

    auto value = [&](int lit) -> int {
        std::int8_t a = assign[std::abs(lit)];
        if (a < 0) return -1;
        return (lit > 0) == (a == 1) ? 1 : 0;
    };

    auto search = [&](auto&& self) -> bool {
        // Unit propagation to fixpoint.
        for (bool changed = true; changed;) {
            changed = false;
            for (const auto& cl : cnf.clauses) {
                int unassigned = 0, last = 0;
                bool satisfied = false;
                for (int lit : cl) {
                    int v = value(lit);
                    if (v == 1) {
                        satisfied = true;
                        break;
                    }
                    if (v == -1) {
                        ++unassigned;
                        last = lit;
                    }
                }
                if (satisfied) continue;
                if (unassigned == 0) return false;  // conflict
                if (unassigned == 1) {
                    assign[std::abs(last)] = last > 0 ? 1 : 0;
                    changed = true;
                }
            }
        }
        int var = 0;
        for (int v = 1; v <= cnf.nvars; ++v)
            if (assign[v] < 0) {
                var = v;
                break;
            }
        if (var == 0) return true;  // all assigned, no conflict
        std::vector<std::int8_t> saved = assign;
        for (std::int8_t val : {std::int8_t{1}, std::int8_t{0}}) {
            assign[var] = val;
            if (self(self)) return true;
            assign = saved;
        }
        return false;
    };

    bool sat = search(search);
    if (sat) {
        model.assign(cnf.nvars, 0);
        for (int v = 1; v <= cnf.nvars; ++v) model[v - 1] = assign[v] == 1 ? 1 : 0;
    }
    return sat;
}

// true = colorable (a valuation exists), false = uncolorable.
inline bool colorable(const nogo::RaySet& rs,
                      std::vector<std::int8_t>* model_out = nullptr) {
    Cnf cnf = encode(rs);
    std::vector<std::int8_t> model;
    bool sat = dpll(cnf, model);
    if (sat && model_out) *model_out = model;
    return sat;
}

}  // namespace sat_oracle
