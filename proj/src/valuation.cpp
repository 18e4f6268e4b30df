#include "nogo/valuation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

namespace nogo {

const char* outcome_name(SearchCertificate::Outcome o) {
    switch (o) {
        case SearchCertificate::Outcome::Found: return "found";
        case SearchCertificate::Outcome::Exhausted: return "exhausted";
        case SearchCertificate::Outcome::Budget: return "budget";
    }
    return "?";
}

namespace {

// 0/1 coloring search over the orthogonality structure. Propagation rules:
// a 1 forces 0 on all orthogonal neighbors; a basis with dim-1 zeros and no
// 1 forces its last member to 1; an all-zero basis is a conflict.
class RaySolver {
public:
    RaySolver(const RaySet& rs, const ContextSystem& cs, const SolverOptions& opts)
        : n_(static_cast<int>(rs.rays.size())), dim_(rs.dim), opts_(opts) {
        nbr_.resize(n_);
        for (auto [i, j] : cs.pairs) {
            nbr_[i].push_back(j);
            nbr_[j].push_back(i);
        }
        bases_ = cs.bases;
        in_bases_.resize(n_);
        for (int b = 0; b < static_cast<int>(bases_.size()); ++b)
            for (int r : bases_[b]) in_bases_[r].push_back(b);
        ones_.assign(bases_.size(), 0);
        zeros_.assign(bases_.size(), 0);
        state_.assign(n_, -1);
        order_.resize(n_);
        std::iota(order_.begin(), order_.end(), 0);
        std::stable_sort(order_.begin(), order_.end(), [&](int a, int b) {
            return nbr_[a].size() > nbr_[b].size();
        });
    }

    SearchCertificate run() {
        auto t0 = std::chrono::steady_clock::now();
        cert_.node_budget = opts_.node_budget;
        cert_.tol = opts_.tol;
        int res = dfs(0);
        if (res == kFound) {
            cert_.outcome = SearchCertificate::Outcome::Found;
            Valuation v;
            v.values.resize(n_);
            for (int i = 0; i < n_; ++i) v.values[i] = state_[i];
            cert_.valuation = std::move(v);
        } else if (res == kBudget) {
            cert_.outcome = SearchCertificate::Outcome::Budget;
        } else {
            cert_.outcome = SearchCertificate::Outcome::Exhausted;
        }
        cert_.elapsed_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                .count();
        return cert_;
    }

private:
    static constexpr int kFound = 1, kExhausted = 0, kBudget = -1;

    // Counters are updated here so that undo() can always reverse exactly
    // what was applied, even when a conflict aborts propagation midway.
    bool assign(int r, int v) {
        state_[r] = static_cast<std::int8_t>(v);
        trail_.push_back(r);
        bool ok = true;
        if (v == 1) {
            for (int b : in_bases_[r]) ok = ok && ++ones_[b] <= 1;
        } else {
            for (int b : in_bases_[r]) ok = ok && ++zeros_[b] < dim_;
        }
        return ok;
    }

    // Process trail entries from `from`; returns false on conflict.
    bool propagate(size_t from) {
        for (size_t q = from; q < trail_.size(); ++q) {
            int r = trail_[q];
            if (state_[r] == 1) {
                for (int nb : nbr_[r]) {
                    if (state_[nb] == 1) return false;
                    if (state_[nb] < 0) {
                        ++cert_.propagations;
                        if (!assign(nb, 0)) return false;
                    }
                }
            } else {
                for (int b : in_bases_[r]) {
                    if (zeros_[b] == dim_ - 1 && ones_[b] == 0) {
                        for (int m : bases_[b])
                            if (state_[m] < 0) {
                                ++cert_.propagations;
                                if (!assign(m, 1)) return false;
                                break;
                            }
                    }
                }
            }
        }
        return true;
    }

    void undo(size_t mark) {
        while (trail_.size() > mark) {
            int r = trail_.back();
            trail_.pop_back();
            if (state_[r] == 1)
                for (int b : in_bases_[r]) --ones_[b];
            else
                for (int b : in_bases_[r]) --zeros_[b];
            state_[r] = -1;
        }
    }

    int dfs(int pos) {
        while (pos < n_ && state_[order_[pos]] >= 0) ++pos;
        if (pos == n_) return kFound;
        int r = order_[pos];
        for (int v : {1, 0}) {
            if (opts_.node_budget && cert_.nodes >= opts_.node_budget)
                return kBudget;
            ++cert_.nodes;
            size_t mark = trail_.size();
            if (assign(r, v) && propagate(mark)) {
                int res = dfs(pos + 1);
                if (res != kExhausted) return res;
            }
            undo(mark);
        }
        return kExhausted;
    }

    int n_;
    int dim_;
    SolverOptions opts_;
    std::vector<std::vector<int>> nbr_;
    std::vector<std::vector<int>> bases_;
    std::vector<std::vector<int>> in_bases_;
    std::vector<int> ones_, zeros_;
    std::vector<std::int8_t> state_;
    std::vector<int> trail_;
    std::vector<int> order_;
    SearchCertificate cert_;
};

}  // namespace

SearchCertificate find_valuation(const RaySet& rs, const SolverOptions& opts) {
    if (rs.dim < 2) throw std::invalid_argument("find_valuation: dim must be >= 2");
    rs.validate(opts.tol);
    ContextSystem cs = build_contexts(rs, opts.tol);
    return RaySolver(rs, cs, opts).run();
}

namespace {

// Clique enumeration written independently of build_contexts.
bool every_basis_has_one_one(const std::vector<std::vector<int>>& nbr,
                             const std::vector<int>& bits, int dim,
                             std::vector<int>& clique, int from, int n,
                             std::string* failure) {
    if (static_cast<int>(clique.size()) == dim) {
        int ones = 0;
        for (int r : clique) ones += bits[r];
        if (ones != 1) {
            *failure = "complete basis {";
            for (size_t k = 0; k < clique.size(); ++k)
                *failure += (k ? "," : "") + std::to_string(clique[k]);
            *failure += "} carries " + std::to_string(ones) + " ones";
            return false;
        }
        return true;
    }
    for (int v = from; v < n; ++v) {
        bool adj = true;
        for (int u : clique)
            adj = adj && std::binary_search(nbr[u].begin(), nbr[u].end(), v);
        if (!adj) continue;
        clique.push_back(v);
        if (!every_basis_has_one_one(nbr, bits, dim, clique, v + 1, n, failure))
            return false;
        clique.pop_back();
    }
    return true;
}

}  // namespace

VerifyResult verify_valuation(const RaySet& rs, const Valuation& v, double tol) {
    const int n = static_cast<int>(rs.rays.size());
    if (static_cast<int>(v.values.size()) != n)
        throw std::invalid_argument("verify_valuation: assignment does not cover all rays");

    std::vector<int> bits(n);
    for (int i = 0; i < n; ++i) {
        double x = v.values[i];
        // Spectrum membership: a rank-1 projection in dim >= 2 has spectrum {0,1}.
        if (std::abs(x) <= tol)
            bits[i] = 0;
        else if (std::abs(x - 1.0) <= tol)
            bits[i] = 1;
        else
            return {false, "value of ray " + std::to_string(i) +
                               " is outside the spectrum {0,1}"};
    }

    std::vector<std::vector<int>> nbr(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (rs.rays[i].orthogonal_to(rs.rays[j], tol)) {
                if (bits[i] == 1 && bits[j] == 1)
                    return {false, "orthogonal pair (" + std::to_string(i) + "," +
                                       std::to_string(j) + ") assigned (1,1)"};
                nbr[i].push_back(j);
                nbr[j].push_back(i);
            }

    std::string failure;
    std::vector<int> clique;
    if (!every_basis_has_one_one(nbr, bits, rs.dim, clique, 0, n, &failure))
        return {false, failure};
    return {true, ""};
}

namespace {

// Bron-Kerbosch with pivoting; emits maximal cliques (including singletons).
void bron_kerbosch(const std::vector<std::vector<char>>& adj, std::vector<int>& R,
                   std::vector<int> P, std::vector<int> X,
                   std::vector<std::vector<int>>& out) {
    if (P.empty() && X.empty()) {
        out.push_back(R);
        return;
    }
    int pivot = -1;
    size_t best = 0;
    for (int u : P) {
        size_t c = 0;
        for (int v : P) c += adj[u][v];
        if (pivot < 0 || c > best) pivot = u, best = c;
    }
    for (int u : X) {
        size_t c = 0;
        for (int v : P) c += adj[u][v];
        if (c > best) pivot = u, best = c;
    }
    std::vector<int> ext;
    for (int v : P)
        if (pivot < 0 || !adj[pivot][v]) ext.push_back(v);
    for (int v : ext) {
        std::vector<int> P2, X2;
        for (int w : P)
            if (adj[v][w]) P2.push_back(w);
        for (int w : X)
            if (adj[v][w]) X2.push_back(w);
        R.push_back(v);
        bron_kerbosch(adj, R, std::move(P2), std::move(X2), out);
        R.pop_back();
        P.erase(std::find(P.begin(), P.end(), v));
        X.push_back(v);
    }
}

struct CliqueConstraint {
    std::vector<int> members;              // observable indices
    std::vector<Eigen::VectorXd> points;   // joint spectrum
};

struct GeneralProblem {
    std::vector<std::vector<double>> candidates;  // per-obs eigenvalues, deduped
    std::vector<CliqueConstraint> cliques;
    std::vector<std::vector<int>> cliques_of;  // obs -> clique indices
    double match_tol;
};

GeneralProblem build_general(std::span<const Observable> obs, double tol) {
    const int n = static_cast<int>(obs.size());
    GeneralProblem gp;
    double max_abs = 0.0;
    gp.candidates.resize(n);
    for (int i = 0; i < n; ++i) {
        std::vector<double> sp = spectrum(obs[i]);
        max_abs = std::max(max_abs, std::max(std::abs(sp.front()), std::abs(sp.back())));
        for (double x : sp)
            if (gp.candidates[i].empty() ||
                x - gp.candidates[i].back() > tol * (1.0 + std::abs(x)))
                gp.candidates[i].push_back(x);
    }
    gp.match_tol = std::max(tol, 1e-9) * (1.0 + max_abs) * 4.0;

    std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (commutes(obs[i], obs[j], tol)) adj[i][j] = adj[j][i] = 1;

    std::vector<int> R, P(n), X;
    std::iota(P.begin(), P.end(), 0);
    std::vector<std::vector<int>> maximal;
    bron_kerbosch(adj, R, std::move(P), std::move(X), maximal);

    gp.cliques_of.resize(n);
    for (auto& c : maximal) {
        if (c.size() < 2) continue;  // singleton: spectrum membership suffices
        std::sort(c.begin(), c.end());
        std::vector<Observable> fam;
        for (int i : c) fam.push_back(obs[i]);
        JointSpectrumSet js = joint_spectrum(fam, tol);
        int ci = static_cast<int>(gp.cliques.size());
        gp.cliques.push_back({c, js.points});
        for (int i : c) gp.cliques_of[i].push_back(ci);
    }
    return gp;
}

class GeneralSolver {
public:
    GeneralSolver(GeneralProblem gp, const GeneralSolverOptions& opts)
        : gp_(std::move(gp)), opts_(opts) {
        n_ = static_cast<int>(gp_.candidates.size());
        assigned_.assign(n_, std::numeric_limits<double>::quiet_NaN());
        order_.resize(n_);
        std::iota(order_.begin(), order_.end(), 0);
        std::stable_sort(order_.begin(), order_.end(), [&](int a, int b) {
            return gp_.cliques_of[a].size() > gp_.cliques_of[b].size();
        });
    }

    SearchCertificate run() {
        auto t0 = std::chrono::steady_clock::now();
        cert_.node_budget = opts_.node_budget;
        cert_.tol = opts_.tol;
        int res = dfs(0);
        if (res == kFound) {
            cert_.outcome = SearchCertificate::Outcome::Found;
            cert_.valuation = Valuation{assigned_};
        } else if (res == kBudget) {
            cert_.outcome = SearchCertificate::Outcome::Budget;
        } else {
            cert_.outcome = SearchCertificate::Outcome::Exhausted;
        }
        cert_.elapsed_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                .count();
        return cert_;
    }

private:
    static constexpr int kFound = 1, kExhausted = 0, kBudget = -1;

    bool is_set(int i) const { return !std::isnan(assigned_[i]); }

    bool point_matches(const CliqueConstraint& cl, const Eigen::VectorXd& p) const {
        for (size_t k = 0; k < cl.members.size(); ++k) {
            int m = cl.members[k];
            if (is_set(m) && std::abs(p(k) - assigned_[m]) > gp_.match_tol)
                return false;
        }
        return true;
    }

    // A clique stays feasible while some joint point matches all assigned
    // members; if all surviving points agree on an unassigned member, that
    // member is forced.
    bool consistent(std::vector<std::pair<int, double>>& forced) {
        for (const auto& cl : gp_.cliques) {
            std::vector<const Eigen::VectorXd*> surviving;
            for (const auto& p : cl.points)
                if (point_matches(cl, p)) surviving.push_back(&p);
            if (surviving.empty()) return false;
            for (size_t k = 0; k < cl.members.size(); ++k) {
                int m = cl.members[k];
                if (is_set(m)) continue;
                double lo = (*surviving[0])(k), hi = lo;
                for (const auto* p : surviving) {
                    lo = std::min(lo, (*p)(k));
                    hi = std::max(hi, (*p)(k));
                }
                if (hi - lo <= gp_.match_tol) forced.emplace_back(m, lo);
            }
        }
        return true;
    }

    int dfs(int pos) {
        while (pos < n_ && is_set(order_[pos])) ++pos;
        if (pos == n_) return kFound;
        int o = order_[pos];
        for (double val : gp_.candidates[o]) {
            if (opts_.node_budget && cert_.nodes >= opts_.node_budget) return kBudget;
            ++cert_.nodes;
            std::vector<std::pair<int, double>> trail{{o, val}};
            assigned_[o] = val;
            bool ok = true;
            // Fixpoint of singleton propagation.
            for (bool more = true; more && ok;) {
                more = false;
                std::vector<std::pair<int, double>> forced;
                ok = consistent(forced);
                for (auto [m, fv] : forced)
                    if (ok && !is_set(m)) {
                        assigned_[m] = snap(m, fv);
                        trail.emplace_back(m, assigned_[m]);
                        ++cert_.propagations;
                        more = true;
                    }
            }
            if (ok) {
                int res = dfs(pos + 1);
                if (res != kExhausted) return res;
            }
            for (auto [m, _] : trail)
                assigned_[m] = std::numeric_limits<double>::quiet_NaN();
        }
        return kExhausted;
    }

    // Joint-spectrum coordinates are noisy copies of eigenvalues; snap to
    // the observable's candidate list.
    double snap(int o, double v) const {
        double best = gp_.candidates[o].front();
        for (double c : gp_.candidates[o])
            if (std::abs(c - v) < std::abs(best - v)) best = c;
        return best;
    }

    GeneralProblem gp_;
    GeneralSolverOptions opts_;
    int n_ = 0;
    std::vector<double> assigned_;
    std::vector<int> order_;
    SearchCertificate cert_;
};

}  // namespace

SearchCertificate find_valuation_general(std::span<const Observable> obs,
                                         const GeneralSolverOptions& opts) {
    if (obs.empty())
        throw std::invalid_argument("find_valuation_general: empty family");
    Eigen::Index d = obs[0].dim();
    for (const auto& o : obs)
        if (o.dim() != d)
            throw std::invalid_argument("find_valuation_general: dimension mismatch");
    return GeneralSolver(build_general(obs, opts.tol), opts).run();
}

VerifyResult verify_valuation(std::span<const Observable> obs, const Valuation& v,
                              double tol) {
    const int n = static_cast<int>(obs.size());
    if (static_cast<int>(v.values.size()) != n)
        throw std::invalid_argument("verify_valuation: assignment does not cover all observables");
    GeneralProblem gp = build_general(obs, tol);
    for (int i = 0; i < n; ++i) {
        bool in_spec = false;
        for (double c : gp.candidates[i])
            in_spec = in_spec || std::abs(c - v.values[i]) <= gp.match_tol;
        if (!in_spec)
            return {false, "value of observable " + std::to_string(i) +
                               " lies outside its spectrum"};
    }
    for (const auto& cl : gp.cliques) {
        bool any = false;
        for (const auto& p : cl.points) {
            bool match = true;
            for (size_t k = 0; k < cl.members.size() && match; ++k)
                if (std::abs(p(k) - v.values[cl.members[k]]) > gp.match_tol)
                    match = false;
            any = any || match;
        }
        if (!any) {
            std::string who = "{";
            for (size_t k = 0; k < cl.members.size(); ++k)
                who += (k ? "," : "") + std::to_string(cl.members[k]);
            return {false, "tuple on commuting subset " + who +
                               "} lies outside the joint spectrum"};
        }
    }
    return {true, ""};
}

}  // namespace nogo
