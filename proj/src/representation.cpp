#include "nogo/representation.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>

#include "nogo/json_io.hpp"

namespace nogo {

namespace {

void check_prob_row(const Eigen::VectorXd& mu, double tol) {
    if (mu.minCoeff() < -1e-12)
        throw std::invalid_argument("mu-row has a negative entry");
    if (std::abs(mu.sum() - 1.0) > tol)
        throw std::invalid_argument("mu-row does not sum to 1");
}

void check_f_row(const Eigen::VectorXd& f) {
    if (f.size() > 0 && (f.minCoeff() < -1e-12 || f.maxCoeff() > 1.0 + 1e-12))
        throw std::invalid_argument("F-row entry outside [0,1]");
}

}  // namespace

int CandidateRepresentation::add_state(DensityMatrix rho, Eigen::VectorXd mu,
                                       double tol) {
    if (rho.dim() != dim_)
        throw std::invalid_argument("add_state: dimension mismatch");
    if (mu.size() != lambda_size())
        throw std::invalid_argument("add_state: mu-row length != |Lambda|");
    check_prob_row(mu, tol);
    states_.push_back({std::move(rho), std::move(mu)});
    return static_cast<int>(states_.size()) - 1;
}

int CandidateRepresentation::add_effect(Ray e, Eigen::VectorXd f, double) {
    if (e.dim() != dim_)
        throw std::invalid_argument("add_effect: dimension mismatch");
    if (f.size() != lambda_size())
        throw std::invalid_argument("add_effect: F-row length != |Lambda|");
    check_f_row(f);
    effects_.push_back({std::move(e), std::move(f)});
    return static_cast<int>(effects_.size()) - 1;
}

int CandidateRepresentation::add_lambda_point(std::string label,
                                              std::span<const double> f_new) {
    if (f_new.size() != effects_.size())
        throw std::invalid_argument("add_lambda_point: need one F value per effect");
    lambda_.push_back(std::move(label));
    for (auto& s : states_) {
        s.mu.conservativeResize(lambda_.size());
        s.mu(lambda_.size() - 1) = 0.0;
    }
    for (size_t i = 0; i < effects_.size(); ++i) {
        effects_[i].f.conservativeResize(lambda_.size());
        effects_[i].f(lambda_.size() - 1) = f_new[i];
    }
    return static_cast<int>(lambda_.size()) - 1;
}

void CandidateRepresentation::validate(double tol) const {
    for (const auto& s : states_) {
        if (s.mu.size() != lambda_size())
            throw std::invalid_argument("mu-row length != |Lambda|");
        check_prob_row(s.mu, tol);
    }
    for (const auto& e : effects_) {
        if (e.f.size() != lambda_size())
            throw std::invalid_argument("F-row length != |Lambda|");
        check_f_row(e.f);
    }
}

const char* kind_name(Violation::Kind k) {
    switch (k) {
        case Violation::Kind::Eq1: return "eq1";
        case Violation::Kind::Convexity: return "convexity";
        case Violation::Kind::MixtureConsistency: return "mixture-consistency";
    }
    return "?";
}

double born(const Ray& psi, const Ray& e) {
    double num = std::norm(psi.inner(e));
    return num / (psi.coords().squaredNorm() * e.coords().squaredNorm());
}

std::vector<Violation> check_eq1(const CandidateRepresentation& c, double tol) {
    std::vector<Violation> out;
    for (size_t i = 0; i < c.states().size(); ++i) {
        const auto& st = c.states()[i];
        for (size_t j = 0; j < c.effects().size(); ++j) {
            const auto& ef = c.effects()[j];
            double lhs = (st.rho.matrix() * ef.ray.projector()).trace().real();
            double rhs = ef.f.dot(st.mu);
            double gap = std::abs(lhs - rhs);
            if (gap > tol) {
                Violation v;
                v.kind = Violation::Kind::Eq1;
                v.constraint = "Tr(rho_" + std::to_string(i) + " E_" +
                               std::to_string(j) + ") != sum_L F(E) mu(rho)";
                v.states = {static_cast<int>(i)};
                v.effects = {static_cast<int>(j)};
                v.lhs = {lhs};
                v.rhs = {rhs};
                v.gap = gap;
                v.tol = tol;
                out.push_back(std::move(v));
            }
        }
    }
    return out;
}

std::vector<Violation> check_convex(const CandidateRepresentation& c,
                                    std::span<const MixTriple> triples, double tol) {
    std::vector<Violation> out;
    for (const auto& t : triples) {
        const auto& S = c.states();
        if (t.i < 0 || t.j < 0 || t.k < 0 || t.i >= static_cast<int>(S.size()) ||
            t.j >= static_cast<int>(S.size()) || t.k >= static_cast<int>(S.size()))
            throw std::invalid_argument("check_convex: state index out of range");
        Matrix resid = S[t.k].rho.matrix() - t.p * S[t.i].rho.matrix() -
                       (1.0 - t.p) * S[t.j].rho.matrix();
        if (resid.norm() > tol)
            throw std::invalid_argument(
                "check_convex: ill-posed triple (rho_" + std::to_string(t.k) +
                " != p rho_" + std::to_string(t.i) + " + (1-p) rho_" +
                std::to_string(t.j) + ")");
        Eigen::VectorXd combo = t.p * S[t.i].mu + (1.0 - t.p) * S[t.j].mu;
        double gap = (S[t.k].mu - combo).lpNorm<Eigen::Infinity>();
        if (gap > tol) {
            Violation v;
            v.kind = Violation::Kind::Convexity;
            v.constraint = "mu(p rho_" + std::to_string(t.i) + " + (1-p) rho_" +
                           std::to_string(t.j) + ") != p mu + (1-p) mu";
            v.states = {t.i, t.j, t.k};
            v.weights = {t.p};
            v.lhs.assign(S[t.k].mu.data(), S[t.k].mu.data() + S[t.k].mu.size());
            v.rhs.assign(combo.data(), combo.data() + combo.size());
            v.gap = gap;
            v.tol = tol;
            out.push_back(std::move(v));
        }
    }
    return out;
}

std::vector<MixTriple> discover_mixtures(const CandidateRepresentation& c,
                                         double tol) {
    std::vector<MixTriple> out;
    const auto& S = c.states();
    const int n = static_cast<int>(S.size());
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                if (k == i || k == j) continue;
                // rho_k - rho_j = p (rho_i - rho_j): least-squares p.
                Matrix u = S[i].rho.matrix() - S[j].rho.matrix();
                Matrix w = S[k].rho.matrix() - S[j].rho.matrix();
                double uu = u.squaredNorm();
                if (uu < tol) continue;
                double p = (u.adjoint() * w).trace().real() / uu;
                if (p < -tol || p > 1.0 + tol) continue;
                p = std::clamp(p, 0.0, 1.0);
                if ((w - p * u).norm() <= tol) out.push_back({p, i, j, k});
            }
    return out;
}

namespace {

Violation mixture_violation(const CandidateRepresentation& c, double p, int i, int j,
                            double q, int k, int l, double tol) {
    const auto& S = c.states();
    Eigen::VectorXd a = p * S[i].mu + (1.0 - p) * S[j].mu;
    Eigen::VectorXd b = q * S[k].mu + (1.0 - q) * S[l].mu;
    Violation v;
    v.kind = Violation::Kind::MixtureConsistency;
    v.constraint = "two decompositions of one mixed state yield different measures";
    v.states = {i, j, k, l};
    v.weights = {p, q};
    v.lhs.assign(a.data(), a.data() + a.size());
    v.rhs.assign(b.data(), b.data() + b.size());
    v.gap = (a - b).lpNorm<Eigen::Infinity>();
    v.tol = tol;
    return v;
}

}  // namespace

std::vector<Violation> check_mixture_consistency(const CandidateRepresentation& c,
                                                 double tol) {
    std::vector<Violation> out;
    const auto& S = c.states();
    const int n = static_cast<int>(S.size());

    // Duplicate listed states (the p = q = 1 degenerate case).
    for (int i = 0; i < n; ++i)
        for (int k = i + 1; k < n; ++k)
            if ((S[i].rho.matrix() - S[k].rho.matrix()).norm() <= tol) {
                double gap = (S[i].mu - S[k].mu).lpNorm<Eigen::Infinity>();
                if (gap > tol) out.push_back(mixture_violation(c, 1, i, i, 1, k, k, tol));
            }

    // Two-term decompositions: p rho_i + (1-p) rho_j == q rho_k + (1-q) rho_l.
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int k = i; k < n; ++k)
                for (int l = k + 1; l < n; ++l) {
                    if (i == k && j == l) continue;
                    Matrix u = S[i].rho.matrix() - S[j].rho.matrix();
                    Matrix w = S[k].rho.matrix() - S[l].rho.matrix();
                    Matrix r = S[l].rho.matrix() - S[j].rho.matrix();
                    // Least squares for [u, -w] (p q)^T = r over the real
                    // Hilbert-Schmidt inner product.
                    double a11 = u.squaredNorm();
                    double a22 = w.squaredNorm();
                    double a12 = -(u.adjoint() * w).trace().real();
                    double b1 = (u.adjoint() * r).trace().real();
                    double b2 = -(w.adjoint() * r).trace().real();
                    double det = a11 * a22 - a12 * a12;
                    if (det <= 1e-12 * (a11 * a22 + 1e-300)) continue;  // degenerate
                    double p = (a22 * b1 - a12 * b2) / det;
                    double q = (a11 * b2 - a12 * b1) / det;
                    if (p < -tol || p > 1 + tol || q < -tol || q > 1 + tol) continue;
                    p = std::clamp(p, 0.0, 1.0);
                    q = std::clamp(q, 0.0, 1.0);
                    if ((p * u - q * w - r).norm() > tol) continue;
                    Violation v = mixture_violation(c, p, i, j, q, k, l, tol);
                    if (v.gap > tol) out.push_back(std::move(v));
                }

    // Uniform mixtures of listed orthonormal bases (decompositions of I/dim).
    std::vector<int> pure;
    for (int i = 0; i < n; ++i) {
        Eigen::SelfAdjointEigenSolver<Matrix> es(S[i].rho.matrix(),
                                                 Eigen::EigenvaluesOnly);
        if (es.eigenvalues().maxCoeff() > 1.0 - tol) pure.push_back(i);
    }
    std::vector<std::vector<int>> bases;
    std::vector<int> clique;
    // Orthogonal cliques of size dim among the pure listed states.
    std::function<void(size_t)> grow = [&](size_t from) {
        if (static_cast<int>(clique.size()) == c.dim()) {
            bases.push_back(clique);
            return;
        }
        for (size_t t = from; t < pure.size(); ++t) {
            bool ortho = true;
            for (int m : clique)
                ortho = ortho && std::abs((S[m].rho.matrix() * S[pure[t]].rho.matrix())
                                              .trace()
                                              .real()) <= tol;
            if (!ortho) continue;
            clique.push_back(pure[t]);
            grow(t + 1);
            clique.pop_back();
        }
    };
    grow(0);
    double unif = 1.0 / c.dim();
    for (size_t a = 0; a < bases.size(); ++a)
        for (size_t b = a + 1; b < bases.size(); ++b) {
            Eigen::VectorXd ma = Eigen::VectorXd::Zero(c.lambda_size());
            Eigen::VectorXd mb = Eigen::VectorXd::Zero(c.lambda_size());
            for (int i : bases[a]) ma += unif * S[i].mu;
            for (int i : bases[b]) mb += unif * S[i].mu;
            double gap = (ma - mb).lpNorm<Eigen::Infinity>();
            if (gap > tol) {
                Violation v;
                v.kind = Violation::Kind::MixtureConsistency;
                v.constraint =
                    "two orthonormal-basis decompositions of I/d yield different measures";
                v.states = bases[a];
                v.states.insert(v.states.end(), bases[b].begin(), bases[b].end());
                v.weights.assign(2 * c.dim(), unif);
                v.lhs.assign(ma.data(), ma.data() + ma.size());
                v.rhs.assign(mb.data(), mb.data() + mb.size());
                v.gap = gap;
                v.tol = tol;
                out.push_back(std::move(v));
            }
        }
    return out;
}

namespace {

std::optional<Violation> best_violation(const CandidateRepresentation& c, double tol) {
    std::vector<Violation> all = check_eq1(c, tol);
    auto triples = discover_mixtures(c, tol);
    auto cv = check_convex(c, triples, tol);
    all.insert(all.end(), cv.begin(), cv.end());
    auto mv = check_mixture_consistency(c, tol);
    all.insert(all.end(), mv.begin(), mv.end());
    if (all.empty()) return std::nullopt;
    auto it = std::max_element(all.begin(), all.end(),
                               [](const Violation& a, const Violation& b) {
                                   return a.gap < b.gap;
                               });
    return *it;
}

}  // namespace

FalsifyReport falsify(CandidateRepresentation c, const FalsifyOptions& opts,
                      const ExtensionHook* hook) {
    if (c.dim() < 2) throw std::invalid_argument("falsify: dim must be >= 2");
    c.validate(opts.tol);
    FalsifyReport rep;
    if (auto v = best_violation(c, opts.tol)) {
        rep.violation = std::move(v);
        rep.summary = "violation found in the listed tables";
        return rep;
    }
    if (!hook)
        throw HookRequired(
            "falsify: listed tables are consistent; probing requires an extension hook");

    std::mt19937_64 rng(opts.seed);
    for (std::uint64_t probe = 0; probe < opts.budget; ++probe) {
        switch (probe % 3) {
            case 0: {  // decomposition of I/dim from a random orthonormal basis
                Matrix u = random_unitary(c.dim(), rng);
                for (int col = 0; col < c.dim(); ++col)
                    hook->extend_state(c, DensityMatrix::pure(Ray(Vector(u.col(col)))));
                break;
            }
            case 1:  // random pure state
                hook->extend_state(
                    c, DensityMatrix::pure(Ray(random_unit_vector(c.dim(), rng))));
                break;
            case 2:  // random rank-1 projection
                hook->extend_effect(c, Ray(random_unit_vector(c.dim(), rng)));
                break;
        }
        c.validate(opts.tol);
        rep.probes_used = probe + 1;
        if (auto v = best_violation(c, opts.tol)) {
            rep.violation = std::move(v);
            rep.summary = "violation found after probing";
            return rep;
        }
    }
    rep.summary = "budget exhausted; candidate dodged " +
                  std::to_string(opts.budget) + " probes";
    return rep;
}

CandidateRepresentation trivial_pure_theory(int dim,
                                            std::span<const Ray> pure_states) {
    if (dim < 1) throw std::invalid_argument("trivial_pure_theory: dim < 1");
    for (size_t i = 0; i < pure_states.size(); ++i)
        for (size_t j = i + 1; j < pure_states.size(); ++j)
            if (pure_states[i].equivalent_to(pure_states[j]))
                throw std::invalid_argument("trivial_pure_theory: duplicate states");

    std::vector<std::string> labels;
    for (size_t i = 0; i < pure_states.size(); ++i)
        labels.push_back("psi" + std::to_string(i));
    CandidateRepresentation c(dim, std::move(labels));
    const int n = static_cast<int>(pure_states.size());
    for (int i = 0; i < n; ++i) {
        Eigen::VectorXd mu = Eigen::VectorXd::Zero(n);
        mu(i) = 1.0;
        c.add_state(DensityMatrix::pure(pure_states[i]), std::move(mu));
    }
    for (int j = 0; j < n; ++j) {
        Eigen::VectorXd f(n);
        for (int i = 0; i < n; ++i) f(i) = born(pure_states[i], pure_states[j]);
        c.add_effect(pure_states[j], std::move(f));
    }
    return c;
}

ExtensionHook make_born_hook(std::vector<Ray> lambda_rays) {
    auto registry = std::make_shared<std::vector<Ray>>(std::move(lambda_rays));

    auto point_for = [registry](CandidateRepresentation& c, const Ray& psi) -> int {
        if (static_cast<int>(registry->size()) != c.lambda_size())
            throw std::logic_error("born hook: registry out of sync with Lambda");
        for (size_t i = 0; i < registry->size(); ++i)
            if ((*registry)[i].equivalent_to(psi)) return static_cast<int>(i);
        std::vector<double> f;
        for (const auto& e : c.effects()) f.push_back(born(psi, e.ray));
        int idx = c.add_lambda_point("psi" + std::to_string(registry->size()), f);
        registry->push_back(psi);
        return idx;
    };

    ExtensionHook hook;
    hook.extend_state = [point_for](CandidateRepresentation& c,
                                    const DensityMatrix& rho) -> int {
        Eigen::SelfAdjointEigenSolver<Matrix> es(rho.matrix());
        // Register hidden points first; Lambda may grow while we do.
        std::vector<std::pair<int, double>> mass;
        for (int k = 0; k < rho.dim(); ++k) {
            double w = es.eigenvalues()(k);
            if (w <= 1e-12) continue;
            mass.emplace_back(point_for(c, Ray(Vector(es.eigenvectors().col(k)))), w);
        }
        Eigen::VectorXd mu = Eigen::VectorXd::Zero(c.lambda_size());
        for (auto [idx, w] : mass) mu(idx) += w;
        return c.add_state(rho, mu);
    };
    hook.extend_effect = [registry](CandidateRepresentation& c, const Ray& e) -> int {
        if (static_cast<int>(registry->size()) != c.lambda_size())
            throw std::logic_error("born hook: registry out of sync with Lambda");
        Eigen::VectorXd f(c.lambda_size());
        for (int i = 0; i < c.lambda_size(); ++i) f(i) = born((*registry)[i], e);
        return c.add_effect(e, f);
    };
    return hook;
}

double recheck(const CandidateRepresentation& c, const Violation& v) {
    const auto& S = c.states();
    switch (v.kind) {
        case Violation::Kind::Eq1: {
            if (v.witness_rays.size() == 3) {
                // Self-contained form: effect plus two pure states forced to
                // share one Lambda-average.
                double a = born(v.witness_rays[1], v.witness_rays[0]);
                double b = born(v.witness_rays[2], v.witness_rays[0]);
                return std::abs(a - b);
            }
            const auto& st = S.at(v.states.at(0));
            const auto& ef = c.effects().at(v.effects.at(0));
            double lhs = (st.rho.matrix() * ef.ray.projector()).trace().real();
            return std::abs(lhs - ef.f.dot(st.mu));
        }
        case Violation::Kind::Convexity: {
            double p = v.weights.at(0);
            Eigen::VectorXd combo =
                p * S.at(v.states.at(0)).mu + (1 - p) * S.at(v.states.at(1)).mu;
            return (S.at(v.states.at(2)).mu - combo).lpNorm<Eigen::Infinity>();
        }
        case Violation::Kind::MixtureConsistency: {
            if (v.weights.size() == 2) {
                double p = v.weights[0], q = v.weights[1];
                Eigen::VectorXd a =
                    p * S.at(v.states.at(0)).mu + (1 - p) * S.at(v.states.at(1)).mu;
                Eigen::VectorXd b =
                    q * S.at(v.states.at(2)).mu + (1 - q) * S.at(v.states.at(3)).mu;
                return (a - b).lpNorm<Eigen::Infinity>();
            }
            // Basis-vs-basis form: first half vs second half, uniform weights.
            size_t half = v.states.size() / 2;
            Eigen::VectorXd a = Eigen::VectorXd::Zero(c.lambda_size());
            Eigen::VectorXd b = Eigen::VectorXd::Zero(c.lambda_size());
            for (size_t t = 0; t < half; ++t) a += v.weights.at(t) * S.at(v.states[t]).mu;
            for (size_t t = half; t < v.states.size(); ++t)
                b += v.weights.at(t) * S.at(v.states[t]).mu;
            return (a - b).lpNorm<Eigen::Infinity>();
        }
    }
    throw std::logic_error("recheck: unknown violation kind");
}

CandidateRepresentation load_candidate(const std::string& path) {
    io::json j = io::load_file(path);
    if (!j.contains("dim")) throw InputError(path + ": missing \"dim\"");
    int dim = j["dim"].get<int>();
    if (!j.contains("lambda") || !j["lambda"].is_array())
        throw InputError(path + ": missing array \"lambda\"");
    std::vector<std::string> labels;
    for (const auto& l : j["lambda"]) labels.push_back(l.get<std::string>());
    CandidateRepresentation c(dim, std::move(labels));
    try {
        for (const auto& sj : j.value("states", io::json::array())) {
            Matrix rho = io::parse_matrix(sj.at("rho"), dim);
            Eigen::VectorXd mu(c.lambda_size());
            const auto& mj = sj.at("mu");
            if (mj.size() != static_cast<size_t>(c.lambda_size()))
                throw InputError("mu-row length != |lambda|");
            for (int i = 0; i < c.lambda_size(); ++i) mu(i) = mj[i].get<double>();
            c.add_state(DensityMatrix(std::move(rho)), std::move(mu));
        }
        for (const auto& ej : j.value("effects", io::json::array())) {
            Ray r = io::parse_ray(ej.at("ray"), false);
            Eigen::VectorXd f(c.lambda_size());
            const auto& fj = ej.at("F");
            if (fj.size() != static_cast<size_t>(c.lambda_size()))
                throw InputError("F-row length != |lambda|");
            for (int i = 0; i < c.lambda_size(); ++i) f(i) = fj[i].get<double>();
            c.add_effect(std::move(r), std::move(f));
        }
    } catch (const std::invalid_argument& e) {
        throw InputError(path + ": " + e.what());
    } catch (const io::json::exception& e) {
        throw InputError(path + ": " + e.what());
    }
    return c;
}

void save_candidate(const std::string& path, const CandidateRepresentation& c) {
    io::json j;
    j["dim"] = c.dim();
    j["lambda"] = c.lambda();
    io::json states = io::json::array();
    for (const auto& s : c.states()) {
        io::json sj;
        sj["rho"] = io::matrix_to_json(s.rho.matrix());
        sj["mu"] = std::vector<double>(s.mu.data(), s.mu.data() + s.mu.size());
        states.push_back(std::move(sj));
    }
    j["states"] = std::move(states);
    io::json effects = io::json::array();
    for (const auto& e : c.effects()) {
        io::json ej;
        ej["ray"] = io::ray_to_json(e.ray);
        ej["F"] = std::vector<double>(e.f.data(), e.f.data() + e.f.size());
        effects.push_back(std::move(ej));
    }
    j["effects"] = std::move(effects);
    io::save_file(path, j);
}

}  // namespace nogo
