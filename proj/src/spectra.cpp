#include "nogo/spectra.hpp"

#include <algorithm>
#include <cmath>

namespace nogo {

bool commutes(const Observable& a, const Observable& b, double tol) {
    if (a.dim() != b.dim())
        throw std::invalid_argument("commutes: dimension mismatch");
    if (a.has_exact() && b.has_exact()) {
        ExactMatrix c = a.exact() * b.exact() - b.exact() * a.exact();
        for (Eigen::Index j = 0; j < c.cols(); ++j)
            for (Eigen::Index i = 0; i < c.rows(); ++i)
                if (!c(i, j).is_zero()) return false;
        return true;
    }
    double scale = 1.0 + a.matrix().norm() * b.matrix().norm();
    return (a.matrix() * b.matrix() - b.matrix() * a.matrix()).norm() <= tol * scale;
}

Eigensystem eigensystem(const Observable& a) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(a.matrix());
    if (es.info() != Eigen::Success)
        throw std::runtime_error("spectrum: eigensolver did not converge");
    return {es.eigenvalues(), es.eigenvectors()};
}

std::vector<double> spectrum(const Observable& a) {
    Eigensystem es = eigensystem(a);
    return {es.values.data(), es.values.data() + es.values.size()};
}

bool JointSpectrumSet::contains(const Eigen::VectorXd& p, double match_tol) const {
    for (const auto& q : points)
        if ((q - p).lpNorm<Eigen::Infinity>() <= match_tol) return true;
    return false;
}

namespace {

bool lex_less(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        if (a(i) < b(i)) return true;
        if (a(i) > b(i)) return false;
    }
    return false;
}

// Diagonalize op restricted to the subspace spanned by the orthonormal
// columns of `basis`, cluster eigenvalues whose gaps fall below tol, and
// recurse into each cluster's eigenspace.
void refine(std::span<const Observable> ops, size_t next, const Matrix& basis,
            std::vector<double>& prefix, double tol,
            std::vector<Eigen::VectorXd>& out) {
    if (next == ops.size()) {
        out.emplace_back(Eigen::Map<const Eigen::VectorXd>(prefix.data(),
                                                           prefix.size()));
        return;
    }
    Matrix restricted = basis.adjoint() * ops[next].matrix() * basis;
    Eigen::SelfAdjointEigenSolver<Matrix> es(restricted);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("joint_spectrum: eigensolver did not converge");

    const Eigen::VectorXd& vals = es.eigenvalues();
    double scale = 1.0 + ops[next].matrix().norm();
    Eigen::Index lo = 0;
    while (lo < vals.size()) {
        Eigen::Index hi = lo + 1;
        while (hi < vals.size() && vals(hi) - vals(hi - 1) <= tol * scale) ++hi;
        double lambda = vals.segment(lo, hi - lo).mean();
        Matrix sub = basis * es.eigenvectors().middleCols(lo, hi - lo);
        prefix.push_back(lambda);
        refine(ops, next + 1, sub, prefix, tol, out);
        prefix.pop_back();
        lo = hi;
    }
}

}  // namespace

JointSpectrumSet joint_spectrum(std::span<const Observable> ops, double tol) {
    if (ops.empty()) throw std::invalid_argument("joint_spectrum: empty family");
    Eigen::Index d = ops[0].dim();
    for (size_t i = 0; i < ops.size(); ++i)
        if (ops[i].dim() != d)
            throw std::invalid_argument("joint_spectrum: dimension mismatch");
    for (size_t i = 0; i < ops.size(); ++i)
        for (size_t j = i + 1; j < ops.size(); ++j)
            if (!commutes(ops[i], ops[j], tol))
                throw NonCommutingError(static_cast<int>(i), static_cast<int>(j));

    std::vector<Eigen::VectorXd> raw;
    std::vector<double> prefix;
    refine(ops, 0, Matrix::Identity(d, d), prefix, tol, raw);

    std::sort(raw.begin(), raw.end(), lex_less);
    JointSpectrumSet js;
    js.arity = static_cast<int>(ops.size());
    js.tol = tol;
    for (const auto& p : raw) {
        if (!js.points.empty() &&
            (js.points.back() - p).lpNorm<Eigen::Infinity>() <= tol)
            continue;
        js.points.push_back(p);
    }
    return js;
}

Polynomial Polynomial::constant(int nvars, double c) {
    Polynomial f(nvars);
    if (c != 0.0) f.terms_[std::vector<int>(nvars, 0)] = c;
    return f;
}

Polynomial Polynomial::variable(int nvars, int index) {
    if (index < 0 || index >= nvars)
        throw std::invalid_argument("Polynomial::variable: index out of range");
    Polynomial f(nvars);
    std::vector<int> e(nvars, 0);
    e[index] = 1;
    f.terms_[std::move(e)] = 1.0;
    return f;
}

Polynomial Polynomial::univariate(std::span<const double> coeffs) {
    Polynomial f(1);
    for (size_t k = 0; k < coeffs.size(); ++k)
        if (coeffs[k] != 0.0) f.terms_[{static_cast<int>(k)}] = coeffs[k];
    return f;
}

int Polynomial::degree() const {
    int deg = 0;
    for (const auto& [e, c] : terms_) {
        int d = 0;
        for (int k : e) d += k;
        deg = std::max(deg, d);
    }
    return deg;
}

Polynomial& Polynomial::add_term(std::vector<int> exponents, double coeff) {
    if (static_cast<int>(exponents.size()) != nvars_)
        throw std::invalid_argument("Polynomial: exponent arity mismatch");
    double& c = terms_[std::move(exponents)];
    c += coeff;
    return *this;
}

Polynomial operator+(const Polynomial& f, const Polynomial& g) {
    if (f.nvars_ != g.nvars_) throw std::invalid_argument("Polynomial: arity mismatch");
    Polynomial h = f;
    for (const auto& [e, c] : g.terms_) h.terms_[e] += c;
    return h;
}

Polynomial operator-(const Polynomial& f, const Polynomial& g) {
    return f + (-1.0 * g);
}

Polynomial operator*(const Polynomial& f, const Polynomial& g) {
    if (f.nvars_ != g.nvars_) throw std::invalid_argument("Polynomial: arity mismatch");
    Polynomial h(f.nvars_);
    for (const auto& [ef, cf] : f.terms_)
        for (const auto& [eg, cg] : g.terms_) {
            std::vector<int> e(f.nvars_);
            for (int k = 0; k < f.nvars_; ++k) e[k] = ef[k] + eg[k];
            h.terms_[std::move(e)] += cf * cg;
        }
    return h;
}

Polynomial operator*(double c, const Polynomial& f) {
    Polynomial h(f.nvars_);
    if (c == 0.0) return h;
    for (const auto& [e, cf] : f.terms_) h.terms_[e] = c * cf;
    return h;
}

double Polynomial::operator()(const Eigen::VectorXd& x) const {
    if (x.size() != nvars_) throw std::invalid_argument("Polynomial: arity mismatch");
    double sum = 0.0;
    for (const auto& [e, c] : terms_) {
        double t = c;
        for (int k = 0; k < nvars_; ++k)
            for (int p = 0; p < e[k]; ++p) t *= x(k);
        sum += t;
    }
    return sum;
}

Matrix Polynomial::operator()(std::span<const Matrix> args) const {
    if (static_cast<int>(args.size()) != nvars_)
        throw std::invalid_argument("Polynomial: arity mismatch");
    Eigen::Index d = args.empty() ? 1 : args[0].rows();
    // Cache powers of each argument up to the degree actually used.
    std::vector<std::vector<Matrix>> pow(nvars_);
    for (int k = 0; k < nvars_; ++k) pow[k].push_back(Matrix::Identity(d, d));
    Matrix sum = Matrix::Zero(d, d);
    for (const auto& [e, c] : terms_) {
        Matrix term = Matrix::Identity(d, d);
        for (int k = 0; k < nvars_; ++k) {
            while (static_cast<int>(pow[k].size()) <= e[k])
                pow[k].push_back(pow[k].back() * args[k]);
            if (e[k] > 0) term = term * pow[k][e[k]];
        }
        sum += c * term;
    }
    return sum;
}

VanishingCheck check_vanishing(const Polynomial& f, std::span<const Observable> ops,
                               double tol) {
    JointSpectrumSet js = joint_spectrum(ops, tol);  // rejects non-commuting input
    std::vector<Matrix> mats;
    mats.reserve(ops.size());
    for (const auto& op : ops) mats.push_back(op.matrix());
    double lhs = f(std::span<const Matrix>(mats)).norm();
    double rhs = 0.0;
    for (const auto& p : js.points) rhs = std::max(rhs, std::abs(f(p)));
    return {lhs <= tol, rhs <= tol, lhs, rhs, tol};
}

}  // namespace nogo
