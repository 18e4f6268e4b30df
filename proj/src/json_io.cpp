#include "nogo/json_io.hpp"

#include <cmath>
#include <fstream>

namespace nogo::io {

Rational parse_rational(const json& j) {
    if (j.is_string()) return Rational::parse(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
    if (j.is_number_float()) {
        double v = j.get<double>();
        if (v == std::floor(v) && std::abs(v) < 9e15)
            return Rational(static_cast<std::int64_t>(v));
        throw InputError("exact scalar component must be an integer or \"p/q\" string");
    }
    throw InputError("cannot parse rational from " + j.dump());
}

ExactScalar parse_exact_scalar(const json& j) {
    if (!j.is_array() || j.size() != 4)
        throw InputError("exact scalar must be a quadruple [a,b,c,d]: " + j.dump());
    return ExactScalar(Surd(parse_rational(j[0]), parse_rational(j[1])),
                       Surd(parse_rational(j[2]), parse_rational(j[3])));
}

Cplx parse_float_scalar(const json& j) {
    if (j.is_number()) return Cplx(j.get<double>(), 0.0);
    if (j.is_object())
        return Cplx(j.value("re", 0.0), j.value("im", 0.0));
    throw InputError("float scalar must be a number or {re, im}: " + j.dump());
}

json to_json(const ExactScalar& s) {
    auto rat = [](const Rational& r) -> json {
        if (r.den() == 1) return r.num();
        return r.str();
    };
    return json::array({rat(s.real().rat()), rat(s.real().surd()),
                        rat(s.imag().rat()), rat(s.imag().surd())});
}

json to_json(Cplx z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

bool exact_mode(const json& file) {
    std::string s = file.value("scalars", "float");
    if (s == "exact") return true;
    if (s == "float") return false;
    throw InputError("\"scalars\" must be \"exact\" or \"float\", got \"" + s + "\"");
}

Ray parse_ray(const json& coords, bool exact) {
    if (!coords.is_array() || coords.empty())
        throw InputError("ray must be a nonempty coordinate array");
    if (exact) {
        ExactVector v(coords.size());
        for (size_t i = 0; i < coords.size(); ++i) v(i) = parse_exact_scalar(coords[i]);
        return Ray(std::move(v));
    }
    Vector v(coords.size());
    for (size_t i = 0; i < coords.size(); ++i) v(i) = parse_float_scalar(coords[i]);
    return Ray(std::move(v));
}

json ray_to_json(const Ray& r) {
    json arr = json::array();
    if (r.has_exact())
        for (Eigen::Index i = 0; i < r.dim(); ++i) arr.push_back(to_json(r.exact()(i)));
    else
        for (Eigen::Index i = 0; i < r.dim(); ++i) arr.push_back(to_json(r.coords()(i)));
    return arr;
}

Matrix parse_matrix(const json& entries, int dim) {
    if (!entries.is_array() || entries.size() != static_cast<size_t>(dim) * dim)
        throw InputError("matrix must be a row-major list of dim*dim entries");
    Matrix m(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) m(i, j) = parse_float_scalar(entries[i * dim + j]);
    return m;
}

ExactMatrix parse_exact_matrix(const json& entries, int dim) {
    if (!entries.is_array() || entries.size() != static_cast<size_t>(dim) * dim)
        throw InputError("matrix must be a row-major list of dim*dim entries");
    ExactMatrix m(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) m(i, j) = parse_exact_scalar(entries[i * dim + j]);
    return m;
}

json matrix_to_json(const Matrix& m) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) arr.push_back(to_json(m(i, j)));
    return arr;
}

json load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw InputError(path + ": " + e.what());
    }
    return j;
}

void save_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write " + path);
    out << j.dump(2) << "\n";
}

}  // namespace nogo::io
