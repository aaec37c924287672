#include "io.hpp"

#include <fstream>
#include <sstream>

namespace msl::cli {

namespace {

[[noreturn]] void bad(const std::string &what) { throw Error(Errc::input, "malformed-input", what); }

const json &unwrap(const json &j, const char *key) {
    if (j.is_object()) {
        if (!j.contains(key)) bad(std::string("missing field \"") + key + "\"");
        return j.at(key);
    }
    return j;
}

Rational to_rational(const json &j) {
    if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
    if (!j.is_string()) bad("arc endpoints must be integers or \"p/q\" strings");
    const std::string s = j.get<std::string>();
    const auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rational(std::stoll(s));
        return Rational(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
    } catch (const std::exception &) {
        bad("cannot read rational \"" + s + "\"");
    }
}

} // namespace

json parse_json_text(const std::string &text, const std::string &origin) {
    try {
        return json::parse(text);
    } catch (const json::parse_error &e) {
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        std::string msg = e.what();
        const auto pos = msg.find("syntax error");
        if (pos != std::string::npos) msg = msg.substr(pos);
        throw Error(Errc::input, "malformed-JSON",
                    origin + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + msg);
    }
}

json read_json_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::input, "missing-file", "cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_json_text(ss.str(), path);
}

cplx to_complex(const json &j) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return {j[0].get<double>(), j[1].get<double>()};
    if (j.is_object() && j.contains("re"))
        return {j.at("re").get<double>(), j.contains("im") ? j.at("im").get<double>() : 0.0};
    bad("complex numbers are written as x, [re, im] or {\"re\": x, \"im\": y}");
}

json from_complex(cplx z) { return json::array({z.real(), z.imag()}); }

std::vector<cplx> to_points(const json &j, const char *key) {
    const json &a = unwrap(j, key);
    if (!a.is_array()) bad(std::string("\"") + key + "\" must be an array");
    std::vector<cplx> out;
    for (const json &e : a) out.push_back(to_complex(e));
    return out;
}

json from_points(const std::vector<cplx> &pts) {
    json a = json::array();
    for (cplx z : pts) a.push_back(from_complex(z));
    return a;
}

CMat to_matrix(const json &j) {
    const json &a = unwrap(j, "matrix");
    if (!a.is_array() || a.empty() || !a[0].is_array()) bad("a matrix is a non-empty array of rows");
    const auto rows = static_cast<Eigen::Index>(a.size()), cols = static_cast<Eigen::Index>(a[0].size());
    CMat m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        if (!a[r].is_array() || static_cast<Eigen::Index>(a[r].size()) != cols) bad("matrix rows differ in length");
        for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = to_complex(a[r][c]);
    }
    return m;
}

json from_matrix(const CMat &m) {
    json a = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(from_complex(m(r, c)));
        a.push_back(row);
    }
    return a;
}

json from_real(const RVec &v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
    return a;
}

CVec to_cvec(const json &j) {
    if (!j.is_array()) bad("expected an array of complex numbers");
    CVec v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = to_complex(j[i]);
    return v;
}

BlaschkeProduct to_blaschke(const json &j) {
    if (j.is_array()) return BlaschkeProduct(to_points(j, "zeros"));
    if (!j.is_object()) bad("a Blaschke product is an array of zeros or an object with \"zeros\"");
    cplx c = j.contains("constant") ? to_complex(j.at("constant")) : cplx(1.0);
    return BlaschkeProduct(to_points(j, "zeros"), c, j.value("simple", false));
}

std::vector<BlaschkeProduct> to_blaschke_list(const json &j, const char *key) {
    const json &a = unwrap(j, key);
    if (!a.is_array()) bad(std::string("\"") + key + "\" must be an array");
    std::vector<BlaschkeProduct> out;
    for (const json &e : a) out.push_back(to_blaschke(e));
    return out;
}

DiscFunction to_disc_function(const json &j) {
    if (j.is_number() || j.is_array()) return DiscFunction::constant(to_complex(j));
    if (!j.is_object() || !j.contains("kind")) bad("a disc function is an object with a \"kind\"");
    const std::string kind = j.at("kind").get<std::string>();
    DiscFunction f;
    if (kind == "constant") {
        f = DiscFunction::constant(to_complex(j.at("value")));
    } else if (kind == "chi") {
        f = DiscFunction::chi();
    } else if (kind == "blaschke") {
        f = DiscFunction::blaschke(to_blaschke(j));
    } else if (kind == "singular") {
        f = DiscFunction::singular_exp(j.at("a").get<double>());
    } else if (kind == "product" || kind == "sum") {
        const json &parts = j.at(kind == "product" ? "factors" : "terms");
        if (!parts.is_array() || parts.empty()) bad("product and sum need a non-empty list");
        f = to_disc_function(parts[0]);
        for (std::size_t i = 1; i < parts.size(); ++i)
            f = kind == "product" ? f * to_disc_function(parts[i]) : f + to_disc_function(parts[i]);
    } else {
        bad("unknown disc function kind \"" + kind + "\"");
    }
    if (j.contains("scale")) f = to_complex(j.at("scale")) * f;
    return f;
}

MatrixInnerFunction to_matrix_inner(const json &j) {
    if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("entries"))
        bad("a matrix function needs \"rows\", \"cols\" and row-major \"entries\"");
    const int rows = j.at("rows").get<int>(), cols = j.at("cols").get<int>();
    const json &e = j.at("entries");
    if (!e.is_array() || static_cast<int>(e.size()) != rows * cols) bad("entry count must be rows * cols");
    std::vector<DiscFunction> entries;
    for (const json &x : e) entries.push_back(to_disc_function(x));
    return MatrixInnerFunction(rows, cols, std::move(entries));
}

ArcSet to_arcset(const json &j) {
    if (!j.is_array()) bad("an arc set is an array of [start, end] pairs in turns");
    std::vector<Arc> arcs;
    for (const json &a : j) {
        if (!a.is_array() || a.size() != 2) bad("each arc is [start, end]");
        arcs.push_back({to_rational(a[0]), to_rational(a[1])});
    }
    return ArcSet::from_arcs(arcs);
}

} // namespace msl::cli
