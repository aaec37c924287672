#include "msl/unicellular.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include "msl/psi.hpp"

namespace msl {

namespace {

// Cofactor of (r, c) as a disc function, built without sums whenever a row has a single nonzero.
DiscFunction minor_det(const MatrixInnerFunction &m, std::vector<int> rows, std::vector<int> cols) {
    if (rows.empty()) return DiscFunction::constant(1.0);
    const int r = rows.front();
    std::vector<int> rest(rows.begin() + 1, rows.end());
    std::optional<DiscFunction> acc;
    for (std::size_t i = 0; i < cols.size(); ++i) {
        const DiscFunction &e = m.at(r, cols[i]);
        if (e.is_zero()) continue;
        std::vector<int> sub = cols;
        sub.erase(sub.begin() + static_cast<long>(i));
        DiscFunction term = e * minor_det(m, rest, sub);
        if (i % 2) term = cplx(-1.0) * term;
        acc = acc ? *acc + term : term;
    }
    return acc ? *acc : DiscFunction::constant(0.0);
}

std::vector<cplx> intersect(const std::vector<cplx> &a, const std::vector<cplx> &b) {
    std::vector<cplx> out, pool = b;
    for (cplx z : a) {
        auto it = std::find_if(pool.begin(), pool.end(), [&](cplx w) { return std::abs(w - z) <= 1e-10; });
        if (it == pool.end()) continue;
        out.push_back(z);
        pool.erase(it);
    }
    return out;
}

} // namespace

QuasisimilarityVerdict quasisimilarity_criterion(const MatrixInnerFunction &theta, const BlaschkeProduct &vartheta,
                                                 const BoundaryGrid &grid, double tol) {
    const int n = theta.rows();
    if (theta.cols() != n) throw Error(Errc::input, "not-square", "Theta must be square");
    for (const DiscFunction &e : theta.entries())
        if (!e.is_zero() && !e.as_rational_inner())
            throw Error(Errc::unsupported, "unsupported-entry-class", "entries must be Blaschke products times constants");

    QuasisimilarityVerdict v;
    const auto ts = theta.sample(grid);
    const CVec b = DiscFunction::blaschke(vartheta).sample(grid);
    const int g = grid.size();
    CVec det(g);
    for (int j = 0; j < g; ++j) {
        CMat m(n, n);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) m(r, c) = ts[r * n + c](j);
        det(j) = m.determinant();
    }
    cplx c = det.dot(b) / static_cast<double>(g); // sum conj(b) det
    c = std::conj(c);
    c = (std::abs(c) > 0.0) ? c / std::abs(c) : cplx(1.0);
    v.fitted_constant = c;
    v.det_residual = (det - c * b).cwiseAbs().maxCoeff();
    v.det_matches = v.det_residual <= tol;

    bool first = true;
    std::vector<int> idx(n);
    for (int i = 0; i < n; ++i) idx[i] = i;
    for (int r = 0; r < n; ++r)
        for (int col = 0; col < n; ++col) {
            std::vector<int> rows = idx, cols = idx;
            rows.erase(rows.begin() + r);
            cols.erase(cols.begin() + col);
            DiscFunction cof = minor_det(theta, rows, cols);
            if (cof.is_zero()) continue;
            auto ri = cof.as_rational_inner();
            if (!ri) throw Error(Errc::unsupported, "unsupported-entry-class", "adjugate entry is not rational inner");
            if (std::abs(ri->first) == 0.0) continue;
            const auto &z = ri->second.zeros();
            v.common_zeros = first ? z : intersect(v.common_zeros, z);
            first = false;
        }
    v.gcd_trivial = v.common_zeros.empty();
    v.verdict = v.det_matches && v.gcd_trivial;
    return v;
}

bool brute_force_quasisimilar(const std::vector<BlaschkeProduct> &blocks, const BlaschkeProduct &vartheta,
                              std::uint64_t seed) {
    const CMat a = diagonal_theta_shift(blocks);
    const CMat b = compressed_shift_matrix(vartheta);
    if (a.rows() != b.rows()) return false;
    auto forward = find_similarity(a, b, seed);
    auto backward = find_similarity(b, a, seed + 1);
    return forward && forward->accepted && backward && backward->accepted;
}

std::vector<cplx> corona_path(int depth) {
    if (depth < 1) throw Error(Errc::input, "path-depth", "path depth must be positive");
    std::vector<cplx> p;
    for (int l = 1; l <= depth; ++l) p.emplace_back(1.0 - std::ldexp(1.0, -l), 0.0);
    return p;
}

CoronaScanReport corona_infimum_scan(const MatrixInnerFunction &theta, const std::vector<cplx> &path,
                                     double threshold) {
    CoronaScanReport rep;
    rep.threshold = threshold;
    double inf = std::numeric_limits<double>::infinity();
    for (cplx z : path) {
        if (z == cplx(1.0)) throw Error(Errc::input, "evaluation-at-singularity", "path touches z = 1");
        DetAdjugate da = det_and_adjugate(theta, z);
        double value = da.adj.cwiseAbs().sum();
        if (!std::isfinite(value)) throw Error(Errc::numerical, "non-finite", "adjugate is not finite on the path");
        inf = std::min(inf, value);
        rep.path.push_back(z);
        rep.values.push_back(value);
        rep.running_inf.push_back(inf);
    }
    rep.decays_below_threshold = !rep.running_inf.empty() && rep.running_inf.back() < threshold;
    return rep;
}

std::string corona_csv(const CoronaScanReport &scan) {
    std::ostringstream os;
    os << std::setprecision(17) << "l,z,value,running_inf\n";
    for (std::size_t i = 0; i < scan.path.size(); ++i)
        os << i + 1 << ',' << scan.path[i].real() << ',' << scan.values[i] << ',' << scan.running_inf[i] << '\n';
    return os.str();
}

UnicellularReport demo_unicellular(double a1, double a2, int depth, const BoundaryGrid &grid) {
    if (!(a1 > 0.0) || !(a2 > 0.0) || !std::isfinite(a1) || !std::isfinite(a2))
        throw Error(Errc::input, "parameter", "a1 and a2 must be positive");
    UnicellularReport rep;
    rep.a1 = a1;
    rep.a2 = a2;
    const DiscFunction t1 = DiscFunction::singular_exp(a1);
    const DiscFunction t2 = DiscFunction::singular_exp(a2);
    const DiscFunction t12 = DiscFunction::singular_exp(a1 + a2);
    const MatrixInnerFunction theta = example_theta(t1, t2);
    rep.isometry = certify_isometry(theta, grid, 1);

    const int g = grid.size();
    const auto ts = theta.sample(grid);
    const CVec target = t12.sample(grid);
    for (int j = 0; j < g; ++j) {
        if (j <= 1 || j == g - 1) {
            ++rep.det_excluded_cells;
            continue;
        }
        cplx det = ts[0](j) * ts[3](j) - ts[1](j) * ts[2](j);
        rep.det_residual = std::max(rep.det_residual, std::abs(det + target(j)));
    }

    for (cplx z : halton_disc(100)) {
        rep.product_identity = std::max(rep.product_identity, std::abs(t1(z) * t2(z) - t12(z)));
        rep.adjugate_residual = std::max(rep.adjugate_residual, det_and_adjugate(theta, z).identity_residual);
    }

    rep.scan = corona_infimum_scan(theta, corona_path(depth));
    for (cplx z : rep.scan.path) rep.theta11_abs.push_back(std::abs(theta.at(0, 0)(z)));
    return rep;
}

} // namespace msl
