#include "msl/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace msl {

namespace {

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

CMat block_diag(const std::vector<CMat> &blocks) {
    Eigen::Index r = 0, c = 0;
    for (const CMat &b : blocks) {
        r += b.rows();
        c += b.cols();
    }
    CMat out = CMat::Zero(r, c);
    r = c = 0;
    for (const CMat &b : blocks) {
        out.block(r, c, b.rows(), b.cols()) = b;
        r += b.rows();
        c += b.cols();
    }
    return out;
}

CMat stack(const std::vector<CMat> &ys) {
    Eigen::Index cols = 0;
    for (const CMat &y : ys) cols += y.cols();
    CMat out(ys.front().rows(), cols);
    cols = 0;
    for (const CMat &y : ys) {
        out.middleCols(cols, y.cols()) = y;
        cols += y.cols();
    }
    return out;
}

// Grid-world helpers; `n` channels of `g` entries each.
CVec to_samples(const CVec &coeffs, int n, int g) {
    CVec out(coeffs.size());
    for (int c = 0; c < n; ++c) out.segment(c * g, g) = fft::samples(coeffs.segment(c * g, g));
    return out;
}

CVec to_coefficients(const CVec &samples, int n, int g) {
    CVec out(samples.size());
    for (int c = 0; c < n; ++c) out.segment(c * g, g) = fft::coefficients(samples.segment(c * g, g));
    return out;
}

// x - Theta P_+ Theta* x on samples
CVec project_samples(const std::vector<CVec> &theta, int rows, int cols, const CVec &x, int g) {
    CVec out = x;
    for (int l = 0; l < cols; ++l) {
        CVec v = CVec::Zero(g);
        for (int c = 0; c < rows; ++c) v += theta[c * cols + l].conjugate().cwiseProduct(x.segment(c * g, g));
        CVec f = fft::coefficients(v);
        f.tail(g / 2).setZero();
        v = fft::samples(f);
        for (int c = 0; c < rows; ++c) out.segment(c * g, g) -= theta[c * cols + l].cwiseProduct(v);
    }
    return out;
}

// multiplication by zeta on coefficients
CVec shift_coefficients(const CVec &y, int n, int g) {
    CVec out(y.size());
    for (int c = 0; c < n; ++c) {
        out(c * g) = y(c * g + g - 1);
        out.segment(c * g + 1, g - 1) = y.segment(c * g, g - 1);
    }
    return out;
}

CVec compressed_shift_apply(const ShiftSubspaces &s, const CVec &y) {
    const int n = s.channels(), g = s.grid_size();
    CVec z = to_samples(shift_coefficients(y, n, g), n, g);
    return to_coefficients(project_samples(s.theta_samples, n, s.pair.theta.cols(), z, g), n, g);
}

CMat window_rows(const CMat &m, int n, int g) {
    const int q = g / 4;
    CMat out(n * (2 * q - 1), m.cols());
    Eigen::Index r = 0;
    for (int c = 0; c < n; ++c) {
        out.middleRows(r, q) = m.middleRows(c * g, q);
        r += q;
        out.middleRows(r, q - 1) = m.middleRows(c * g + g - q + 1, q - 1);
        r += q - 1;
    }
    return out;
}

struct LeastSquares {
    CVec coeffs;
    double residual = 0.0;
};

LeastSquares solve_min_norm(const CMat &a, const CVec &x) {
    Eigen::HouseholderQR<CMat> qr(a);
    const Eigen::Index k = a.cols();
    CMat r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
    CVec qx = (qr.householderQ().adjoint() * x).head(k);
    LeastSquares out;
    out.coeffs = linalg::min_norm_solve(linalg::svd(r), qx, 1e-12);
    out.residual = (a * out.coeffs - x).norm();
    return out;
}

CMat truncated_shift(int k) {
    CMat s = CMat::Zero(k, k);
    for (int i = 0; i + 1 < k; ++i) s(i + 1, i) = 1.0;
    return s;
}

} // namespace

InnerPair make_inner_pair(const MatrixInnerFunction &theta, const MatrixInnerFunction &phi, const BoundaryGrid &grid,
                          double tol) {
    if (phi.cols() != theta.rows() || theta.cols() >= theta.rows() || phi.rows() + theta.cols() != theta.rows())
        throw Error(Errc::input, "shape", "expected Theta of size N x (N-M) and Phi of size M x N");
    InnerPair p;
    p.theta = theta;
    p.phi = phi;
    p.grid = grid;
    p.theta_cert = certify_isometry(theta, grid);
    p.phi_cert = certify_coisometry(phi, grid);
    if (p.theta_cert.deviation > tol) throw Error(Errc::precondition, "not-inner", "Theta is not a boundary isometry");
    if (p.phi_cert.deviation > tol)
        throw Error(Errc::precondition, "not-co-inner", "Phi is not a boundary co-isometry");
    const auto ts = theta.sample(grid);
    const auto ps = phi.sample(grid);
    const int g = grid.size();
    for (int j = 0; j < g; ++j) {
        CMat a(theta.rows(), theta.cols()), b(phi.rows(), phi.cols());
        for (int r = 0; r < a.rows(); ++r)
            for (int c = 0; c < a.cols(); ++c) a(r, c) = ts[r * a.cols() + c](j);
        for (int r = 0; r < b.rows(); ++r)
            for (int c = 0; c < b.cols(); ++c) b(r, c) = ps[r * b.cols() + c](j);
        if (!a.allFinite() || !b.allFinite()) continue;
        p.annihilation = std::max(p.annihilation, linalg::op_norm(b * a));
        p.column_energy_gap = std::max(p.column_energy_gap, std::abs(b.row(0).squaredNorm() - 1.0));
    }
    if (p.annihilation > tol) throw Error(Errc::precondition, "not-annihilating", "Phi Theta does not vanish");
    return p;
}

ShiftSubspaces build_shift_subspaces(const InnerPair &pair, int k, std::uint64_t seed, int tests, double lower_tol) {
    const int n = pair.theta.rows(), g = pair.grid.size(), l = pair.theta.cols();
    if (k < 8 || k > g / 2) throw Error(Errc::input, "truncation", "need 8 <= K <= G/2");
    if (pair.column_energy_gap > 1e-6)
        throw Error(Errc::precondition, "column-not-unimodular", "first row of Phi must have unit energy on the grid");

    ShiftSubspaces s;
    s.pair = pair;
    s.k = k;
    s.test_count = tests;
    std::vector<DiscFunction> column;
    for (int c = 0; c < n; ++c) column.push_back(pair.phi.at(0, c));
    NormalizedColumn nc = normalize_column(column, pair.grid);
    s.psi = build_psi(make_column(nc.reduced, pair.grid, 1e-9));
    s.theta_samples = pair.theta.sample(pair.grid);
    for (const CVec &v : s.theta_samples)
        if (!v.allFinite()) throw Error(Errc::unsupported, "singular-theta", "Theta needs boundary values everywhere");

    s.det_min = std::numeric_limits<double>::infinity();
    for (int j = 0; j < g; ++j) {
        s.psi_grid.push_back(s.psi.psi_on_grid(j) * nc.pre);
        s.det_min = std::min(s.det_min, std::abs(s.psi_grid.back().determinant()));
    }
    s.vartheta = s.psi.theta_samples;

    std::vector<CVec> phi_row;
    for (int c = 0; c < n; ++c) phi_row.push_back(column[c].sample(pair.grid));

    CVec zeta(g);
    for (int j = 0; j < g; ++j) zeta(j) = pair.grid.point(j);

    for (int idx = 0; idx < n; ++idx) {
        ShiftTypeSubspace sub;
        sub.index = idx;
        for (int j = 0; j < g; ++j) {
            cplx acc = 0.0;
            for (int c = 0; c < n; ++c) acc += phi_row[c](j) * s.psi_grid[j](idx, c);
            if (finite(acc) && finite(s.vartheta[idx](j)))
                sub.structure_residual = std::max(sub.structure_residual, std::abs(acc - s.vartheta[idx](j)));
        }

        CVec base(n * g);
        for (int c = 0; c < n; ++c)
            for (int j = 0; j < g; ++j) base(c * g + j) = s.psi_grid[j](idx, c);
        sub.y.resize(n * g, k);
        CVec power = CVec::Ones(g);
        for (int col = 0; col < k; ++col) {
            CVec x(n * g);
            for (int c = 0; c < n; ++c) x.segment(c * g, g) = base.segment(c * g, g).cwiseProduct(power);
            sub.y.col(col) = to_coefficients(project_samples(s.theta_samples, n, l, x, g), n, g);
            power = power.cwiseProduct(zeta);
        }

        CMat diff(n * g, k - 1);
        for (int col = 0; col + 1 < k; ++col) diff.col(col) = sub.y.col(col + 1) - compressed_shift_apply(s, sub.y.col(col));
        sub.intertwining = linalg::op_norm(diff);
        sub.intertwining_window = linalg::op_norm(window_rows(diff, n, g));
        sub.sigma_min = linalg::sigma_min(sub.y);

        auto rng = make_rng(seed, 100 + static_cast<std::uint64_t>(idx));
        sub.lower_bound = std::numeric_limits<double>::infinity();
        for (int t = 0; t < tests; ++t) {
            CVec h = CVec::Zero(k);
            for (int i = 0; i <= k / 2; ++i) h(i) = complex_normal(rng);
            sub.lower_bound = std::min(sub.lower_bound, (sub.y * h).norm() / h.norm());
        }
        if (sub.lower_bound < 1.0 - lower_tol)
            throw Error(Errc::certificate, "lower-bound-violation",
                        "||Y_n h|| fell below ||h||; retry with a larger truncation");
        s.subspaces.push_back(std::move(sub));
    }
    return s;
}

CVec model_project(const ShiftSubspaces &s, const CVec &coeffs) {
    const int n = s.channels(), g = s.grid_size();
    return to_coefficients(project_samples(s.theta_samples, n, s.pair.theta.cols(), to_samples(coeffs, n, g), g), n, g);
}

CVec embed_coefficients(const ShiftSubspaces &s, const CVec &x, int degree) {
    const int n = s.channels(), g = s.grid_size();
    if (degree > g / 2 || x.size() != static_cast<Eigen::Index>(n) * degree)
        throw Error(Errc::input, "shape", "vector must hold N blocks of at most G/2 coefficients");
    CVec out = CVec::Zero(n * g);
    for (int c = 0; c < n; ++c) out.segment(c * g, degree) = x.segment(c * degree, degree);
    return out;
}

DecompositionReport decompose_vector(const CVec &x, const ShiftSubspaces &s) {
    const int n = s.channels(), g = s.grid_size(), k = s.k;
    if (x.size() != static_cast<Eigen::Index>(n) * g) throw Error(Errc::input, "shape", "vector length must be N G");
    if ((x - model_project(s, x)).norm() > 1e-8 * std::max(1.0, x.norm()))
        throw Error(Errc::precondition, "not-in-model-space", "vector is not in the model space");
    if (s.det_min < 1e-10) throw Error(Errc::numerical, "ill-conditioned-inverse", "Psi is nearly singular on the grid");

    DecompositionReport rep;
    rep.k = k;

    // constructive route: h = (Psi^T)^{-1} x pointwise, truncated to degree < K
    CVec xs = to_samples(x, n, g);
    CVec hs(n * g);
    for (int j = 0; j < g; ++j) {
        CVec v(n);
        for (int c = 0; c < n; ++c) v(c) = xs(c * g + j);
        CVec h = s.psi_grid[j].transpose().partialPivLu().solve(v);
        for (int c = 0; c < n; ++c) hs(c * g + j) = h(c);
    }
    CVec hc = to_coefficients(hs, n, g);
    std::vector<CVec> constructive;
    CVec sum = CVec::Zero(n * g);
    for (int c = 0; c < n; ++c) {
        constructive.push_back(s.subspaces[c].y * hc.segment(c * g, k));
        sum += constructive.back();
    }
    rep.constructive_residual = (x - sum).norm();

    std::vector<CMat> ys;
    for (const auto &sub : s.subspaces) ys.push_back(sub.y);
    LeastSquares ls = solve_min_norm(stack(ys), x);
    rep.least_squares_residual = ls.residual;

    if (rep.constructive_residual <= rep.least_squares_residual) {
        rep.route = "constructive";
        rep.residual = rep.constructive_residual;
        rep.components = std::move(constructive);
    } else {
        rep.route = "least-squares";
        rep.residual = rep.least_squares_residual;
        for (int c = 0; c < n; ++c) rep.components.push_back(s.subspaces[c].y * ls.coeffs.segment(c * k, k));
    }
    for (const CVec &v : rep.components) rep.component_norms.push_back(v.norm());
    return rep;
}

std::vector<ConvergenceRow> decomposition_convergence(const InnerPair &pair, const CVec &x, int x_degree,
                                                      const std::vector<int> &ks, std::uint64_t seed) {
    std::vector<ConvergenceRow> rows;
    for (int k : ks) {
        ShiftSubspaces s = build_shift_subspaces(pair, k, seed);
        DecompositionReport r = decompose_vector(embed_coefficients(s, x, x_degree), s);
        rows.push_back({k, r.constructive_residual, r.least_squares_residual, r.residual});
    }
    return rows;
}

AssemblyResult assemble_similarity(const std::vector<CMat> &ys, const std::vector<CMat> &shifts, const CMat &t,
                                   double intertwining_tol) {
    if (ys.empty() || ys.size() != shifts.size()) throw Error(Errc::input, "shape", "need one shift per Y_n");
    const auto d = t.rows();
    AssemblyResult out;
    out.subspaces = static_cast<int>(ys.size());
    double ymax = 0.0;
    for (std::size_t i = 0; i < ys.size(); ++i) {
        if (ys[i].rows() != d || shifts[i].rows() != ys[i].cols() || shifts[i].cols() != ys[i].cols())
            throw Error(Errc::input, "shape", "Y_n must map the model space of S_n into the space of T");
        const double ny = linalg::op_norm(ys[i]);
        ymax = std::max(ymax, ny);
        const double res = linalg::op_norm(ys[i] * shifts[i] - t * ys[i]);
        out.intertwining = std::max(out.intertwining, res);
        if (res > intertwining_tol * std::max(1.0, ny))
            throw Error(Errc::precondition, "not-intertwining", "Y_n S_n differs from T Y_n");
    }
    const CMat y = stack(ys);
    const CMat s = block_diag(shifts);
    out.bound_ratio = ymax > 0.0 ? linalg::op_norm(y) / (std::sqrt(static_cast<double>(ys.size())) * ymax) : 0.0;

    const linalg::Svd f = linalg::svd(y);
    const RVec &sv = f.s;
    const double cut = 1e-8 * std::max(1.0, sv.size() ? sv(0) : 0.0);
    for (Eigen::Index i = 0; i < sv.size(); ++i) out.rank += sv(i) > cut;
    if (out.rank < d) throw Error(Errc::numerical, "rank-deficient-range", "combined range misses the target space");
    out.kernel_dim = static_cast<int>(y.cols()) - out.rank;
    const CMat q = f.v.leftCols(out.rank);
    out.r = q.adjoint() * s * q;
    const CMat z = y * q;
    out.z_residual = linalg::op_norm(z * out.r - t * z);
    out.cert = certify_similarity(z.inverse(), t, out.r);
    out.defects = defects(out.r);
    return out;
}

TruncatedAssembly assemble_truncated(const ShiftSubspaces &s) {
    std::vector<CMat> ys;
    for (const auto &sub : s.subspaces) ys.push_back(sub.y);
    const CMat y = stack(ys);
    const linalg::Svd f = linalg::svd(y);
    const RVec &sv = f.s;
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) rank += sv(i) > 1e-8 * std::max(1.0, sv(0));
    const CMat q = f.u.leftCols(rank);

    TruncatedAssembly out;
    CMat tq(q.rows(), rank);
    for (int c = 0; c < rank; ++c) tq.col(c) = compressed_shift_apply(s, q.col(c));
    out.t_compressed = q.adjoint() * tq;

    const CMat sk = truncated_shift(s.k);
    std::vector<CMat> zs, shifts;
    for (const CMat &yn : ys) {
        zs.push_back(q.adjoint() * yn);
        shifts.push_back(sk);
        const CMat d = zs.back() * sk - out.t_compressed * zs.back();
        out.restricted_intertwining = std::max(out.restricted_intertwining, linalg::op_norm(d.leftCols(s.k - 1)));
    }
    out.result = assemble_similarity(zs, shifts, out.t_compressed, std::numeric_limits<double>::infinity());
    return out;
}

C0Assembly assemble_c0_similarity(const std::vector<BlaschkeProduct> &varthetas, const std::vector<CMat> &ys,
                                  const CMat &t) {
    std::vector<CMat> shifts;
    std::vector<cplx> all;
    for (const auto &b : varthetas) {
        shifts.push_back(compressed_shift_matrix(b));
        all.insert(all.end(), b.zeros().begin(), b.zeros().end());
    }
    C0Assembly out;
    out.result = assemble_similarity(ys, shifts, t);
    out.annihilation = linalg::op_norm(apply_blaschke(out.result.r, BlaschkeProduct(all)));
    out.m = out.result.defects.d_t_star;
    return out;
}

UniquenessVerdict unique_representation_check(const std::vector<CMat> &bases, const CMat *t, double rank_tol) {
    UniquenessVerdict v;
    std::vector<CMat> qs;
    for (const CMat &b : bases) {
        const linalg::Svd f = linalg::svd(b);
        const RVec &sv = f.s;
        int r = 0;
        for (Eigen::Index i = 0; i < sv.size(); ++i) r += sv(i) > rank_tol * std::max(1.0, sv(0));
        qs.push_back(f.u.leftCols(r));
        v.dims.push_back(r);
    }
    for (std::size_t i = 0; i < qs.size(); ++i)
        for (std::size_t j = i + 1; j < qs.size(); ++j) {
            double c = 0.0;
            if (qs[i].cols() && qs[j].cols()) c = std::min(1.0, linalg::op_norm(qs[i].adjoint() * qs[j]));
            v.min_angles.push_back(std::acos(c));
        }
    int total = 0;
    for (int d : v.dims) total += d;
    if (total == 0) {
        v.unique = true;
        return v;
    }
    const CMat w = stack(qs);
    v.dim_sum = linalg::numerical_rank(w, rank_tol * std::max(1.0, linalg::op_norm(w)));
    v.unique = v.dim_sum == total;
    if (v.unique && t != nullptr && total == t->rows()) {
        std::vector<CMat> parts;
        for (const CMat &q : qs) {
            CMat c = q.adjoint() * (*t) * q;
            v.invariance_residual = std::max(v.invariance_residual, linalg::op_norm((*t) * q - q * c));
            parts.push_back(std::move(c));
        }
        v.cert = certify_similarity(w.inverse(), *t, block_diag(parts));
    }
    return v;
}

} // namespace msl
