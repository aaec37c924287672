#include "msl/operator.hpp"

#include <algorithm>
#include <cmath>

namespace msl {

namespace {

bool near_zero_gap(cplx a, cplx b) {
    double g = std::abs(a - b);
    return g > 1e-12 && g < 1e-6;
}

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

BlaschkeProduct product_of(const std::vector<BlaschkeProduct> &fs, std::size_t count) {
    std::vector<cplx> z;
    for (std::size_t i = 0; i < count; ++i) z.insert(z.end(), fs[i].zeros().begin(), fs[i].zeros().end());
    return BlaschkeProduct(std::move(z));
}

} // namespace

OperatorMatrix OperatorMatrix::from(CMat m) {
    if (m.rows() != m.cols()) throw Error(Errc::input, "not-square", "operator matrix must be square");
    OperatorMatrix op;
    op.norm = linalg::op_norm(m);
    op.contraction = op.norm <= 1.0 + 1e-8;
    op.m = std::move(m);
    return op;
}

CMat apply_blaschke(const CMat &t, const BlaschkeProduct &b) {
    if (t.rows() != t.cols()) throw Error(Errc::input, "not-square", "functional calculus needs a square matrix");
    const auto d = t.rows();
    const CMat id = CMat::Identity(d, d);
    CMat out = b.constant() * id;
    for (cplx l : b.zeros()) {
        if (l == cplx(0.0)) {
            out = out * t;
            continue;
        }
        CMat m = id - std::conj(l) * t;
        Eigen::PartialPivLU<CMat> lu(m);
        if (!(lu.rcond() > 1e-13))
            throw Error(Errc::numerical, "resolvent-failure", "I - conj(lambda) T is numerically singular");
        out = out * ((std::abs(l) / l) * (l * id - t) * lu.inverse());
    }
    return out;
}

std::vector<int> eigenspace_dims(const CMat &t, const std::vector<cplx> &lambdas, double rank_tol) {
    const auto d = t.rows();
    const double cut = rank_tol * std::max(linalg::op_norm(t), 1e-300);
    std::vector<int> k;
    for (cplx l : lambdas) {
        CMat m = t - l * CMat::Identity(d, d);
        k.push_back(static_cast<int>(d) - linalg::numerical_rank(m, cut));
    }
    return k;
}

MultiplicityReport multiplicity(const CMat &t, double rank_tol) {
    MultiplicityReport rep;
    const auto d = t.rows();
    if (d == 0) return rep;
    const double nt = std::max(linalg::op_norm(t), 1e-300);
    Eigen::ComplexEigenSolver<CMat> es(t, false);
    const CVec ev = es.eigenvalues();
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        for (Eigen::Index j = i + 1; j < ev.size(); ++j)
            rep.clustered_warning = rep.clustered_warning || near_zero_gap(ev(i), ev(j));
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        bool seen = false;
        for (cplx r : rep.eigenvalues) seen = seen || std::abs(r - ev(i)) <= 1e-6 * std::max(1.0, nt);
        if (!seen) rep.eigenvalues.push_back(ev(i));
    }
    const CMat id = CMat::Identity(d, d);
    for (cplx l : rep.eigenvalues) {
        CMat n = t - l * id;
        const double nn = std::max(linalg::op_norm(n), 1e-300);
        std::vector<int> w;
        CMat p = id;
        int prev = static_cast<int>(d);
        double scale = 1.0;
        for (Eigen::Index j = 1; j <= d; ++j) {
            p = p * n;
            scale *= nn;
            int r = linalg::numerical_rank(p, rank_tol * scale);
            if (prev - r == 0) break;
            w.push_back(prev - r);
            prev = r;
        }
        if (!w.empty()) rep.mu = std::max(rep.mu, w.front());
        rep.weyr.push_back(std::move(w));
    }
    return rep;
}

DefectReport defects(const CMat &t, double cut) {
    const auto d = t.rows();
    if (linalg::op_norm(t) > 1.0 + 1e-8)
        throw Error(Errc::precondition, "not-a-contraction", "defects need a contraction");
    DefectReport rep;
    rep.cut = cut;
    const CMat id = CMat::Identity(d, d);
    auto profile = [&](const CMat &m) {
        Eigen::SelfAdjointEigenSolver<CMat> es(m, Eigen::EigenvaluesOnly);
        RVec v = es.eigenvalues().cwiseAbs();
        std::sort(v.data(), v.data() + v.size(), std::greater<double>());
        return v;
    };
    rep.sv_t = profile(id - t.adjoint() * t);
    rep.sv_t_star = profile(id - t * t.adjoint());
    for (Eigen::Index i = 0; i < d; ++i) {
        rep.d_t += rep.sv_t(i) > cut;
        rep.d_t_star += rep.sv_t_star(i) > cut;
    }
    return rep;
}

std::vector<CMat> intertwiner_space(const CMat &t, const CMat &r, double cut) {
    const auto d1 = t.rows(), d2 = r.rows();
    CMat l = linalg::kron(t.transpose(), CMat::Identity(d2, d2)) - linalg::kron(CMat::Identity(d1, d1), r);
    const double scale = std::max(linalg::op_norm(t) + linalg::op_norm(r), 1e-300);
    CMat ns = linalg::null_space(l, cut * scale);
    std::vector<CMat> basis;
    for (Eigen::Index c = 0; c < ns.cols(); ++c) {
        CVec v = ns.col(c);
        basis.push_back(Eigen::Map<const CMat>(v.data(), d2, d1));
    }
    return basis;
}

SimilarityCertificate certify_similarity(const CMat &x, const CMat &t, const CMat &r) {
    SimilarityCertificate c;
    const double nx = linalg::op_norm(x);
    if (nx == 0.0) {
        c.x = x;
        return c;
    }
    c.x = x / nx;
    c.residual = linalg::op_norm(c.x * t - r * c.x);
    c.sigma_min = (x.rows() == x.cols()) ? linalg::sigma_min(c.x) : 0.0;
    c.condition = c.sigma_min > 0.0 ? 1.0 / c.sigma_min : std::numeric_limits<double>::infinity();
    c.accepted = c.residual <= 1e-8 && c.sigma_min >= 1e-8;
    return c;
}

std::optional<SimilarityCertificate> find_similarity(const CMat &t, const CMat &r, std::uint64_t seed, int draws) {
    if (t.rows() != r.rows()) return std::nullopt;
    auto basis = intertwiner_space(t, r);
    if (basis.empty()) return std::nullopt;
    CMat best;
    double best_sigma = -1.0;
    for (int k = 0; k < draws; ++k) {
        auto rng = make_rng(seed, 1000 + static_cast<std::uint64_t>(k));
        CMat x = CMat::Zero(r.rows(), t.rows());
        for (const CMat &b : basis) x += complex_normal(rng) * b;
        const double nx = linalg::op_norm(x);
        if (nx == 0.0) continue;
        x /= nx;
        double s = linalg::sigma_min(x);
        if (s > best_sigma) {
            best_sigma = s;
            best = x;
        }
    }
    if (best_sigma < 1e-8) return std::nullopt;
    return certify_similarity(best, t, r);
}

JordanModel jordan_model(const CMat &t, const std::vector<cplx> &lambdas, double rank_tol) {
    const auto d = t.rows();
    if (d == 0 || lambdas.empty()) throw Error(Errc::input, "empty", "need a nonempty operator and point set");
    JordanModel jm;
    jm.carleson = carleson_constant(lambdas);
    if (!(jm.carleson > 0.0)) throw Error(Errc::precondition, "carleson-violation", "point set is not separated");
    jm.annihilation = linalg::op_norm(apply_blaschke(t, BlaschkeProduct(lambdas, 1.0, true)));
    if (jm.annihilation > 1e-6)
        throw Error(Errc::precondition, "not-annihilated", "B(T) does not vanish for the given points");

    auto k = eigenspace_dims(t, lambdas, rank_tol);
    int total = 0;
    for (int v : k) total += v;
    if (total != d) throw Error(Errc::precondition, "non-diagonalizable", "eigenspaces do not span the space");
    for (std::size_t i = 0; i < lambdas.size(); ++i)
        if (k[i] > 0) {
            jm.lambdas.push_back(lambdas[i]);
            jm.k.push_back(k[i]);
        }
    jm.m = *std::max_element(jm.k.begin(), jm.k.end());
    for (int n = 1; n <= jm.m; ++n) {
        std::vector<cplx> z;
        for (std::size_t i = 0; i < jm.lambdas.size(); ++i)
            if (jm.k[i] >= n) z.push_back(jm.lambdas[i]);
        jm.blocks.emplace_back(std::move(z), 1.0, true);
    }
    jm.theta = diagonal_theta(jm.blocks, true);
    jm.t_theta = diagonal_theta_shift(jm.blocks);

    const double cut_t = rank_tol * std::max(linalg::op_norm(t), 1e-300);
    const double cut_m = rank_tol * std::max(linalg::op_norm(jm.t_theta), 1e-300);
    const CMat id = CMat::Identity(d, d);
    CMat v(d, d), w(d, d);
    Eigen::Index col = 0;
    for (std::size_t i = 0; i < jm.lambdas.size(); ++i) {
        CMat a = linalg::null_space(t - jm.lambdas[i] * id, cut_t);
        CMat b = linalg::null_space(jm.t_theta - jm.lambdas[i] * id, cut_m);
        if (a.cols() != jm.k[i] || b.cols() != jm.k[i])
            throw Error(Errc::numerical, "eigenspace-mismatch", "model eigenspace dimension differs");
        v.middleCols(col, a.cols()) = a;
        w.middleCols(col, b.cols()) = b;
        col += a.cols();
    }
    jm.x_raw = w * v.inverse();
    jm.cert = certify_similarity(jm.x_raw, t, jm.t_theta);
    return jm;
}

CMat TriangulationResult::block(int i, int j) const {
    return t_tri.block(offsets[i], offsets[j], sizes[i], sizes[j]);
}

namespace {

void triangulate_rec(const CMat &t, const std::vector<BlaschkeProduct> &factors, std::size_t n, double rank_tol,
                     CMat &u, std::vector<int> &sizes) {
    const auto d = t.rows();
    if (n == 1 || d == 0) {
        u = CMat::Identity(d, d);
        sizes.assign(n, 0);
        sizes[0] = static_cast<int>(d);
        return;
    }
    CMat f = apply_blaschke(t, product_of(factors, n - 1));
    const double cut = rank_tol * std::max(1.0, linalg::op_norm(f));
    CMat k = linalg::null_space(f, cut);
    CMat qc = linalg::complement(k, d);
    CMat r = k.adjoint() * t * k;
    CMat ur;
    std::vector<int> sr;
    triangulate_rec(r, factors, n - 1, rank_tol, ur, sr);
    u.resize(d, d);
    u.leftCols(k.cols()) = k * ur;
    u.rightCols(qc.cols()) = qc;
    sizes = sr;
    sizes.push_back(static_cast<int>(qc.cols()));
}

} // namespace

TriangulationResult triangulate(const CMat &t, const std::vector<BlaschkeProduct> &factors, double precondition_tol,
                                double rank_tol) {
    if (factors.empty()) throw Error(Errc::input, "empty-factors", "need at least one factor");
    const double pre = linalg::op_norm(apply_blaschke(t, product_of(factors, factors.size())));
    if (pre > precondition_tol)
        throw Error(Errc::precondition, "annihilation-failure", "the product of the factors does not annihilate T");
    TriangulationResult res;
    triangulate_rec(t, factors, factors.size(), rank_tol, res.u, res.sizes);
    res.t_tri = res.u.adjoint() * t * res.u;
    int off = 0;
    for (int s : res.sizes) {
        res.offsets.push_back(off);
        off += s;
    }
    for (std::size_t i = 0; i < res.sizes.size(); ++i)
        for (std::size_t j = 0; j < i; ++j) {
            auto b = res.t_tri.block(res.offsets[i], res.offsets[j], res.sizes[i], res.sizes[j]);
            if (b.size()) res.zeroed_block_norm = std::max(res.zeroed_block_norm, linalg::op_norm(b));
            b.setZero();
        }
    for (std::size_t i = 0; i < res.sizes.size(); ++i) {
        if (res.sizes[i] == 0) {
            res.residuals.push_back(0.0);
            continue;
        }
        res.residuals.push_back(linalg::op_norm(apply_blaschke(res.block(static_cast<int>(i), static_cast<int>(i)), factors[i])));
    }
    res.reassembly_error = linalg::op_norm(res.u * res.t_tri * res.u.adjoint() - t);
    return res;
}

LiftResult takahashi_lift(const CMat &t1, const CMat &a, const CMat &t2, const CMat &y2, const CMat &s) {
    const auto h1 = t1.rows(), m = s.rows();
    if (a.rows() != h1 || a.cols() != t2.rows() || y2.rows() != t2.rows() || y2.cols() != m)
        throw Error(Errc::input, "shape", "inconsistent block shapes");
    LiftResult res;
    res.intertwining = linalg::op_norm(y2 * s - t2 * y2);
    if (res.intertwining > 1e-8 * std::max(1.0, linalg::op_norm(y2)))
        throw Error(Errc::precondition, "not-intertwining", "Y2 S differs from T2 Y2");
    const CMat rhs_m = a * y2;
    res.scale = linalg::op_norm(a) * linalg::op_norm(y2);
    if (rhs_m.norm() == 0.0) {
        res.z = CMat::Zero(h1, m);
        return res;
    }
    CMat l = linalg::kron(s.transpose(), CMat::Identity(h1, h1)) - linalg::kron(CMat::Identity(m, m), t1);
    CVec rhs = Eigen::Map<const CVec>(rhs_m.data(), rhs_m.size());
    CVec z = linalg::min_norm_solve(linalg::svd(l), rhs, 1e-10);
    res.z = Eigen::Map<const CMat>(z.data(), h1, m);
    res.residual = linalg::op_norm(res.z * s - t1 * res.z - rhs_m);
    if (res.residual > 1e-6 * res.scale)
        throw Error(Errc::numerical, "unsolvable", "lifting equation has no solution at model scale (residual " +
                                                       std::to_string(res.residual) + ")");
    return res;
}

FiniteDefectResult similar_to_finite_defect(const CMat &t, const std::vector<BlaschkeProduct> &factors,
                                            double rank_tol) {
    FiniteDefectResult out;
    out.tri = triangulate(t, factors, 1e-6, rank_tol);
    const auto &tri = out.tri;
    const BlaschkeProduct full = product_of(factors, factors.size());
    const int deg = full.degree();

    CMat y, s, t_acc;
    int acc = 0; // rows of the triangular part already covered
    for (std::size_t n = 0; n < factors.size(); ++n) {
        const int sz = tri.sizes[n];
        if (sz == 0) continue;
        const int off = tri.offsets[n];
        const CMat tn = tri.t_tri.block(off, off, sz, sz);
        std::vector<cplx> cand;
        for (cplx z : factors[n].zeros())
            if (std::find(cand.begin(), cand.end(), z) == cand.end()) cand.push_back(z);
        JordanModel jm = jordan_model(tn, cand, rank_tol);

        // channel m of the model lives in H(B) with the zeros of B_{n,m} listed first
        std::vector<CMat> shifts;
        CMat sel = CMat::Zero(sz, static_cast<Eigen::Index>(jm.m) * deg);
        int row = 0;
        for (int m = 0; m < jm.m; ++m) {
            std::vector<cplx> order = jm.blocks[m].zeros();
            std::vector<cplx> rest = full.zeros();
            for (cplx z : order) rest.erase(std::find(rest.begin(), rest.end(), z));
            order.insert(order.end(), rest.begin(), rest.end());
            shifts.push_back(compressed_shift_matrix(BlaschkeProduct(order)));
            for (int i = 0; i < jm.blocks[m].degree(); ++i) sel(row++, m * deg + i) = 1.0;
        }
        const CMat sn = block_diag(shifts);
        const CMat yn = jm.x_raw.inverse() * sel;
        if (acc == 0) {
            y = yn;
            s = sn;
        } else {
            const CMat a = tri.t_tri.block(0, off, acc, sz);
            LiftResult lift = takahashi_lift(t_acc, a, tn, yn, sn);
            out.lift_residuals.push_back(lift.residual);
            CMat ny = CMat::Zero(acc + sz, y.cols() + yn.cols());
            ny.topLeftCorner(acc, y.cols()) = y;
            ny.topRightCorner(acc, yn.cols()) = lift.z;
            ny.bottomRightCorner(sz, yn.cols()) = yn;
            y = ny;
            s = block_diag({s, sn});
        }
        acc += sz;
        t_acc = tri.t_tri.topLeftCorner(acc, acc);
        out.blocks.push_back(std::move(jm));
    }

    const auto d = t.rows();
    out.model_dim = static_cast<int>(y.cols());
    out.intertwining_residual = linalg::op_norm(y * s - tri.t_tri * y);
    const linalg::Svd f = linalg::svd(y);
    const RVec &sv = f.s;
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > rank_tol * std::max(1.0, sv(0))) ++rank;
    if (rank < d) throw Error(Errc::numerical, "rank-deficient-range", "the assembled map is not onto");
    out.kernel_dim = out.model_dim - rank;
    const CMat q = f.v.leftCols(rank);
    out.r = q.adjoint() * s * q;
    const CMat z = tri.u * (y * q);
    out.cert = certify_similarity(z.inverse(), t, out.r);
    out.defects = defects(out.r);
    return out;
}

} // namespace msl
