#include "msl/model.hpp"

#include <cmath>

#include "msl/operator.hpp"

namespace msl {

namespace {

cplx unit_phase(cplx l) { return l == cplx(0.0) ? cplx(1.0) : -std::abs(l) / l; }

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

double hermitian_deviation(const CMat &g) {
    CMat d = g - CMat::Identity(g.rows(), g.cols());
    if (d.rows() == 1) return std::abs(d(0, 0));
    Eigen::SelfAdjointEigenSolver<CMat> es(d, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

std::vector<bool> excluded_mask(const MatrixInnerFunction &m, const BoundaryGrid &grid, int radius) {
    std::vector<bool> mask(grid.size(), false);
    for (const DiscFunction &f : m.entries()) {
        auto s = singular_cells(f, grid, radius);
        for (int j = 0; j < grid.size(); ++j) mask[j] = mask[j] || s[j];
    }
    return mask;
}

IsometryCertificate certify_gram(const MatrixInnerFunction &m, const BoundaryGrid &grid, int radius,
                                 bool coisometry) {
    IsometryCertificate cert;
    auto mask = excluded_mask(m, grid, radius);
    auto s = m.sample(grid);
    CMat v(m.rows(), m.cols());
    for (int j = 0; j < grid.size(); ++j) {
        if (mask[j]) {
            ++cert.excluded_cells;
            continue;
        }
        bool ok = true;
        for (int r = 0; r < m.rows(); ++r)
            for (int c = 0; c < m.cols(); ++c) {
                v(r, c) = s[r * m.cols() + c](j);
                ok = ok && finite(v(r, c));
            }
        if (!ok) {
            ++cert.excluded_cells;
            continue;
        }
        CMat g = coisometry ? CMat(v * v.adjoint()) : CMat(v.adjoint() * v);
        cert.deviation = std::max(cert.deviation, hermitian_deviation(g));
        ++cert.checked_points;
    }
    return cert;
}

} // namespace

cplx FiniteModelSpace::basis(int n, cplx z) const {
    const auto &l = b.zeros();
    cplx v = std::sqrt(1.0 - std::norm(l[n])) / (1.0 - std::conj(l[n]) * z);
    for (int k = 0; k < n; ++k) v *= blaschke_factor(l[k], z);
    return v;
}

FiniteModelSpace model_space(const BlaschkeProduct &b, const BoundaryGrid &quadrature) {
    if (b.degree() == 0) throw Error(Errc::input, "empty-zero-list", "model space needs at least one zero");
    FiniteModelSpace s;
    s.b = b;
    s.dim = b.degree();
    const auto &l = b.zeros();
    for (int i = 0; i < s.dim; ++i)
        for (int k = i + 1; k < s.dim; ++k) {
            double d = std::abs(l[i] - l[k]);
            if (d > 0.0 && d < 1e-10) s.warnings.push_back("ill-conditioned-basis");
        }
    const int g = quadrature.size();
    CMat e(s.dim, g);
    for (int j = 0; j < g; ++j) {
        cplx z = quadrature.point(j);
        for (int n = 0; n < s.dim; ++n) e(n, j) = s.basis(n, z);
    }
    CMat gram = e.conjugate() * e.transpose() / static_cast<double>(g);
    s.gram_residual = (gram - CMat::Identity(s.dim, s.dim)).cwiseAbs().maxCoeff();
    return s;
}

CMat compressed_shift_matrix(const BlaschkeProduct &b) {
    const auto &l = b.zeros();
    const int d = b.degree();
    std::vector<double> s(d);
    std::vector<cplx> u(d + 1, 1.0);
    for (int n = 0; n < d; ++n) {
        s[n] = std::sqrt(1.0 - std::norm(l[n]));
        u[n + 1] = u[n] * unit_phase(l[n]);
    }
    CMat t = CMat::Zero(d, d);
    for (int j = 0; j < d; ++j) {
        t(j, j) = l[j];
        cplx p = 1.0;
        for (int k = j - 1; k >= 0; --k) {
            t(j, k) = s[j] * s[k] * p * u[k] * std::conj(u[j]);
            p *= -std::conj(l[k]);
        }
    }
    return t;
}

CompressedShiftOperator compressed_shift(const FiniteModelSpace &space) {
    CompressedShiftOperator op;
    op.matrix = compressed_shift_matrix(space.b);
    op.norm = linalg::op_norm(op.matrix);
    op.annihilation = linalg::op_norm(apply_blaschke(op.matrix, space.b));
    return op;
}

MatrixInnerFunction::MatrixInnerFunction(int rows, int cols, std::vector<DiscFunction> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (rows < 1 || cols < 1 || static_cast<int>(entries_.size()) != rows * cols)
        throw Error(Errc::input, "shape", "entry count does not match the matrix shape");
}

CMat MatrixInnerFunction::operator()(cplx z) const {
    CMat m(rows_, cols_);
    for (int r = 0; r < rows_; ++r)
        for (int c = 0; c < cols_; ++c) m(r, c) = at(r, c)(z);
    return m;
}

std::vector<CVec> MatrixInnerFunction::sample(const BoundaryGrid &grid) const {
    std::vector<CVec> out;
    out.reserve(entries_.size());
    for (const DiscFunction &f : entries_) out.push_back(f.sample(grid));
    return out;
}

std::vector<cplx> MatrixInnerFunction::singularities() const {
    std::vector<cplx> out;
    for (const DiscFunction &f : entries_)
        for (cplx s : f.singularities()) {
            bool seen = false;
            for (cplx t : out) seen = seen || std::abs(t - s) < 1e-15;
            if (!seen) out.push_back(s);
        }
    return out;
}

IsometryCertificate certify_isometry(const MatrixInnerFunction &theta, const BoundaryGrid &grid, int r) {
    return certify_gram(theta, grid, r, false);
}

IsometryCertificate certify_coisometry(const MatrixInnerFunction &phi, const BoundaryGrid &grid, int r) {
    return certify_gram(phi, grid, r, true);
}

MatrixInnerFunction diagonal_theta(const std::vector<BlaschkeProduct> &blocks, bool require_nested) {
    const int m = static_cast<int>(blocks.size());
    if (m == 0) throw Error(Errc::input, "empty-block-list", "need at least one block");
    if (require_nested) {
        for (int n = 1; n < m; ++n)
            for (cplx z : blocks[n].zeros()) {
                const auto &prev = blocks[n - 1].zeros();
                if (std::find(prev.begin(), prev.end(), z) == prev.end())
                    throw Error(Errc::precondition, "not-nested", "zero sets must decrease along the diagonal");
            }
    }
    std::vector<DiscFunction> e;
    for (int r = 0; r < m; ++r)
        for (int c = 0; c < m; ++c)
            e.push_back(r == c ? DiscFunction::blaschke(blocks[r]) : DiscFunction::constant(0.0));
    return MatrixInnerFunction(m, m, std::move(e));
}

CMat diagonal_theta_shift(const std::vector<BlaschkeProduct> &blocks) {
    int d = 0;
    for (const auto &b : blocks) d += b.degree();
    CMat t = CMat::Zero(d, d);
    int off = 0;
    for (const auto &b : blocks) {
        t.block(off, off, b.degree(), b.degree()) = compressed_shift_matrix(b);
        off += b.degree();
    }
    return t;
}

MatrixInnerFunction example_theta(const DiscFunction &t1, const DiscFunction &t2) {
    using F = DiscFunction;
    const cplx t0 = t1(0.0);
    const double c = 1.0 / std::sqrt(1.0 + std::norm(t0));
    const F one = F::constant(1.0);
    const F z = F::chi();
    const F d = F::diff_quotient(t1);
    const F half_c = F::constant(c / 2.0);
    const F t0bar = F::constant(std::conj(t0));
    std::vector<F> e{
        half_c * t2 * ((one - z) * d - F::constant(2.0 * t0)),
        half_c * ((one + z) * d + F::constant(2.0 * t0)),
        half_c * t2 * (one + z + (one - z) * t1 * t0bar),
        half_c * (one - z + (one + z) * t1 * t0bar),
    };
    return MatrixInnerFunction(2, 2, std::move(e));
}

DetAdjugate det_and_adjugate(const CMat &m) {
    const auto n = m.rows();
    if (n != m.cols()) throw Error(Errc::input, "not-square", "determinant needs a square matrix");
    DetAdjugate out;
    out.det = m.determinant();
    out.adj = CMat(n, n);
    if (n == 1) {
        out.adj(0, 0) = 1.0;
    } else {
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j) {
                CMat minor(n - 1, n - 1);
                for (Eigen::Index r = 0, rr = 0; r < n; ++r) {
                    if (r == j) continue;
                    for (Eigen::Index c = 0, cc = 0; c < n; ++c) {
                        if (c == i) continue;
                        minor(rr, cc++) = m(r, c);
                    }
                    ++rr;
                }
                out.adj(i, j) = (((i + j) % 2) ? -1.0 : 1.0) * minor.determinant();
            }
    }
    out.identity_residual = (m * out.adj - out.det * CMat::Identity(n, n)).norm();
    return out;
}

DetAdjugate det_and_adjugate(const MatrixInnerFunction &theta, cplx z) { return det_and_adjugate(theta(z)); }

CVec taylor_coefficients(const DiscFunction &f, int count, const BoundaryGrid &grid) {
    int g = grid.size();
    while (g < 2 * count) g *= 2;
    const BoundaryGrid q(g);
    CVec c;
    if (f.singularities().empty()) {
        c = fft::coefficients(f.sample(q));
        return c.head(count);
    }
    const double rho = 1.0 - 4.0 / g;
    CVec s(g);
    for (int j = 0; j < g; ++j) s(j) = f(rho * q.point(j));
    c = fft::coefficients(s);
    CVec out(count);
    for (int k = 0; k < count; ++k) out(k) = c(k) / std::pow(rho, k);
    return out;
}

CMat model_projector(const MatrixInnerFunction &theta, int k, const BoundaryGrid &grid) {
    const int n = theta.rows(), m = theta.cols();
    CMat t = CMat::Zero(static_cast<Eigen::Index>(n) * k, static_cast<Eigen::Index>(m) * k);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < m; ++c) {
            if (theta.at(r, c).is_zero()) continue;
            CVec coef = taylor_coefficients(theta.at(r, c), k, grid);
            for (int i = 0; i < k; ++i)
                for (int j = 0; j <= i; ++j) t(r * k + i, c * k + j) = coef(i - j);
        }
    const linalg::Svd f = linalg::svd(t);
    const RVec &s = f.s;
    int rank = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > 1e-8) ++rank;
    CMat q = f.u.leftCols(rank);
    return CMat::Identity(t.rows(), t.rows()) - q * q.adjoint();
}

ModelProjection project_model(const CVec &x, int k, const MatrixInnerFunction &theta, const BoundaryGrid &grid) {
    const int n = theta.rows(), m = theta.cols();
    if (x.size() != static_cast<Eigen::Index>(n) * k)
        throw Error(Errc::input, "shape", "vector length must be channels * K");
    ModelProjection out;
    out.x = model_projector(theta, k, grid) * x;

    int g = grid.size();
    while (g < 4 * k) g *= 2;
    const BoundaryGrid q(g);
    auto ts = theta.sample(q);
    for (auto &v : ts)
        for (Eigen::Index j = 0; j < v.size(); ++j)
            if (!finite(v(j))) v(j) = 0.0;
    std::vector<CVec> xs(n);
    for (int r = 0; r < n; ++r) {
        CVec c = CVec::Zero(g);
        c.head(k) = x.segment(static_cast<Eigen::Index>(r) * k, k);
        xs[r] = fft::samples(c);
    }
    double tail = 0.0;
    std::vector<CVec> ps(m);
    for (int c = 0; c < m; ++c) {
        CVec y = CVec::Zero(g);
        for (int r = 0; r < n; ++r) y += ts[r * m + c].conjugate().cwiseProduct(xs[r]);
        CVec yc = fft::coefficients(y);
        tail += yc.segment(k, g / 2 - k).squaredNorm();
        CVec keep = CVec::Zero(g);
        keep.head(k) = yc.head(k);
        ps[c] = fft::samples(keep);
    }
    CVec formula(static_cast<Eigen::Index>(n) * k);
    for (int r = 0; r < n; ++r) {
        CVec v = CVec::Zero(g);
        for (int c = 0; c < m; ++c) v += ts[r * m + c].cwiseProduct(ps[c]);
        CVec vc = fft::coefficients(v);
        formula.segment(static_cast<Eigen::Index>(r) * k, k) = x.segment(static_cast<Eigen::Index>(r) * k, k) - vc.head(k);
    }
    out.formula_gap = (formula - out.x).norm();
    out.tail_energy = std::sqrt(tail);
    out.overflow_warning = out.tail_energy > 1e-6 * x.norm();
    return out;
}

} // namespace msl
