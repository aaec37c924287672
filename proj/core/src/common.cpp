#include "msl/common.hpp"

#include <algorithm>

namespace msl {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    // splitmix64 over the pair
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream) {
    return std::mt19937_64(derive_seed(seed, stream));
}

cplx complex_normal(std::mt19937_64 &rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    double re = n(rng);
    double im = n(rng);
    return {re, im};
}

namespace linalg {

namespace {

Svd svd_square_ish(const CMat &a) {
    Svd out;
    if (std::min(a.rows(), a.cols()) > 64) {
        Eigen::BDCSVD<CMat> bdc(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
        out = {bdc.matrixU(), bdc.singularValues(), bdc.matrixV()};
        const double scale = std::max(1.0, out.s.size() ? out.s(0) : 0.0);
        const CMat rec = out.u * out.s.cast<cplx>().asDiagonal() * out.v.adjoint();
        if ((rec - a).norm() <= 1e-10 * scale * std::sqrt(static_cast<double>(a.cols()))) return out;
    }
    Eigen::JacobiSVD<CMat> jac(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    return {jac.matrixU(), jac.singularValues(), jac.matrixV()};
}

} // namespace

Svd svd(const CMat &a) {
    if (a.size() == 0) return {CMat(a.rows(), 0), RVec(), CMat(a.cols(), 0)};
    if (a.cols() > a.rows()) {
        Svd t = svd(CMat(a.adjoint()));
        return {t.v, t.s, t.u};
    }
    // Reduce strongly rectangular inputs to their triangular factor first.
    if (a.rows() > 2 * a.cols() && a.cols() > 32) {
        Eigen::HouseholderQR<CMat> qr(a);
        const Eigen::Index k = a.cols();
        Svd r = svd_square_ish(CMat(qr.matrixQR().topRows(k).triangularView<Eigen::Upper>()));
        CMat q = qr.householderQ() * CMat::Identity(a.rows(), k);
        return {q * r.u, r.s, r.v};
    }
    return svd_square_ish(a);
}

CVec min_norm_solve(const Svd &f, const CVec &b, double rel_cut) {
    CVec c = f.u.adjoint() * b;
    const double cut = rel_cut * (f.s.size() ? f.s(0) : 0.0);
    for (Eigen::Index i = 0; i < c.size(); ++i) c(i) = f.s(i) > cut ? c(i) / f.s(i) : cplx(0.0);
    return f.v * c;
}

RVec singular_values(const CMat &a) {
    if (a.size() == 0) return RVec();
    if (a.cols() > a.rows()) return singular_values(CMat(a.adjoint()));
    if (std::min(a.rows(), a.cols()) <= 64 && a.rows() <= 2 * a.cols()) {
        Eigen::JacobiSVD<CMat> jac(a);
        return jac.singularValues();
    }
    if (a.rows() > 2 * a.cols() && a.cols() > 32) {
        Eigen::HouseholderQR<CMat> qr(a);
        return singular_values(CMat(qr.matrixQR().topRows(a.cols()).triangularView<Eigen::Upper>()));
    }
    return svd_square_ish(a).s;
}

double op_norm(const CMat &a) {
    if (a.size() == 0) return 0.0;
    return singular_values(a)(0);
}

int numerical_rank(const CMat &a, double cut) {
    RVec s = singular_values(a);
    int r = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > cut) ++r;
    return r;
}

CMat null_space(const CMat &a, double cut) {
    const Eigen::Index n = a.cols();
    if (a.rows() == 0) return CMat::Identity(n, n);
    Svd f = svd(a);
    int r = 0;
    for (Eigen::Index i = 0; i < f.s.size(); ++i)
        if (f.s(i) > cut) ++r;
    return complement(f.v.leftCols(r), n);
}

CMat complement(const CMat &q, Eigen::Index n) {
    if (q.cols() == 0) return CMat::Identity(n, n);
    CMat proj = CMat::Identity(n, n) - q * q.adjoint();
    Eigen::SelfAdjointEigenSolver<CMat> es(proj);
    // eigenvalues ascending; the complement is the top n - k eigenvectors
    return es.eigenvectors().rightCols(n - q.cols());
}

double sigma_min(const CMat &a) {
    RVec s = singular_values(a);
    return s.size() ? s(s.size() - 1) : 0.0;
}

CMat kron(const CMat &a, const CMat &b) {
    CMat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

} // namespace linalg
} // namespace msl
