#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "msl/decomposition.hpp"

namespace msl::fixture {

inline cplx random_disc_point(std::mt19937_64 &rng, double rmax) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return std::polar(rmax * std::sqrt(u(rng)), 2.0 * kPi * u(rng));
}

// Pairwise pseudo-hyperbolic separation at least `sep`.
inline std::vector<cplx> separated_points(std::mt19937_64 &rng, int count, double rmax, double sep) {
    std::vector<cplx> pts;
    while (static_cast<int>(pts.size()) < count) {
        cplx z = random_disc_point(rng, rmax);
        bool ok = true;
        for (cplx w : pts) ok = ok && pseudo_hyperbolic(z, w) >= sep;
        if (ok) pts.push_back(z);
    }
    return pts;
}

inline CMat random_unitary(std::mt19937_64 &rng, int d) {
    CMat a(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) a(i, j) = complex_normal(rng);
    Eigen::HouseholderQR<CMat> qr(a);
    return qr.householderQ() * CMat::Identity(d, d);
}

inline CMat random_invertible(std::mt19937_64 &rng, int d) {
    CMat a(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) a(i, j) = complex_normal(rng);
    return a + 2.0 * std::sqrt(static_cast<double>(d)) * CMat::Identity(d, d);
}

inline BlaschkeProduct random_blaschke(std::mt19937_64 &rng, int degree, double rmax = 0.9) {
    std::vector<cplx> z;
    for (int i = 0; i < degree; ++i) z.push_back(random_disc_point(rng, rmax));
    return BlaschkeProduct(z);
}

inline double brute_carleson(const std::vector<cplx> &z) {
    double best = 1.0;
    for (std::size_t n = 0; n < z.size(); ++n) {
        double p = 1.0;
        for (std::size_t k = 0; k < z.size(); ++k) {
            if (k == n) continue;
            double r = std::abs(z[k] - z[n]) / std::abs(1.0 - std::conj(z[k]) * z[n]);
            p *= std::min(r, 1.0);
        }
        best = std::min(best, p);
    }
    return best;
}

// Random valid column of N disc functions: constants, chi and Blaschke factors with sup <= 1,
// rescaled so that the boundary energy sum |phi_n|^2 stays away from zero.
inline std::vector<DiscFunction> random_column(std::mt19937_64 &rng, int n) {
    std::uniform_real_distribution<double> u(0.3, 0.95);
    std::vector<DiscFunction> col;
    for (int k = 0; k < n; ++k) {
        const double s = u(rng);
        switch (k % 3) {
        case 0: col.push_back(DiscFunction::constant(s)); break;
        case 1: col.push_back(s * DiscFunction::blaschke(random_blaschke(rng, 1, 0.6))); break;
        default: col.push_back(s * DiscFunction::chi()); break;
        }
    }
    return col;
}

// The worked pair Theta = [chi; 1] / sqrt 2, Phi = [1, -chi] / sqrt 2.
inline InnerPair worked_pair(int grid = 4096) {
    const double r = 1.0 / std::sqrt(2.0);
    MatrixInnerFunction theta(2, 1, {r * DiscFunction::chi(), DiscFunction::constant(r)});
    MatrixInnerFunction phi(1, 2, {DiscFunction::constant(r), cplx(-r) * DiscFunction::chi()});
    return make_inner_pair(theta, phi, BoundaryGrid(grid));
}

// T = V [[T1, A], [0, T2]] V* with diagonalizable T_i annihilated by simple-zero products.
struct CoupledInstance {
    CMat t;
    std::vector<BlaschkeProduct> factors;
};

inline CoupledInstance coupled_instance(std::mt19937_64 &rng) {
    std::uniform_int_distribution<int> deg(1, 3);
    const int d1 = deg(rng), d2 = deg(rng);
    auto pts = separated_points(rng, d1 + d2, 0.7, 0.5);
    std::vector<cplx> z1(pts.begin(), pts.begin() + d1), z2(pts.begin() + d1, pts.end());
    auto block = [&](const std::vector<cplx> &z) {
        std::vector<cplx> diag = z;
        std::uniform_int_distribution<int> pick(0, static_cast<int>(z.size()) - 1);
        diag.push_back(z[pick(rng)]);
        const int d = static_cast<int>(diag.size());
        CMat u = random_unitary(rng, d);
        CMat dm = CMat::Zero(d, d);
        for (int i = 0; i < d; ++i) dm(i, i) = diag[i];
        return CMat(u * dm * u.adjoint());
    };
    const CMat t1 = block(z1), t2 = block(z2);
    const auto h1 = t1.rows(), h2 = t2.rows();
    CMat a(h1, h2);
    for (int i = 0; i < h1; ++i)
        for (int j = 0; j < h2; ++j) a(i, j) = complex_normal(rng);
    const double room = 1.0 - std::max(linalg::op_norm(t1), linalg::op_norm(t2));
    a *= 0.9 * room / linalg::op_norm(a);
    CMat t = CMat::Zero(h1 + h2, h1 + h2);
    t.topLeftCorner(h1, h1) = t1;
    t.topRightCorner(h1, h2) = a;
    t.bottomRightCorner(h2, h2) = t2;
    const CMat v = random_unitary(rng, static_cast<int>(h1 + h2));
    return {v * t * v.adjoint(), {BlaschkeProduct(z1, 1.0, true), BlaschkeProduct(z2, 1.0, true)}};
}

} // namespace msl::fixture
