#include "msl/psi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace msl {

namespace {

double factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

double radical_inverse(int i, int base) {
    double f = 1.0, r = 0.0;
    while (i > 0) {
        f /= base;
        r += f * (i % base);
        i /= base;
    }
    return r;
}

} // namespace

ColumnData make_column(const std::vector<DiscFunction> &phi, const BoundaryGrid &grid, double tol,
                       bool allow_degenerate) {
    if (phi.empty()) throw Error(Errc::input, "empty-column", "column needs at least one entry");
    ColumnData col;
    col.grid = grid;
    col.phi = phi;
    const int g = grid.size();
    RVec energy = RVec::Zero(g);
    for (const DiscFunction &f : phi) {
        CVec s = f.sample(grid);
        double sup = 0.0;
        for (int j = 0; j < g; ++j) {
            if (!finite(s(j))) continue;
            sup = std::max(sup, std::abs(s(j)));
            energy(j) += std::norm(s(j));
        }
        if (sup > 1.0 + tol)
            throw Error(Errc::input, "sup-exceeds-one", "column entries must satisfy |phi_n| <= 1 on the grid");
        col.samples.push_back(std::move(s));
        col.sup.push_back(sup);
    }
    col.c2 = energy.minCoeff();
    if (!(col.c2 > 0.0) && !allow_degenerate)
        throw Error(Errc::precondition, "no-lower-bound", "sum of |phi_n|^2 must be bounded below on the grid");
    return col;
}

PsiParameters choose_parameters(const ColumnData &col) {
    if (!(col.c2 > 0.0)) throw Error(Errc::precondition, "infeasible-parameters", "c^2 must be positive");
    const int n = static_cast<int>(col.phi.size());
    const double c = std::sqrt(col.c2);
    PsiParameters p;
    for (int k = 0; k < n; ++k) p.delta.push_back(std::min(0.9 * col.sup[k], c / std::sqrt(2.0 * n)));
    p.delta_min = *std::min_element(p.delta.begin(), p.delta.end());
    p.a = p.delta_min / 2.0;
    if (n == 1) {
        p.b = std::min(0.5, p.delta_min / 4.0);
    } else {
        p.b = std::min({std::pow(p.a, n - 1) / (2.0 * factorial(n)),
                        p.delta_min / (4.0 * std::max(1, n - 2)), p.delta_min / (2.0 * (n - 1))});
    }
    return p;
}

ParameterCheck check_parameters(const ColumnData &col, const PsiParameters &p) {
    const int n = static_cast<int>(col.phi.size());
    ParameterCheck ch;
    ch.delta_below_sup = true;
    double energy = 0.0;
    for (int k = 0; k < n; ++k) {
        ch.delta_below_sup = ch.delta_below_sup && p.delta[k] > 0.0 && p.delta[k] < col.sup[k];
        energy += p.delta[k] * p.delta[k];
    }
    ch.delta_energy = energy < col.c2;
    ch.kappa_margin = std::pow(p.a, n - 1) > factorial(n) * p.b;
    ch.row_margin = p.delta_min > p.a + (n - 2) * p.b;
    ch.positive = p.a > 0.0 && p.b > 0.0 && p.delta_min > 0.0;
    return ch;
}

TauSets build_tau_sets(const ColumnData &col, const PsiParameters &params) {
    TauSets out;
    const int g = col.grid.size();
    for (std::size_t n = 0; n < col.phi.size(); ++n) {
        std::vector<bool> mask(g, false);
        const double d = params.delta[n];
        for (int j = 0; j < g; ++j) {
            double m = std::abs(col.samples[n](j));
            if (!std::isfinite(m)) continue;
            mask[j] = m >= d;
            if (std::abs(m - d) <= 1e-12 * std::max(1.0, d)) ++out.near_threshold_cells;
        }
        ArcSet t = cell_arcs(mask);
        if (t.is_empty())
            throw Error(Errc::numerical, "resolution", "a threshold set captures no grid cell");
        out.tau.push_back(std::move(t));
    }
    return out;
}

CMat PsiMatrix::kappa_matrix(cplx z) const {
    CMat m(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) m(r, c) = kappa_at(r, c)(z);
    return m;
}

CMat PsiMatrix::psi_matrix(cplx z) const {
    CMat m = kappa_matrix(z);
    for (int r = 0; r < n; ++r) m.row(r) /= eta[r](z);
    return m;
}

CMat PsiMatrix::psi_on_grid(int j) const {
    CMat m(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) m(r, c) = psi_samples[r * n + c](j);
    return m;
}

PsiMatrix build_psi(const ColumnData &col) {
    const int n = static_cast<int>(col.phi.size());
    const BoundaryGrid &grid = col.grid;
    const int g = grid.size();
    for (int k = 0; k < n; ++k)
        if (col.sup[k] <= 1e-12)
            throw Error(Errc::precondition, "degenerate-column", "an entry vanishes; normalize the column first");

    PsiMatrix psi;
    psi.n = n;
    psi.grid = grid;
    psi.params = choose_parameters(col);
    TauSets ts = build_tau_sets(col, psi.params);
    psi.tau = ts.tau;
    psi.near_threshold_cells = ts.near_threshold_cells;
    psi.sigma = refine_disjoint(psi.tau);

    std::vector<std::vector<bool>> in_sigma;
    for (const ArcSet &s : psi.sigma) in_sigma.push_back(grid_membership(s, g));

    const double a = psi.params.a, b = psi.params.b;
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            RVec w(g);
            const double off = (r == c) ? a : b;
            for (int j = 0; j < g; ++j) w(j) = in_sigma[c][j] ? 1.0 : off;
            DiscFunction k = outer_from_log_modulus(grid, w);
            psi.kappa_samples.push_back(k.sample(grid));
            psi.kappa.push_back(std::move(k));
        }
    }

    for (int r = 0; r < n; ++r) {
        CVec sum = CVec::Zero(g);
        DiscFunction f = psi.kappa_at(r, 0) * col.phi[0];
        sum += psi.kappa_samples[r * n].cwiseProduct(col.samples[0]);
        for (int c = 1; c < n; ++c) {
            f = f + psi.kappa_at(r, c) * col.phi[c];
            sum += psi.kappa_samples[r * n + c].cwiseProduct(col.samples[c]);
        }
        RVec w(g);
        for (int j = 0; j < g; ++j) w(j) = finite(sum(j)) ? std::abs(sum(j)) : 1.0;
        DiscFunction eta = outer_from_log_modulus(grid, w);
        CVec es = eta.sample(grid);
        psi.theta.push_back(f / eta);
        psi.theta_samples.push_back(sum.cwiseQuotient(es));
        psi.row_sum_samples.push_back(sum);
        for (int c = 0; c < n; ++c) {
            psi.psi.push_back(psi.kappa_at(r, c) / eta);
            psi.psi_samples.push_back(psi.kappa_samples[r * n + c].cwiseQuotient(es));
        }
        psi.eta.push_back(std::move(eta));
    }

    psi.det_lower_bound = std::numeric_limits<double>::infinity();
    for (int j = 0; j < g; ++j) {
        CMat m = psi.psi_on_grid(j);
        if (!m.allFinite()) continue;
        psi.det_lower_bound = std::min(psi.det_lower_bound, std::abs(m.determinant()));
        for (int r = 0; r < n; ++r) {
            cplx t = psi.theta_samples[r](j);
            if (finite(t)) psi.identity_residual = std::max(psi.identity_residual, std::abs(std::abs(t) - 1.0));
        }
    }
    return psi;
}

std::vector<cplx> halton_disc(int count) {
    std::vector<cplx> pts;
    pts.reserve(count);
    for (int i = 1; i <= count; ++i) {
        double r = std::sqrt(radical_inverse(i, 2));
        double t = 2.0 * kPi * radical_inverse(i, 3);
        pts.push_back(std::polar(r, t));
    }
    return pts;
}

KappaReport verify_kappa_bounds(const PsiMatrix &psi, const std::vector<cplx> &interior, double tol) {
    const int n = psi.n;
    const PsiParameters &p = psi.params;
    KappaReport rep;
    rep.interior_bound = std::pow(p.a, n - 1) - factorial(n) * p.b;
    rep.row_bound = p.delta_min - p.a - (n - 2) * p.b;
    rep.interior_min = std::numeric_limits<double>::infinity();
    for (cplx z : interior) {
        double d = std::abs(psi.kappa_matrix(z).determinant());
        if (d < rep.interior_min) {
            rep.interior_min = d;
            rep.interior_argmin = z;
        }
    }
    bool ok = rep.interior_min >= rep.interior_bound - tol;
    for (int r = 0; r < n; ++r) {
        double m = std::numeric_limits<double>::infinity();
        const CVec &s = psi.row_sum_samples[r];
        for (Eigen::Index j = 0; j < s.size(); ++j)
            if (finite(s(j))) m = std::min(m, std::abs(s(j)));
        rep.row_min.push_back(m);
        ok = ok && m >= rep.row_bound - tol;
    }
    rep.passed = ok;
    return rep;
}

NormalizedColumn normalize_column(const std::vector<DiscFunction> &phi, const BoundaryGrid &grid,
                                  double zero_tol) {
    const int n = static_cast<int>(phi.size());
    std::vector<int> nonzero, zero;
    for (int k = 0; k < n; ++k) {
        CVec s = phi[k].sample(grid);
        double sup = 0.0;
        for (Eigen::Index j = 0; j < s.size(); ++j)
            if (finite(s(j))) sup = std::max(sup, std::abs(s(j)));
        (sup > zero_tol ? nonzero : zero).push_back(k);
    }
    if (nonzero.empty()) throw Error(Errc::input, "all-zero-column", "column has no nonzero entry");
    NormalizedColumn out;
    out.nonzero = static_cast<int>(nonzero.size());
    std::vector<int> perm = nonzero;
    perm.insert(perm.end(), zero.begin(), zero.end());
    out.a1 = CMat::Zero(n, n);
    for (int i = 0; i < n; ++i) out.a1(i, perm[i]) = 1.0;
    out.a2 = CMat::Zero(n, n);
    for (int i = out.nonzero; i < n; ++i) out.a2(i, 0) = 1.0;
    out.pre = (CMat::Identity(n, n) + out.a2) * out.a1;
    for (int i = 0; i < n; ++i) out.reduced.push_back(i < out.nonzero ? phi[perm[i]] : phi[perm[0]]);
    return out;
}

} // namespace msl
