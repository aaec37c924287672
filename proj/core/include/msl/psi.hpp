#pragma once

#include <vector>

#include "msl/disc.hpp"

namespace msl {

struct ColumnData {
    BoundaryGrid grid{4096};
    std::vector<DiscFunction> phi;
    std::vector<CVec> samples;
    std::vector<double> sup; // grid sup of |phi_n|
    double c2 = 0.0;         // min over the grid of sum_n |phi_n|^2
};

// Validates sup |phi_n| <= 1 + tol; c2 may be zero only when allow_degenerate is set.
ColumnData make_column(const std::vector<DiscFunction> &phi, const BoundaryGrid &grid,
                       double tol = 1e-6, bool allow_degenerate = false);

struct PsiParameters {
    std::vector<double> delta;
    double delta_min = 0.0;
    double a = 0.0;
    double b = 0.0;
};

PsiParameters choose_parameters(const ColumnData &col);

struct ParameterCheck {
    bool delta_below_sup = false;    // 0 < delta_n < sup |phi_n|
    bool delta_energy = false;       // sum delta_n^2 < c^2
    bool kappa_margin = false;       // a^{N-1} > N! b
    bool row_margin = false;         // delta > a + (N-2) b
    bool positive = false;
    bool all() const { return delta_below_sup && delta_energy && kappa_margin && row_margin && positive; }
};
ParameterCheck check_parameters(const ColumnData &col, const PsiParameters &p);

struct TauSets {
    std::vector<ArcSet> tau;
    int near_threshold_cells = 0; // cells whose classification is within rounding of delta_n
};

TauSets build_tau_sets(const ColumnData &col, const PsiParameters &params);

struct PsiMatrix {
    int n = 0;
    BoundaryGrid grid{4096};
    PsiParameters params;
    std::vector<ArcSet> tau;
    std::vector<ArcSet> sigma;
    std::vector<DiscFunction> kappa; // row-major n x n
    std::vector<DiscFunction> eta;
    std::vector<DiscFunction> theta; // inner column
    std::vector<DiscFunction> psi;   // row-major, kappa_nk / eta_n
    // grid samples, row-major
    std::vector<CVec> kappa_samples;
    std::vector<CVec> psi_samples;
    std::vector<CVec> row_sum_samples; // sum_k kappa_nk phi_k
    std::vector<CVec> theta_samples;
    double det_lower_bound = 0.0;   // grid min |det Psi|
    double identity_residual = 0.0; // grid sup | |sum_k Psi_nk phi_k| - 1 |
    int near_threshold_cells = 0;

    const DiscFunction &kappa_at(int r, int c) const { return kappa[r * n + c]; }
    const DiscFunction &psi_at(int r, int c) const { return psi[r * n + c]; }
    CMat kappa_matrix(cplx z) const;
    CMat psi_matrix(cplx z) const;
    CMat psi_on_grid(int j) const;
};

PsiMatrix build_psi(const ColumnData &col);

struct KappaReport {
    double interior_min = 0.0;  // min |det kappa(z)| over the sample points
    cplx interior_argmin = 0.0;
    double interior_bound = 0.0; // a^{N-1} - N! b
    std::vector<double> row_min; // grid min |sum_k kappa_nk phi_k|
    double row_bound = 0.0;      // delta - a - (N-2) b
    bool passed = false;
};

// Halton points (bases 2, 3) mapped to the open disc by area.
std::vector<cplx> halton_disc(int count);

KappaReport verify_kappa_bounds(const PsiMatrix &psi, const std::vector<cplx> &interior,
                                double tol = 1e-6);

struct NormalizedColumn {
    CMat pre;           // (I + A2) A1
    CMat a1;
    CMat a2;
    int nonzero = 0;    // M
    std::vector<DiscFunction> reduced;
};

NormalizedColumn normalize_column(const std::vector<DiscFunction> &phi, const BoundaryGrid &grid,
                                  double zero_tol = 1e-12);

} // namespace msl
