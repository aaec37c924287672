#pragma once

#include <string>
#include <vector>

#include "msl/disc.hpp"

namespace msl {

// H(B) for a finite Blaschke product with its Takenaka-Malmquist basis
//   e_n(z) = sqrt(1 - |l_n|^2) / (1 - conj(l_n) z) * prod_{k<n} b_{l_k}(z).
struct FiniteModelSpace {
    BlaschkeProduct b;
    int dim = 0;
    double gram_residual = 0.0;
    std::vector<std::string> warnings;
    cplx basis(int n, cplx z) const;
};

FiniteModelSpace model_space(const BlaschkeProduct &b, const BoundaryGrid &quadrature = BoundaryGrid(4096));

struct CompressedShiftOperator {
    CMat matrix;
    double norm = 0.0;
    double annihilation = 0.0; // ||B(T)||
};

// Closed-form matrix of P z|_{H(B)} in the basis above: lower triangular with diagonal l_j.
CMat compressed_shift_matrix(const BlaschkeProduct &b);
CompressedShiftOperator compressed_shift(const FiniteModelSpace &space);

class MatrixInnerFunction {
public:
    MatrixInnerFunction() = default;
    MatrixInnerFunction(int rows, int cols, std::vector<DiscFunction> entries);
    int rows() const { return rows_; }
    int cols() const { return cols_; }
    const DiscFunction &at(int r, int c) const { return entries_[r * cols_ + c]; }
    const std::vector<DiscFunction> &entries() const { return entries_; }
    CMat operator()(cplx z) const;
    // samples[r * cols + c] on the grid
    std::vector<CVec> sample(const BoundaryGrid &grid) const;
    std::vector<cplx> singularities() const;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<DiscFunction> entries_;
};

struct IsometryCertificate {
    double deviation = 0.0; // max over certified grid points of ||M* M - I|| (or ||M M* - I||)
    int excluded_cells = 0;
    int checked_points = 0;
};

// Boundary isometry Theta* Theta = I, skipping `exclude_radius` cells around declared singularities.
IsometryCertificate certify_isometry(const MatrixInnerFunction &theta, const BoundaryGrid &grid,
                                     int exclude_radius = 1);
// Co-isometry Phi Phi* = I on the boundary.
IsometryCertificate certify_coisometry(const MatrixInnerFunction &phi, const BoundaryGrid &grid,
                                       int exclude_radius = 1);

// diag(B_1, ..., B_M); with require_nested the zero sets must decrease.
MatrixInnerFunction diagonal_theta(const std::vector<BlaschkeProduct> &blocks, bool require_nested = false);
// Block-diagonal direct sum of the scalar compressed shifts.
CMat diagonal_theta_shift(const std::vector<BlaschkeProduct> &blocks);

// The 2x2 inner function built from two inner functions t1, t2 with c = 1/sqrt(1 + |t1(0)|^2).
MatrixInnerFunction example_theta(const DiscFunction &t1, const DiscFunction &t2);

struct DetAdjugate {
    cplx det = 0.0;
    CMat adj;
    double identity_residual = 0.0; // ||M adj - det I||
};
DetAdjugate det_and_adjugate(const CMat &m);
DetAdjugate det_and_adjugate(const MatrixInnerFunction &theta, cplx z);

// First `count` Taylor coefficients of an H-infinity function from boundary (or near-boundary) samples.
CVec taylor_coefficients(const DiscFunction &f, int count, const BoundaryGrid &grid);

struct ModelProjection {
    CVec x;                      // projected vector, channel-major, degree < K
    double formula_gap = 0.0;    // || exact - (x - Theta P_+ Theta* x) truncated ||
    double tail_energy = 0.0;    // || coefficients of Theta* x beyond degree K ||
    bool overflow_warning = false;
};

// Orthogonal projection of the K-truncation of H^2_N onto the complement of the range of
// the truncated multiplication operator by Theta (finite section of Theta H^2_M).
CMat model_projector(const MatrixInnerFunction &theta, int k, const BoundaryGrid &grid);
ModelProjection project_model(const CVec &x, int k, const MatrixInnerFunction &theta, const BoundaryGrid &grid);

} // namespace msl
