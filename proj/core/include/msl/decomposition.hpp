#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "msl/operator.hpp"
#include "msl/psi.hpp"

namespace msl {

// Theta (N x (N-M), inner) and Phi (M x N, co-inner) with Phi Theta = 0 on the grid.
struct InnerPair {
    MatrixInnerFunction theta;
    MatrixInnerFunction phi;
    BoundaryGrid grid{4096};
    IsometryCertificate theta_cert;
    IsometryCertificate phi_cert;
    double annihilation = 0.0; // grid max ||Phi Theta||
    double column_energy_gap = 0.0; // grid max | sum_n |phi_1n|^2 - 1 |
};

InnerPair make_inner_pair(const MatrixInnerFunction &theta, const MatrixInnerFunction &phi,
                          const BoundaryGrid &grid = BoundaryGrid(4096), double tol = 1e-6);

// Vectors live on the boundary grid: N channels of G Fourier coefficients each, channel-major.
// Coefficients 0..G/2-1 form the analytic band; the model projection is
//   P x = x - Theta P_+ Theta* x
// applied pointwise on the grid, which is an exact orthogonal projection.
struct ShiftTypeSubspace {
    int index = 0;
    CMat y;                        // (N G) x K, column k is Y_n z^k
    double lower_bound = 0.0;      // min ||Y_n h|| / ||h|| over the random family
    double sigma_min = 0.0;        // smallest singular value of Y_n
    double intertwining = 0.0;     // ||Y_n S - T_Theta Y_n|| on inputs of degree < K-1
    double intertwining_window = 0.0; // same, output restricted to frequencies |f| < G/4
    double structure_residual = 0.0;  // grid max |sum_k phi_1k Psi_nk - vartheta_n|
};

struct ShiftSubspaces {
    InnerPair pair;
    int k = 0;
    PsiMatrix psi;
    std::vector<CMat> psi_grid;  // Psi(zeta_j) after column normalization
    std::vector<CVec> vartheta;  // grid samples of vartheta_n
    std::vector<CVec> theta_samples;
    double det_min = 0.0;        // grid min |det Psi|
    int test_count = 0;
    std::vector<ShiftTypeSubspace> subspaces;
    int channels() const { return pair.theta.rows(); }
    int grid_size() const { return pair.grid.size(); }
};

ShiftSubspaces build_shift_subspaces(const InnerPair &pair, int k, std::uint64_t seed = 0, int tests = 200,
                                     double lower_tol = 1e-4);

// P applied to a channel-major coefficient vector of length N G.
CVec model_project(const ShiftSubspaces &s, const CVec &coeffs);
// Embed channel-major coefficients of degree < d (length N d) into the grid representation.
CVec embed_coefficients(const ShiftSubspaces &s, const CVec &x, int degree);

struct DecompositionReport {
    int k = 0;
    std::vector<CVec> components;    // x_n = Y_n h_n, grid coefficient vectors
    std::vector<double> component_norms;
    double constructive_residual = 0.0; // pointwise inverse of Psi^T, truncated to degree < K
    double least_squares_residual = 0.0;
    double residual = 0.0;              // smaller of the two
    std::string route;                  // "constructive" or "least-squares"
};

// x in grid representation (length N G), must satisfy ||x - P x|| <= 1e-8 max(1, ||x||).
DecompositionReport decompose_vector(const CVec &x, const ShiftSubspaces &s);

struct ConvergenceRow {
    int k = 0;
    double constructive = 0.0;
    double least_squares = 0.0;
    double residual = 0.0;
};
// Rebuilds the subspaces at each K and decomposes the same x (channel-major, degree < x_degree).
std::vector<ConvergenceRow> decomposition_convergence(const InnerPair &pair, const CVec &x, int x_degree,
                                                      const std::vector<int> &ks, std::uint64_t seed = 0);

struct AssemblyResult {
    CMat r;
    DefectReport defects;
    SimilarityCertificate cert; // X T = R X
    int subspaces = 0;
    int rank = 0;
    int kernel_dim = 0;
    double intertwining = 0.0;  // max_n ||Y_n S_n - T Y_n||
    double z_residual = 0.0;    // ||Z R - T Z||
    double bound_ratio = 0.0;   // ||Y|| / (sqrt(N) max ||Y_n||), at most 1
};

// Y_n: d x m_n with Y_n S_n = T Y_n. K = complement of ker Y, R = compression of (+) S_n to K.
AssemblyResult assemble_similarity(const std::vector<CMat> &ys, const std::vector<CMat> &shifts, const CMat &t,
                                   double intertwining_tol = 1e-6);

struct TruncatedAssembly {
    AssemblyResult result;
    CMat t_compressed;        // compression of P z to the range of [Y_1 ... Y_N]
    double restricted_intertwining = 0.0; // degree < K-1 inputs
};
// Truncated shift S_K per channel; the target is compressed to the combined range.
TruncatedAssembly assemble_truncated(const ShiftSubspaces &s);

struct C0Assembly {
    AssemblyResult result;
    double annihilation = 0.0; // ||(prod vartheta_n)(R)||
    int m = 0;                 // d_{R*}
};
C0Assembly assemble_c0_similarity(const std::vector<BlaschkeProduct> &varthetas, const std::vector<CMat> &ys,
                                  const CMat &t);

struct UniquenessVerdict {
    bool unique = false;
    int dim_sum = 0;
    std::vector<int> dims;
    std::vector<double> min_angles; // smallest principal angle per pair (i < j), row-major
    std::optional<SimilarityCertificate> cert; // X T = (+) T|M_n X when unique and T is given
    double invariance_residual = 0.0;
};
UniquenessVerdict unique_representation_check(const std::vector<CMat> &bases, const CMat *t = nullptr,
                                              double rank_tol = 1e-10);

} // namespace msl
