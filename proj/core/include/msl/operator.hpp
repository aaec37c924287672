#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "msl/model.hpp"

namespace msl {

struct OperatorMatrix {
    CMat m;
    double norm = 0.0;
    bool contraction = false; // norm <= 1 + 1e-8
    static OperatorMatrix from(CMat m);
};

// B(T) = c prod_k b_{l_k}(T); fails when I - conj(l) T is numerically singular.
CMat apply_blaschke(const CMat &t, const BlaschkeProduct &b);

// k(l) = dim ker(T - l I) with cut rank_tol * ||T||.
std::vector<int> eigenspace_dims(const CMat &t, const std::vector<cplx> &lambdas, double rank_tol = 1e-8);

struct MultiplicityReport {
    int mu = 0;
    std::vector<cplx> eigenvalues;       // one representative per cluster
    std::vector<std::vector<int>> weyr;  // Weyr characteristic per representative
    bool clustered_warning = false;
};
MultiplicityReport multiplicity(const CMat &t, double rank_tol = 1e-8);

struct DefectReport {
    int d_t = 0;
    int d_t_star = 0;
    RVec sv_t;      // singular values of I - T*T
    RVec sv_t_star; // singular values of I - TT*
    double cut = 1e-8;
};
DefectReport defects(const CMat &t, double cut = 1e-8);

// Orthonormal (Frobenius) basis of { X : X T = R X }, X of size dim(R) x dim(T).
std::vector<CMat> intertwiner_space(const CMat &t, const CMat &r, double cut = 1e-8);

struct SimilarityCertificate {
    CMat x;                // X T = R X, normalized to ||X|| = 1
    double residual = 0.0; // ||X T - R X||
    double sigma_min = 0.0;
    double condition = 0.0;
    bool accepted = false; // residual <= 1e-8 ||X|| and sigma_min >= 1e-8
};
SimilarityCertificate certify_similarity(const CMat &x, const CMat &t, const CMat &r);

std::optional<SimilarityCertificate> find_similarity(const CMat &t, const CMat &r, std::uint64_t seed = 0,
                                                     int draws = 64);

struct JordanModel {
    std::vector<cplx> lambdas;  // candidates with k > 0, input order
    std::vector<int> k;
    int m = 0;                  // number of diagonal blocks (= multiplicity)
    std::vector<BlaschkeProduct> blocks;
    MatrixInnerFunction theta;
    CMat t_theta;               // block-diagonal compressed shift
    SimilarityCertificate cert; // X T = T_theta X
    CMat x_raw;                 // unnormalized intertwiner
    double carleson = 0.0;
    double annihilation = 0.0;  // ||B(T)||
};
JordanModel jordan_model(const CMat &t, const std::vector<cplx> &lambdas, double rank_tol = 1e-8);

struct TriangulationResult {
    CMat u;                    // unitary, T = U T_tri U*
    CMat t_tri;                // block upper triangular
    std::vector<int> sizes;
    std::vector<int> offsets;
    std::vector<double> residuals; // ||theta_n(T_n)||
    double zeroed_block_norm = 0.0;
    double reassembly_error = 0.0;
    CMat block(int i, int j) const;
};
TriangulationResult triangulate(const CMat &t, const std::vector<BlaschkeProduct> &factors,
                                double precondition_tol = 1e-6, double rank_tol = 1e-8);

struct LiftResult {
    CMat z;
    double residual = 0.0;     // ||Z S - T1 Z - A Y2||
    double scale = 0.0;        // ||A|| ||Y2||
    double intertwining = 0.0; // ||Y2 S - T2 Y2||
};
// Minimum-norm least-squares solution of Z S - T1 Z = A Y2.
LiftResult takahashi_lift(const CMat &t1, const CMat &a, const CMat &t2, const CMat &y2, const CMat &s_model);

struct FiniteDefectResult {
    CMat r;
    DefectReport defects;
    SimilarityCertificate cert; // X T = R X
    TriangulationResult tri;
    std::vector<JordanModel> blocks;
    std::vector<double> lift_residuals;
    int model_dim = 0;
    int kernel_dim = 0;
    double intertwining_residual = 0.0; // ||Y S - T_tri Y||
    std::vector<std::string> warnings;
};
FiniteDefectResult similar_to_finite_defect(const CMat &t, const std::vector<BlaschkeProduct> &factors,
                                            double rank_tol = 1e-8);

} // namespace msl
