#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "msl/operator.hpp"

namespace msl {

struct QuasisimilarityVerdict {
    bool det_matches = false;
    bool gcd_trivial = false;
    bool verdict = false;
    double det_residual = 0.0;  // grid max |det Theta - c vartheta|
    cplx fitted_constant = 1.0;
    std::vector<cplx> common_zeros; // with multiplicity
};

// Theta square with Blaschke (rational inner) entries.
QuasisimilarityVerdict quasisimilarity_criterion(const MatrixInnerFunction &theta, const BlaschkeProduct &vartheta,
                                                 const BoundaryGrid &grid = BoundaryGrid(4096), double tol = 1e-6);

// Independent check for diagonal Theta: similarity of the finite matrices T_Theta and T_vartheta,
// searched through the intertwiner spaces in both directions.
bool brute_force_quasisimilar(const std::vector<BlaschkeProduct> &blocks, const BlaschkeProduct &vartheta,
                              std::uint64_t seed = 0);

struct CoronaScanReport {
    std::vector<cplx> path;
    std::vector<double> values;       // sum of adjugate entry moduli
    std::vector<double> running_inf;
    double threshold = 1e-3;
    bool decays_below_threshold = false;
};

// z_l = 1 - 2^{-l}, l = 1..depth
std::vector<cplx> corona_path(int depth = 20);
CoronaScanReport corona_infimum_scan(const MatrixInnerFunction &theta, const std::vector<cplx> &path,
                                     double threshold = 1e-3);
std::string corona_csv(const CoronaScanReport &scan);

struct UnicellularReport {
    double a1 = 1.0;
    double a2 = 1.0;
    IsometryCertificate isometry;
    double det_residual = 0.0;       // grid max |det Theta + alpha_{a1+a2}| off the cells at 1
    int det_excluded_cells = 0;
    double product_identity = 0.0;   // max |alpha_a1 alpha_a2 - alpha_{a1+a2}| at 100 points
    double adjugate_residual = 0.0;  // max ||Theta adj - det I|| at 100 points
    CoronaScanReport scan;
    std::vector<double> theta11_abs; // |theta_11(z_l)|
};

UnicellularReport demo_unicellular(double a1, double a2, int depth = 20,
                                   const BoundaryGrid &grid = BoundaryGrid(4096));

} // namespace msl
