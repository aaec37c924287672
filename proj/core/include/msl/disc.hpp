#pragma once

#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "msl/arcset.hpp"
#include "msl/common.hpp"

namespace msl {

// G equispaced points zeta_j = exp(2 pi i j / G) on the unit circle, G a power of two >= 16.
class BoundaryGrid {
public:
    explicit BoundaryGrid(int size = 4096);
    static bool valid_size(long long g);
    int size() const { return size_; }
    cplx point(int j) const;
    double turn(int j) const { return static_cast<double>(j) / size_; }
    // Index of the grid point closest to a boundary point.
    int nearest(cplx zeta) const;
    bool operator==(const BoundaryGrid &) const = default;

private:
    int size_;
};

namespace fft {
// c_k = (1/G) sum_j f_j zeta_j^{-k}, k = 0..G-1 (negative frequencies in the upper half).
CVec coefficients(const CVec &samples);
// Inverse of coefficients().
CVec samples(const CVec &coeffs);
} // namespace fft

cplx blaschke_factor(cplx lambda, cplx z);
// |a - b| / |1 - conj(a) b|, clipped to 1.
double pseudo_hyperbolic(cplx a, cplx b);
// inf_n prod_{k != n} |b_{lambda_k}(lambda_n)|; 1 for a single zero.
double carleson_constant(const std::vector<cplx> &zeros);

class BlaschkeProduct {
public:
    BlaschkeProduct() = default;
    // `simple` requests pairwise distinct zeros.
    explicit BlaschkeProduct(std::vector<cplx> zeros, cplx constant = 1.0, bool simple = false);
    const std::vector<cplx> &zeros() const { return zeros_; }
    cplx constant() const { return constant_; }
    bool simple() const { return simple_; }
    int degree() const { return static_cast<int>(zeros_.size()); }
    cplx operator()(cplx z) const;
    BlaschkeProduct operator*(const BlaschkeProduct &o) const;

private:
    std::vector<cplx> zeros_;
    cplx constant_ = 1.0;
    bool simple_ = false;
};

// Outer function with prescribed boundary modulus on a grid. log|w| is completed to an
// analytic polynomial of degree G/2 through its Fourier coefficients and exponentiated;
// the boundary modulus is reproduced exactly at the grid points.
class OuterFunction {
public:
    static constexpr double kClamp = 1e-12;
    static std::shared_ptr<const OuterFunction> from_modulus(const BoundaryGrid &grid, const RVec &w);
    const BoundaryGrid &grid() const { return grid_; }
    // analytic coefficients a_0..a_{G/2} of log O
    const CVec &log_coefficients() const { return log_coeffs_; }
    const CVec &boundary() const { return boundary_; }
    int clamped_points() const { return clamped_; }
    cplx operator()(cplx z) const;

private:
    BoundaryGrid grid_{16};
    CVec log_coeffs_;
    CVec boundary_;
    int clamped_ = 0;
};

// Piecewise-constant modulus: `level` on each ArcSet (later entries win), `base` elsewhere,
// sampled at grid points by half-open membership.
RVec modulus_from_levels(const BoundaryGrid &grid, double base,
                         const std::vector<std::pair<ArcSet, double>> &levels);

class DiscFunction {
public:
    enum class Kind { constant, chi, blaschke, singular_exp, outer, product, sum, quotient, diff_quotient };
    struct Node;

    DiscFunction();
    static DiscFunction constant(cplx c);
    static DiscFunction chi();
    static DiscFunction blaschke(const BlaschkeProduct &b);
    static DiscFunction singular_exp(double a);
    static DiscFunction outer(std::shared_ptr<const OuterFunction> o);
    // (f(z) - f(0)) / z, analytic at 0
    static DiscFunction diff_quotient(const DiscFunction &f);

    friend DiscFunction operator*(const DiscFunction &a, const DiscFunction &b);
    friend DiscFunction operator+(const DiscFunction &a, const DiscFunction &b);
    friend DiscFunction operator-(const DiscFunction &a, const DiscFunction &b);
    friend DiscFunction operator/(const DiscFunction &a, const DiscFunction &b);
    friend DiscFunction operator*(cplx s, const DiscFunction &a) { return constant(s) * a; }

    Kind kind() const;
    cplx operator()(cplx z) const;
    // Boundary samples; NaN at declared singular points.
    CVec sample(const BoundaryGrid &grid) const;
    // Boundary points where the function has no boundary value (zeta = 1 for singular_exp).
    std::vector<cplx> singularities() const;
    // True when the variant is inner by construction.
    bool inner_by_construction() const;
    bool is_zero() const;

    // payload accessors
    cplx constant_value() const;
    const BlaschkeProduct &blaschke_product() const;
    double exp_parameter() const;
    std::shared_ptr<const OuterFunction> outer_function() const;
    std::vector<DiscFunction> children() const;

    // (scale, B) with f = scale * B when the tree only multiplies constants, chi and Blaschke nodes
    std::optional<std::pair<cplx, BlaschkeProduct>> as_rational_inner() const;

private:
    explicit DiscFunction(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

struct InnerOuter {
    DiscFunction inner;
    DiscFunction outer;
    double inner_certificate = 0.0; // max | |inner(zeta_j)| - 1 | over certified points
    int near_zero_points = 0;       // points where |f| fell below the clamp
};

DiscFunction outer_from_log_modulus(const BoundaryGrid &grid, const RVec &w);
InnerOuter inner_outer_factorize(const DiscFunction &f, const BoundaryGrid &grid);

// Grid indices within `radius` cells of any declared singularity of f.
std::vector<bool> singular_cells(const DiscFunction &f, const BoundaryGrid &grid, int radius = 1);

} // namespace msl
