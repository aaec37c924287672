#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace msl {

using cplx = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;

enum class Errc {
    input,        // malformed or out-of-domain arguments
    precondition, // a documented precondition does not hold
    numerical,    // a numerical step broke down
    certificate,  // a certified check failed
    unsupported,
};

class Error : public std::runtime_error {
public:
    Error(Errc code, std::string kind, const std::string &what)
        : std::runtime_error(kind + ": " + what), code_(code), kind_(std::move(kind)) {}
    Errc code() const noexcept { return code_; }
    const std::string &kind() const noexcept { return kind_; }

private:
    Errc code_;
    std::string kind_;
};

struct Tolerances {
    double inner = 1e-6;     // boundary checks
    double interior = 1e-8;  // algebraic identities inside the disc
    double rank = 1e-8;      // singular-value cut for rank decisions
};

// Counter-based stream derivation: every stage gets its own generator from (seed, stream).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);
std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream);
cplx complex_normal(std::mt19937_64 &rng);

namespace linalg {

// Thin SVD a = u diag(s) v*. Small problems use one-sided Jacobi; large ones use the
// divide-and-conquer solver and fall back to Jacobi when the factors fail to reconstruct a.
struct Svd {
    CMat u;
    RVec s;
    CMat v;
};
Svd svd(const CMat &a);
// Minimum-norm least-squares solution, singular values below rel_cut * s_max treated as zero.
CVec min_norm_solve(const Svd &f, const CVec &b, double rel_cut);

double op_norm(const CMat &a);
RVec singular_values(const CMat &a);
int numerical_rank(const CMat &a, double cut);
// Orthonormal basis of the numerical kernel (right singular vectors below cut).
CMat null_space(const CMat &a, double cut);
// Orthonormal basis of the orthogonal complement of span(q) in C^n; q orthonormal.
CMat complement(const CMat &q, Eigen::Index n);
double sigma_min(const CMat &a);
CMat kron(const CMat &a, const CMat &b);

} // namespace linalg

} // namespace msl
