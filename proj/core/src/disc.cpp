#include "msl/disc.hpp"

#include <cmath>
#include <limits>

#include <unsupported/Eigen/FFT>

namespace msl {

// ---------------------------------------------------------------- grid and transforms

bool BoundaryGrid::valid_size(long long g) { return g >= 16 && (g & (g - 1)) == 0 && g <= (1LL << 24); }

BoundaryGrid::BoundaryGrid(int size) : size_(size) {
    if (!valid_size(size))
        throw Error(Errc::input, "grid-size", "grid size must be a power of two >= 16");
}

cplx BoundaryGrid::point(int j) const {
    return std::polar(1.0, 2.0 * kPi * static_cast<double>(j) / size_);
}

int BoundaryGrid::nearest(cplx zeta) const {
    double t = std::arg(zeta) / (2.0 * kPi);
    if (t < 0) t += 1.0;
    auto j = static_cast<long long>(std::llround(t * size_));
    return static_cast<int>(((j % size_) + size_) % size_);
}

namespace fft {

namespace {
Eigen::FFT<double> &engine() {
    thread_local Eigen::FFT<double> f;
    return f;
}
} // namespace

CVec coefficients(const CVec &samples) {
    CVec out(samples.size());
    engine().fwd(out, samples);
    return out / static_cast<double>(samples.size());
}

CVec samples(const CVec &coeffs) {
    CVec out(coeffs.size());
    engine().inv(out, coeffs); // scaled by 1/n
    return out * static_cast<double>(coeffs.size());
}

} // namespace fft

// ---------------------------------------------------------------- Blaschke data

cplx blaschke_factor(cplx lambda, cplx z) {
    if (lambda == cplx(0.0)) return z;
    return (std::abs(lambda) / lambda) * (lambda - z) / (1.0 - std::conj(lambda) * z);
}

double pseudo_hyperbolic(cplx a, cplx b) {
    double r = std::abs(a - b) / std::abs(1.0 - std::conj(a) * b);
    return r < 1.0 ? r : 1.0;
}

double carleson_constant(const std::vector<cplx> &zeros) {
    const std::size_t n = zeros.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (!(std::abs(zeros[i]) < 1.0))
            throw Error(Errc::input, "zero-outside-disc", "zeros must satisfy |lambda| < 1");
        for (std::size_t k = i + 1; k < n; ++k)
            if (zeros[i] == zeros[k])
                throw Error(Errc::input, "duplicate-zero", "zeros must be pairwise distinct");
    }
    double best = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        double p = 1.0;
        for (std::size_t k = 0; k < n; ++k)
            if (k != i) p *= pseudo_hyperbolic(zeros[k], zeros[i]);
        if (p < best) best = p;
    }
    return best;
}

BlaschkeProduct::BlaschkeProduct(std::vector<cplx> zeros, cplx constant, bool simple)
    : zeros_(std::move(zeros)), constant_(constant), simple_(simple) {
    for (cplx z : zeros_)
        if (!(std::abs(z) < 1.0))
            throw Error(Errc::input, "zero-outside-disc", "Blaschke zeros must satisfy |lambda| < 1");
    if (std::abs(std::abs(constant_) - 1.0) > 1e-9)
        throw Error(Errc::input, "constant-not-unimodular", "Blaschke constant must have modulus 1");
    if (simple_)
        for (std::size_t i = 0; i < zeros_.size(); ++i)
            for (std::size_t k = i + 1; k < zeros_.size(); ++k)
                if (zeros_[i] == zeros_[k])
                    throw Error(Errc::input, "duplicate-zero", "simple Blaschke product with repeated zero");
}

cplx BlaschkeProduct::operator()(cplx z) const {
    cplx v = constant_;
    for (cplx l : zeros_) v *= blaschke_factor(l, z);
    return v;
}

BlaschkeProduct BlaschkeProduct::operator*(const BlaschkeProduct &o) const {
    std::vector<cplx> z = zeros_;
    z.insert(z.end(), o.zeros_.begin(), o.zeros_.end());
    return BlaschkeProduct(std::move(z), constant_ * o.constant_, false);
}

// ---------------------------------------------------------------- outer functions

std::shared_ptr<const OuterFunction> OuterFunction::from_modulus(const BoundaryGrid &grid, const RVec &w) {
    const int g = grid.size();
    if (w.size() != g) throw Error(Errc::input, "modulus-size", "modulus must be sampled on the grid");
    auto o = std::make_shared<OuterFunction>();
    o->grid_ = grid;
    CVec logw(g);
    RVec wc(g);
    int clamped = 0;
    for (int j = 0; j < g; ++j) {
        if (!(w(j) >= 0.0) || !std::isfinite(w(j)))
            throw Error(Errc::input, "negative-modulus", "modulus must be finite and nonnegative");
        wc(j) = w(j);
        if (w(j) < kClamp) {
            wc(j) = kClamp;
            ++clamped;
        }
        logw(j) = std::log(wc(j));
    }
    if (clamped == g) throw Error(Errc::input, "all-zero-modulus", "modulus vanishes on the whole grid");
    o->clamped_ = clamped;
    CVec c = fft::coefficients(logw);
    CVec a = CVec::Zero(g / 2 + 1);
    a(0) = c(0).real();
    for (int k = 1; k < g / 2; ++k) a(k) = 2.0 * c(k);
    a(g / 2) = c(g / 2).real();
    o->log_coeffs_ = a;
    CVec full = CVec::Zero(g);
    full.head(g / 2 + 1) = a;
    CVec lb = fft::samples(full);
    o->boundary_.resize(g);
    for (int j = 0; j < g; ++j) o->boundary_(j) = std::polar(wc(j), lb(j).imag());
    return o;
}

cplx OuterFunction::operator()(cplx z) const {
    const double r = std::abs(z);
    if (std::abs(r - 1.0) < 1e-14) {
        const int g = grid_.size();
        double t = std::arg(z) / (2.0 * kPi) * g;
        double rt = std::round(t);
        if (std::abs(t - rt) < 1e-9) {
            auto j = static_cast<long long>(rt);
            return boundary_(static_cast<int>(((j % g) + g) % g));
        }
    }
    cplx acc = 0.0;
    for (Eigen::Index k = log_coeffs_.size() - 1; k >= 0; --k) acc = acc * z + log_coeffs_(k);
    return std::exp(acc);
}

RVec modulus_from_levels(const BoundaryGrid &grid, double base,
                         const std::vector<std::pair<ArcSet, double>> &levels) {
    RVec w = RVec::Constant(grid.size(), base);
    for (const auto &[set, level] : levels) {
        auto in = grid_membership(set, grid.size());
        for (int j = 0; j < grid.size(); ++j)
            if (in[j]) w(j) = level;
    }
    return w;
}

// ---------------------------------------------------------------- expression tree

struct DiscFunction::Node {
    Kind kind = Kind::constant;
    cplx value = 0.0;
    BlaschkeProduct blaschke;
    double a = 0.0;
    std::shared_ptr<const OuterFunction> outer;
    std::vector<DiscFunction> kids;
    cplx f0 = 0.0;
    std::vector<cplx> series; // diff quotient: coefficients of (f - f(0))/z near 0
};

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::shared_ptr<DiscFunction::Node> make(DiscFunction::Kind k) {
    auto n = std::make_shared<DiscFunction::Node>();
    n->kind = k;
    return n;
}

} // namespace

DiscFunction::DiscFunction() : DiscFunction(constant(0.0)) {}

DiscFunction DiscFunction::constant(cplx c) {
    auto n = make(Kind::constant);
    n->value = c;
    return DiscFunction(n);
}

DiscFunction DiscFunction::chi() { return DiscFunction(make(Kind::chi)); }

DiscFunction DiscFunction::blaschke(const BlaschkeProduct &b) {
    auto n = make(Kind::blaschke);
    n->blaschke = b;
    return DiscFunction(n);
}

DiscFunction DiscFunction::singular_exp(double a) {
    if (!(a > 0.0) || !std::isfinite(a))
        throw Error(Errc::input, "parameter", "singular exponent needs a > 0");
    auto n = make(Kind::singular_exp);
    n->a = a;
    return DiscFunction(n);
}

DiscFunction DiscFunction::outer(std::shared_ptr<const OuterFunction> o) {
    auto n = make(Kind::outer);
    n->outer = std::move(o);
    return DiscFunction(n);
}

DiscFunction DiscFunction::diff_quotient(const DiscFunction &f) {
    auto n = make(Kind::diff_quotient);
    n->kids = {f};
    n->f0 = f(0.0);
    // Taylor coefficients from a contour of radius 1/2.
    constexpr int m = 64;
    constexpr double r = 0.5;
    CVec s(m);
    for (int j = 0; j < m; ++j) s(j) = f(r * std::polar(1.0, 2.0 * kPi * j / m));
    CVec c = fft::coefficients(s);
    n->series.resize(m / 2);
    for (int k = 1; k <= m / 2; ++k) n->series[k - 1] = c(k) / std::pow(r, k);
    return DiscFunction(n);
}

DiscFunction operator*(const DiscFunction &a, const DiscFunction &b) {
    auto n = make(DiscFunction::Kind::product);
    n->kids = {a, b};
    return DiscFunction(n);
}

DiscFunction operator+(const DiscFunction &a, const DiscFunction &b) {
    auto n = make(DiscFunction::Kind::sum);
    n->kids = {a, b};
    return DiscFunction(n);
}

DiscFunction operator-(const DiscFunction &a, const DiscFunction &b) {
    return a + DiscFunction::constant(-1.0) * b;
}

DiscFunction operator/(const DiscFunction &a, const DiscFunction &b) {
    auto n = make(DiscFunction::Kind::quotient);
    n->kids = {a, b};
    return DiscFunction(n);
}

DiscFunction::Kind DiscFunction::kind() const { return node_->kind; }

cplx DiscFunction::operator()(cplx z) const {
    if (std::abs(z) > 1.0 + 1e-12)
        throw Error(Errc::input, "outside-disc", "evaluation point must satisfy |z| <= 1");
    const Node &n = *node_;
    switch (n.kind) {
    case Kind::constant:
        return n.value;
    case Kind::chi:
        return z;
    case Kind::blaschke:
        return n.blaschke(z);
    case Kind::singular_exp:
        if (z == cplx(1.0))
            throw Error(Errc::input, "evaluation-at-singularity", "singular exponential is undefined at z = 1");
        return std::exp(n.a * (z + 1.0) / (z - 1.0));
    case Kind::outer:
        return (*n.outer)(z);
    case Kind::product:
        return n.kids[0](z) * n.kids[1](z);
    case Kind::sum:
        return n.kids[0](z) + n.kids[1](z);
    case Kind::quotient:
        return n.kids[0](z) / n.kids[1](z);
    case Kind::diff_quotient:
        if (std::abs(z) >= 1e-4) return (n.kids[0](z) - n.f0) / z;
        {
            cplx acc = 0.0;
            for (auto it = n.series.rbegin(); it != n.series.rend(); ++it) acc = acc * z + *it;
            return acc;
        }
    }
    return 0.0;
}

CVec DiscFunction::sample(const BoundaryGrid &grid) const {
    const int g = grid.size();
    const Node &n = *node_;
    CVec out(g);
    switch (n.kind) {
    case Kind::constant:
        out.setConstant(n.value);
        break;
    case Kind::chi:
        for (int j = 0; j < g; ++j) out(j) = grid.point(j);
        break;
    case Kind::blaschke:
        for (int j = 0; j < g; ++j) out(j) = n.blaschke(grid.point(j));
        break;
    case Kind::singular_exp:
        out(0) = cplx(kNaN, kNaN);
        for (int j = 1; j < g; ++j) {
            cplx z = grid.point(j);
            out(j) = std::exp(n.a * (z + 1.0) / (z - 1.0));
        }
        break;
    case Kind::outer:
        if (n.outer->grid() == grid) {
            out = n.outer->boundary();
        } else {
            for (int j = 0; j < g; ++j) out(j) = (*n.outer)(grid.point(j));
        }
        break;
    case Kind::product:
        out = n.kids[0].sample(grid).cwiseProduct(n.kids[1].sample(grid));
        break;
    case Kind::sum:
        out = n.kids[0].sample(grid) + n.kids[1].sample(grid);
        break;
    case Kind::quotient:
        out = n.kids[0].sample(grid).cwiseQuotient(n.kids[1].sample(grid));
        break;
    case Kind::diff_quotient: {
        CVec f = n.kids[0].sample(grid);
        for (int j = 0; j < g; ++j) out(j) = (f(j) - n.f0) / grid.point(j);
        break;
    }
    }
    return out;
}

std::vector<cplx> DiscFunction::singularities() const {
    const Node &n = *node_;
    if (n.kind == Kind::singular_exp) return {cplx(1.0)};
    std::vector<cplx> out;
    for (const DiscFunction &k : n.kids)
        for (cplx s : k.singularities()) {
            bool seen = false;
            for (cplx t : out) seen = seen || std::abs(t - s) < 1e-15;
            if (!seen) out.push_back(s);
        }
    return out;
}

bool DiscFunction::inner_by_construction() const {
    const Node &n = *node_;
    switch (n.kind) {
    case Kind::constant:
        return std::abs(std::abs(n.value) - 1.0) < 1e-12;
    case Kind::chi:
    case Kind::blaschke:
    case Kind::singular_exp:
        return true;
    case Kind::product:
        return n.kids[0].inner_by_construction() && n.kids[1].inner_by_construction();
    default:
        return false;
    }
}

bool DiscFunction::is_zero() const { return node_->kind == Kind::constant && node_->value == cplx(0.0); }

cplx DiscFunction::constant_value() const {
    if (node_->kind != Kind::constant) throw Error(Errc::input, "kind", "not a constant");
    return node_->value;
}

const BlaschkeProduct &DiscFunction::blaschke_product() const {
    if (node_->kind != Kind::blaschke) throw Error(Errc::input, "kind", "not a Blaschke product");
    return node_->blaschke;
}

double DiscFunction::exp_parameter() const {
    if (node_->kind != Kind::singular_exp) throw Error(Errc::input, "kind", "not a singular exponential");
    return node_->a;
}

std::shared_ptr<const OuterFunction> DiscFunction::outer_function() const {
    if (node_->kind != Kind::outer) throw Error(Errc::input, "kind", "not an outer function");
    return node_->outer;
}

std::vector<DiscFunction> DiscFunction::children() const { return node_->kids; }

std::optional<std::pair<cplx, BlaschkeProduct>> DiscFunction::as_rational_inner() const {
    const Node &n = *node_;
    switch (n.kind) {
    case Kind::constant:
        return std::make_pair(n.value, BlaschkeProduct());
    case Kind::chi:
        return std::make_pair(cplx(1.0), BlaschkeProduct({cplx(0.0)}));
    case Kind::blaschke:
        return std::make_pair(n.blaschke.constant(), BlaschkeProduct(n.blaschke.zeros()));
    case Kind::product: {
        auto l = n.kids[0].as_rational_inner();
        auto r = n.kids[1].as_rational_inner();
        if (!l || !r) return std::nullopt;
        return std::make_pair(l->first * r->first, l->second * r->second);
    }
    default:
        return std::nullopt;
    }
}

// ---------------------------------------------------------------- factorization

DiscFunction outer_from_log_modulus(const BoundaryGrid &grid, const RVec &w) {
    return DiscFunction::outer(OuterFunction::from_modulus(grid, w));
}

InnerOuter inner_outer_factorize(const DiscFunction &f, const BoundaryGrid &grid) {
    CVec s = f.sample(grid);
    RVec w(grid.size());
    InnerOuter io;
    for (int j = 0; j < grid.size(); ++j) {
        w(j) = std::isfinite(std::abs(s(j))) ? std::abs(s(j)) : 1.0;
        if (w(j) < OuterFunction::kClamp) ++io.near_zero_points;
    }
    io.outer = outer_from_log_modulus(grid, w);
    io.inner = f / io.outer;
    CVec in = io.inner.sample(grid);
    for (int j = 0; j < grid.size(); ++j) {
        if (w(j) < OuterFunction::kClamp || !std::isfinite(std::abs(in(j)))) continue;
        io.inner_certificate = std::max(io.inner_certificate, std::abs(std::abs(in(j)) - 1.0));
    }
    return io;
}

std::vector<bool> singular_cells(const DiscFunction &f, const BoundaryGrid &grid, int radius) {
    std::vector<bool> mask(grid.size(), false);
    const int g = grid.size();
    for (cplx s : f.singularities()) {
        int j = grid.nearest(s);
        for (int d = -radius; d <= radius; ++d) mask[((j + d) % g + g) % g] = true;
    }
    return mask;
}

} // namespace msl
