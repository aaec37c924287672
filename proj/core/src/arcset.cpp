#include "msl/arcset.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "msl/common.hpp"

namespace msl {

namespace {

const Rational kZero(0);
const Rational kOne(1);

} // namespace

ArcSet ArcSet::full() {
    ArcSet s;
    s.arcs_.push_back({kZero, kOne});
    return s;
}

ArcSet ArcSet::from_arcs(const std::vector<Arc> &arcs) {
    ArcSet s;
    for (const Arc &a : arcs) {
        if (a.start < kZero || a.start > kOne || a.end < kZero || a.end > kOne)
            throw Error(Errc::input, "arc-range", "arc endpoints must lie in [0,1]");
        if (a.start < a.end) {
            s.arcs_.push_back(a);
        } else if (a.start > a.end) {
            if (a.start < kOne) s.arcs_.push_back({a.start, kOne});
            if (a.end > kZero) s.arcs_.push_back({kZero, a.end});
        }
    }
    s.normalize();
    return s;
}

void ArcSet::normalize() {
    std::sort(arcs_.begin(), arcs_.end(),
              [](const Arc &x, const Arc &y) { return x.start < y.start; });
    std::vector<Arc> out;
    for (const Arc &a : arcs_) {
        if (!(a.start < a.end)) continue;
        if (!out.empty() && a.start <= out.back().end)
            out.back().end = std::max(out.back().end, a.end);
        else
            out.push_back(a);
    }
    arcs_ = std::move(out);
}

Rational ArcSet::measure() const {
    Rational m(0);
    for (const Arc &a : arcs_) m += a.length();
    return m;
}

bool ArcSet::contains(Rational t) const {
    for (const Arc &a : arcs_)
        if (a.start <= t && t < a.end) return true;
    return false;
}

ArcSet ArcSet::unite(const ArcSet &o) const {
    ArcSet s;
    s.arcs_ = arcs_;
    s.arcs_.insert(s.arcs_.end(), o.arcs_.begin(), o.arcs_.end());
    s.normalize();
    return s;
}

ArcSet ArcSet::intersect(const ArcSet &o) const {
    ArcSet s;
    std::size_t i = 0, j = 0;
    while (i < arcs_.size() && j < o.arcs_.size()) {
        const Arc &a = arcs_[i];
        const Arc &b = o.arcs_[j];
        Rational lo = std::max(a.start, b.start);
        Rational hi = std::min(a.end, b.end);
        if (lo < hi) s.arcs_.push_back({lo, hi});
        if (a.end < b.end)
            ++i;
        else
            ++j;
    }
    s.normalize();
    return s;
}

ArcSet ArcSet::complement() const {
    ArcSet s;
    Rational cur(0);
    for (const Arc &a : arcs_) {
        if (cur < a.start) s.arcs_.push_back({cur, a.start});
        cur = a.end;
    }
    if (cur < kOne) s.arcs_.push_back({cur, kOne});
    return s;
}

ArcSet ArcSet::subtract(const ArcSet &o) const { return intersect(o.complement()); }

std::string ArcSet::to_string() const {
    std::ostringstream os;
    os << '{';
    for (std::size_t i = 0; i < arcs_.size(); ++i) {
        if (i) os << ", ";
        os << '[' << arcs_[i].start << ", " << arcs_[i].end << ')';
    }
    os << '}';
    return os.str();
}

ArcSet cell_arcs(const std::vector<bool> &mask) {
    const auto g = static_cast<std::int64_t>(mask.size());
    std::vector<Arc> arcs;
    for (std::int64_t j = 0; j < g; ++j) {
        if (!mask[j]) continue;
        Rational s(2 * j - 1, 2 * g);
        Rational e(2 * j + 1, 2 * g);
        if (j == 0)
            arcs.push_back({Rational(2 * g - 1, 2 * g), e}); // wraps through 0
        else
            arcs.push_back({s, e});
    }
    return ArcSet::from_arcs(arcs);
}

std::vector<bool> grid_membership(const ArcSet &s, int grid_size) {
    std::vector<bool> in(grid_size, false);
    for (const Arc &a : s.arcs()) {
        // grid points j/G with start <= j/G < end
        std::int64_t lo = boost::rational_cast<std::int64_t>(a.start * grid_size);
        if (Rational(lo, grid_size) < a.start) ++lo;
        for (std::int64_t j = lo; j < grid_size && Rational(j, grid_size) < a.end; ++j) in[j] = true;
    }
    return in;
}

std::vector<ArcSet> split_positive(const ArcSet &s, int count) {
    if (count < 1) throw Error(Errc::input, "split-count", "count must be positive");
    if (s.measure() <= kZero)
        throw Error(Errc::precondition, "zero-measure", "cannot split a null set");
    std::vector<ArcSet> pieces;
    ArcSet rest = s;
    for (int i = 0; i + 1 < count; ++i) {
        const auto &arcs = rest.arcs();
        std::size_t best = 0;
        for (std::size_t k = 1; k < arcs.size(); ++k)
            if (arcs[k].length() > arcs[best].length()) best = k;
        const Arc a = arcs[best];
        Rational mid = (a.start + a.end) / 2;
        ArcSet piece = ArcSet::arc(mid, a.end);
        pieces.push_back(piece);
        rest = rest.subtract(piece);
    }
    pieces.push_back(rest);
    return pieces;
}

namespace {

std::vector<ArcSet> refine_impl(const std::vector<ArcSet> &tau) {
    const std::size_t n = tau.size();
    if (n == 1) return tau;
    if (n == 2) {
        std::size_t i = 0, j = 1;
        if (tau[1].measure() < tau[0].measure()) std::swap(i, j);
        ArcSet t2 = tau[j].subtract(tau[i]);
        std::vector<ArcSet> sigma(2);
        if (t2.measure() > kZero) {
            sigma[i] = tau[i];
            sigma[j] = t2;
        } else {
            auto parts = split_positive(tau[i], 2);
            sigma[i] = parts[0];
            sigma[j] = parts[1];
        }
        return sigma;
    }
    // Minimal measure, last index on ties.
    std::size_t p = 0;
    for (std::size_t k = 1; k < n; ++k)
        if (tau[k].measure() <= tau[p].measure()) p = k;
    std::vector<ArcSet> rest(n);
    std::vector<std::size_t> positive, null;
    for (std::size_t k = 0; k < n; ++k) {
        if (k == p) continue;
        rest[k] = tau[k].subtract(tau[p]);
        (rest[k].measure() > kZero ? positive : null).push_back(k);
    }
    std::vector<ArcSet> sigma(n);
    if (positive.size() == 1) {
        sigma[positive[0]] = rest[positive[0]];
    } else if (positive.size() > 1) {
        std::vector<ArcSet> sub;
        for (std::size_t k : positive) sub.push_back(rest[k]);
        auto refined = refine_impl(sub);
        for (std::size_t t = 0; t < positive.size(); ++t) sigma[positive[t]] = refined[t];
    }
    // The null indices satisfy tau_k = tau_p exactly (minimality of p), so they share tau_p.
    auto parts = split_positive(tau[p], static_cast<int>(null.size()) + 1);
    for (std::size_t t = 0; t < null.size(); ++t) sigma[null[t]] = parts[t];
    sigma[p] = parts.back();
    return sigma;
}

} // namespace

std::vector<ArcSet> refine_disjoint(const std::vector<ArcSet> &tau) {
    if (tau.empty()) throw Error(Errc::input, "empty-family", "need at least one set");
    for (const ArcSet &t : tau)
        if (t.measure() <= kZero)
            throw Error(Errc::precondition, "zero-measure", "every input set needs positive measure");
    return refine_impl(tau);
}

} // namespace msl
