#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <boost/rational.hpp>

namespace msl {

using Rational = boost::rational<std::int64_t>;

// Half-open arc [start, end) of the circle, in full turns, 0 <= start < end <= 1.
struct Arc {
    Rational start;
    Rational end;
    Rational length() const { return end - start; }
    bool operator==(const Arc &) const = default;
};

// Finite union of half-open arcs with exact rational endpoints.
// Arcs are kept sorted, pairwise disjoint and merged when adjacent.
class ArcSet {
public:
    ArcSet() = default;
    static ArcSet full();
    static ArcSet empty() { return {}; }
    // Accepts arcs in any order, possibly overlapping; an arc with start > end wraps through 0.
    static ArcSet from_arcs(const std::vector<Arc> &arcs);
    static ArcSet arc(Rational start, Rational end) { return from_arcs({{start, end}}); }

    const std::vector<Arc> &arcs() const { return arcs_; }
    bool is_empty() const { return arcs_.empty(); }
    Rational measure() const;
    bool contains(Rational t) const;

    ArcSet unite(const ArcSet &o) const;
    ArcSet intersect(const ArcSet &o) const;
    ArcSet subtract(const ArcSet &o) const;
    ArcSet complement() const;
    bool subset_of(const ArcSet &o) const { return subtract(o).is_empty(); }
    bool operator==(const ArcSet &) const = default;

    std::string to_string() const;

private:
    void normalize();
    std::vector<Arc> arcs_;
};

// Grid cells are centered at the grid points: cell j = [(2j-1)/(2G), (2j+1)/(2G)) mod 1.
ArcSet cell_arcs(const std::vector<bool> &mask);
// Membership of grid point j/G in the set.
std::vector<bool> grid_membership(const ArcSet &s, int grid_size);

// Splits a set of positive measure into `count` pieces of positive measure by repeatedly
// cutting the longest remaining arc at its midpoint and peeling off the right half.
std::vector<ArcSet> split_positive(const ArcSet &s, int count);

// Disjoint refinement: sigma_n subset of tau_n, pairwise disjoint, positive measure,
// with the same union. Throws on an input of zero measure.
std::vector<ArcSet> refine_disjoint(const std::vector<ArcSet> &tau);

} // namespace msl
