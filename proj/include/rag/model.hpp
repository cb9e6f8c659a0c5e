#pragma once

#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "rag/params.hpp"
#include "rag/rng.hpp"

namespace rag {

/// n points on the circle plus the permutation that sorts them.
/// Immutable after construction; safe to share across threads.
struct PositionSet {
    std::vector<double> positions;            // original order, each in [0,1)
    std::vector<std::uint32_t> sorted_order;  // positions[sorted_order[k]] nondecreasing
    std::vector<double> sorted;               // cached sorted copy for arc queries

    std::uint32_t size() const { return static_cast<std::uint32_t>(positions.size()); }
};

/// n i.i.d. uniform draws on [0,1) from the stream keyed by `seed`.
PositionSet sample_positions(const AnnulusParams& params, const RngSeed& seed);

/// Circle metric d(x,y) = min(|x-y|, 1-|x-y|) on circumference 1.
inline double circle_distance(double x, double y) {
    const double a = std::fabs(x - y);
    return std::fmin(a, 1.0 - a);
}

/// Annulus edge predicate: 1 iff r2 < d(x,y) < r1, both strict.
/// Coincident points are never adjacent (d = 0 fails r2 < d for r2 >= 0).
inline int edge_indicator(double x, double y, const AnnulusParams& params) {
    const double d = circle_distance(x, y);
    return (params.r2 < d && d < params.r1) ? 1 : 0;
}

/// Dense symmetric 0/1 adjacency, zero diagonal. Brute-force representation
/// for oracles and small runs; build_adjacency enforces the cap.
struct AdjacencyMatrix {
    std::uint32_t n = 0;
    std::vector<std::uint8_t> a;  // row-major n*n

    std::uint8_t at(std::uint32_t i, std::uint32_t j) const { return a[std::size_t(i) * n + j]; }
};

inline constexpr std::uint32_t kDefaultAdjacencyCap = 2000;

AdjacencyMatrix build_adjacency(const PositionSet& ps, const AnnulusParams& params,
                                std::uint32_t cap = kDefaultAdjacencyCap);

// Export formats. Edge list: header line "# rag n=<n> r1=<r1> r2=<r2>
// seed=<master>:<stream>", then one "i j" line per edge with i < j (0-based).
// Positions: CSV "index,position" with 17 significant digits.
void write_edge_list(std::ostream& os, const PositionSet& ps, const AnnulusParams& params,
                     const RngSeed& seed);
void write_positions_csv(std::ostream& os, const PositionSet& ps);

} // namespace rag
