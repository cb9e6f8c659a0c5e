#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "rag/model.hpp"
#include "rag/params.hpp"

namespace rag {

/// Exact ordered counts for one realization.
///   ordered_triangles = sum over distinct (i,j,k) of A_ij A_jk A_ki  (= 6T)
///   ordered_paths     = sum over distinct (i,j,k) of A_ij A_jk       (= sum_j deg_j (deg_j - 1))
struct GraphCounts {
    std::uint64_t ordered_triangles = 0;
    std::uint64_t ordered_paths = 0;
    std::vector<std::uint32_t> degrees;  // indexed by original node id

    std::uint32_t max_degree() const;
};

/// Open circular arc from lo counterclockwise to hi (arithmetic mod 1).
/// Empty when lo == hi; never represents the full circle.
struct Arc {
    double lo = 0.0;
    double hi = 0.0;
};

/// Up to four pairwise-disjoint open arcs.
struct ArcSet {
    std::array<Arc, 4> arcs{};
    int count = 0;

    void push(const Arc& a) { arcs[count++] = a; }
    bool contains(double p) const;
    double total_length() const;
};

/// The annulus neighborhood of x: open arcs (x+r2, x+r1) and (x-r1, x-r2)
/// mod 1. A point y lies in the set iff edge_indicator(x, y, params) = 1.
ArcSet neighbor_arcs(double x, const AnnulusParams& params);

/// Number of positions inside the union of arcs, excluding up to two node
/// indices whose positions may fall inside. O(log n) per arc via binary
/// search on the sorted order.
std::uint64_t count_in_arcs(const PositionSet& ps, const ArcSet& arcs,
                            std::int64_t exclude0 = -1, std::int64_t exclude1 = -1);

/// Exact counts in O((n + m) log n): degrees by arc counting, triangles by
/// intersecting the annuli of each adjacent pair and counting common
/// neighbors. Bit-identical for any n_threads.
GraphCounts count_graph(const PositionSet& ps, const AnnulusParams& params,
                        unsigned n_threads = 1);

/// O(n^3) oracle: literal sum over all ordered triples with distinct indices.
GraphCounts brute_force_counts(const AdjacencyMatrix& adj);

/// {"n":..., "r1":..., "r2":..., "ordered_triangles":..., "ordered_paths":...,
///  "max_degree":...}
std::string counts_to_json(const GraphCounts& counts, const AnnulusParams& params);

} // namespace rag
