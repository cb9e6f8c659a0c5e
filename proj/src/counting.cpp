#include "rag/counting.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include <nlohmann/json.hpp>

namespace rag {

namespace {

double wrap_unit(double v) {
    if (v >= 1.0) return v - 1.0;
    if (v < 0.0) return v + 1.0;
    return v;
}

// Linear piece of an open circular arc. closed_lo marks the [0, hi) piece
// produced by splitting a wrapping arc, so the point 0 stays inside.
struct Piece {
    double lo = 0.0;
    double hi = 0.0;
    bool closed_lo = false;
};

int split_arc(const Arc& arc, Piece out[2]) {
    if (arc.lo == arc.hi) return 0;  // empty
    if (arc.lo < arc.hi) {
        out[0] = {arc.lo, arc.hi, false};
        return 1;
    }
    int n = 0;
    if (arc.lo < 1.0) out[n++] = {arc.lo, 1.0, false};
    if (arc.hi > 0.0) out[n++] = {0.0, arc.hi, true};
    return n;
}

bool piece_contains(const Piece& p, double v) {
    if (v >= p.hi) return false;
    return v > p.lo || (p.closed_lo && v == p.lo);
}

// Sorted-index range [s, e) of positions inside a piece.
struct IdxRange {
    std::uint32_t s = 0;
    std::uint32_t e = 0;
    std::uint32_t size() const { return e - s; }
};

IdxRange piece_range(const std::vector<double>& xs, const Piece& p) {
    const auto b = xs.begin();
    const std::uint32_t s =
        p.closed_lo ? static_cast<std::uint32_t>(std::lower_bound(b, xs.end(), p.lo) - b)
                    : static_cast<std::uint32_t>(std::upper_bound(b, xs.end(), p.lo) - b);
    const std::uint32_t e = static_cast<std::uint32_t>(std::lower_bound(b, xs.end(), p.hi) - b);
    return {s, e >= s ? e : s};
}

// Up to four sorted-index ranges covering one node's annulus neighborhood.
struct NodeRanges {
    IdxRange r[4];
    int count = 0;
    int fwd = 0;  // ranges [0, fwd) come from the positive-direction arc
    std::uint32_t degree() const {
        std::uint32_t d = 0;
        for (int i = 0; i < count; ++i) d += r[i].size();
        return d;
    }
};

NodeRanges node_ranges(const std::vector<double>& xs, double x, double r1, double r2) {
    NodeRanges nr;
    Piece pieces[2];
    const Arc up{wrap_unit(x + r2), wrap_unit(x + r1)};
    const Arc down{wrap_unit(x - r1), wrap_unit(x - r2)};
    int np = split_arc(up, pieces);
    for (int i = 0; i < np; ++i) nr.r[nr.count++] = piece_range(xs, pieces[i]);
    nr.fwd = nr.count;
    np = split_arc(down, pieces);
    for (int i = 0; i < np; ++i) nr.r[nr.count++] = piece_range(xs, pieces[i]);
    return nr;
}

inline std::uint32_t overlap(const IdxRange& a, const IdxRange& b) {
    const std::uint32_t s = std::max(a.s, b.s);
    const std::uint32_t e = std::min(a.e, b.e);
    return e > s ? e - s : 0;
}

// |N(a) ∩ N(b)| from the precomputed ranges. The nodes a and b themselves
// never appear: neither lies in its own annulus.
inline std::uint64_t common_neighbors(const NodeRanges& a, const NodeRanges& b) {
    std::uint64_t c = 0;
    for (int i = 0; i < a.count; ++i)
        for (int j = 0; j < b.count; ++j) c += overlap(a.r[i], b.r[j]);
    return c;
}

} // namespace

std::uint32_t GraphCounts::max_degree() const {
    std::uint32_t m = 0;
    for (const std::uint32_t d : degrees) m = std::max(m, d);
    return m;
}

bool ArcSet::contains(double p) const {
    for (int i = 0; i < count; ++i) {
        const Arc& a = arcs[i];
        if (a.lo == a.hi) continue;
        if (a.lo < a.hi) {
            if (a.lo < p && p < a.hi) return true;
        } else {
            if (p > a.lo || p < a.hi) return true;
        }
    }
    return false;
}

double ArcSet::total_length() const {
    double len = 0.0;
    for (int i = 0; i < count; ++i) {
        const Arc& a = arcs[i];
        len += a.lo <= a.hi ? a.hi - a.lo : 1.0 - a.lo + a.hi;
    }
    return len;
}

ArcSet neighbor_arcs(double x, const AnnulusParams& params) {
    ArcSet set;
    set.push({wrap_unit(x + params.r2), wrap_unit(x + params.r1)});
    set.push({wrap_unit(x - params.r1), wrap_unit(x - params.r2)});
    return set;
}

std::uint64_t count_in_arcs(const PositionSet& ps, const ArcSet& arcs, std::int64_t exclude0,
                            std::int64_t exclude1) {
    std::uint64_t total = 0;
    Piece pieces[2];
    for (int i = 0; i < arcs.count; ++i) {
        const int np = split_arc(arcs.arcs[i], pieces);
        for (int p = 0; p < np; ++p) total += piece_range(ps.sorted, pieces[p]).size();
    }
    for (const std::int64_t ex : {exclude0, exclude1}) {
        if (ex >= 0 && ex < static_cast<std::int64_t>(ps.size()) &&
            arcs.contains(ps.positions[static_cast<std::size_t>(ex)]))
            --total;
    }
    return total;
}

GraphCounts count_graph(const PositionSet& ps, const AnnulusParams& params, unsigned n_threads) {
    const std::uint32_t n = ps.size();
    const std::vector<double>& xs = ps.sorted;

    std::vector<NodeRanges> ranges(n);
    std::vector<std::uint32_t> deg_sorted(n);

    if (n_threads == 0) n_threads = 1;
    n_threads = std::min<unsigned>(n_threads, std::max<std::uint32_t>(n / 64, 1));

    // pass 1: annulus index ranges and degrees
    auto ranges_chunk = [&](std::uint32_t lo, std::uint32_t hi) {
        for (std::uint32_t k = lo; k < hi; ++k) {
            ranges[k] = node_ranges(xs, xs[k], params.r1, params.r2);
            deg_sorted[k] = ranges[k].degree();
        }
    };
    // pass 2: each unordered edge once via the positive-direction arc;
    // sum of common-neighbor counts over edges = 3 * (unordered triangles)
    auto triangles_chunk = [&](std::uint32_t lo, std::uint32_t hi) {
        std::uint64_t sum = 0;
        for (std::uint32_t k = lo; k < hi; ++k) {
            const NodeRanges& nk = ranges[k];
            for (int f = 0; f < nk.fwd; ++f)
                for (std::uint32_t b = nk.r[f].s; b < nk.r[f].e; ++b)
                    sum += common_neighbors(nk, ranges[b]);
        }
        return sum;
    };

    std::uint64_t tri_pair_sum = 0;
    if (n_threads <= 1) {
        ranges_chunk(0, n);
        tri_pair_sum = triangles_chunk(0, n);
    } else {
        const std::uint32_t chunk = (n + n_threads - 1) / n_threads;
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < n_threads; ++t) {
            const std::uint32_t lo = std::min<std::uint32_t>(t * chunk, n);
            const std::uint32_t hi = std::min<std::uint32_t>(lo + chunk, n);
            pool.emplace_back(ranges_chunk, lo, hi);
        }
        for (auto& th : pool) th.join();
        pool.clear();
        std::vector<std::uint64_t> partial(n_threads, 0);
        for (unsigned t = 0; t < n_threads; ++t) {
            const std::uint32_t lo = std::min<std::uint32_t>(t * chunk, n);
            const std::uint32_t hi = std::min<std::uint32_t>(lo + chunk, n);
            pool.emplace_back([&, t, lo, hi] { partial[t] = triangles_chunk(lo, hi); });
        }
        for (auto& th : pool) th.join();
        for (const std::uint64_t s : partial) tri_pair_sum += s;  // integer sums: order-free
    }

    GraphCounts gc;
    gc.ordered_triangles = 2 * tri_pair_sum;
    gc.degrees.resize(n);
    std::uint64_t paths = 0;
    for (std::uint32_t k = 0; k < n; ++k) {
        const std::uint64_t d = deg_sorted[k];
        paths += d * (d - 1);
        gc.degrees[ps.sorted_order[k]] = deg_sorted[k];
    }
    gc.ordered_paths = paths;
    return gc;
}

GraphCounts brute_force_counts(const AdjacencyMatrix& adj) {
    const std::uint32_t n = adj.n;
    GraphCounts gc;
    gc.degrees.resize(n, 0);
    std::uint64_t paths = 0;
    std::uint64_t tris = 0;
    for (std::uint32_t i = 0; i < n; ++i) {
        std::uint32_t deg = 0;
        for (std::uint32_t j = 0; j < n; ++j) deg += adj.at(i, j);
        gc.degrees[i] = deg;
    }
    for (std::uint32_t i = 0; i < n; ++i)
        for (std::uint32_t j = 0; j < n; ++j) {
            if (j == i || !adj.at(i, j)) continue;
            for (std::uint32_t k = 0; k < n; ++k) {
                if (k == i || k == j) continue;
                const std::uint64_t ajk = adj.at(j, k);
                paths += ajk;
                tris += ajk & adj.at(k, i);
            }
        }
    gc.ordered_paths = paths;
    gc.ordered_triangles = tris;
    return gc;
}

std::string counts_to_json(const GraphCounts& counts, const AnnulusParams& params) {
    nlohmann::ordered_json j;
    j["n"] = params.n;
    j["r1"] = params.r1;
    j["r2"] = params.r2;
    j["ordered_triangles"] = counts.ordered_triangles;
    j["ordered_paths"] = counts.ordered_paths;
    j["max_degree"] = counts.max_degree();
    return j.dump();
}

} // namespace rag
