#include "rag/model.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>

#include "rag/kernels.hpp"

namespace rag {

PositionSet sample_positions(const AnnulusParams& params, const RngSeed& seed) {
    PositionSet ps;
    const std::uint32_t n = params.n;
    ps.positions.resize(n);
    for (std::uint64_t b = 0; 4 * b < n; ++b) {
        const PhiloxBlock blk = stream_block(seed, StreamDomain::positions, b);
        for (int lane = 0; lane < 4; ++lane) {
            const std::uint64_t i = 4 * b + lane;
            if (i < n) ps.positions[i] = u64_to_unit(blk[lane]);
        }
    }

    ps.sorted_order.resize(n);
    std::iota(ps.sorted_order.begin(), ps.sorted_order.end(), 0u);
    std::sort(ps.sorted_order.begin(), ps.sorted_order.end(),
              [&](std::uint32_t a, std::uint32_t b) {
                  const double pa = ps.positions[a];
                  const double pb = ps.positions[b];
                  return pa < pb || (pa == pb && a < b);  // index tiebreak keeps the sort deterministic
              });

    ps.sorted.resize(n);
    for (std::uint32_t k = 0; k < n; ++k) ps.sorted[k] = ps.positions[ps.sorted_order[k]];
    return ps;
}

AdjacencyMatrix build_adjacency(const PositionSet& ps, const AnnulusParams& params,
                                std::uint32_t cap) {
    const std::uint32_t n = ps.size();
    if (n > cap)
        throw CapExceeded("build_adjacency: n=" + std::to_string(n) + " exceeds cap " +
                          std::to_string(cap) + "; use count_graph instead");
    AdjacencyMatrix m;
    m.n = n;
    m.a.assign(std::size_t(n) * n, 0);
    for (std::uint32_t i = 0; i < n; ++i) {
        simd::edge_indicator_row(ps.positions[i], ps.positions.data(), n, params.r1, params.r2,
                                 m.a.data() + std::size_t(i) * n);
        m.a[std::size_t(i) * n + i] = 0;  // A_ii = 0 regardless of coincident points
    }
    return m;
}

void write_edge_list(std::ostream& os, const PositionSet& ps, const AnnulusParams& params,
                     const RngSeed& seed) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "# rag n=%u r1=%.17g r2=%.17g seed=%llu:%llu\n", params.n,
                  params.r1, params.r2, static_cast<unsigned long long>(seed.master_seed),
                  static_cast<unsigned long long>(seed.stream_id));
    os << buf;
    const std::uint32_t n = ps.size();
    std::vector<std::uint8_t> row(n);
    for (std::uint32_t i = 0; i < n; ++i) {
        simd::edge_indicator_row(ps.positions[i], ps.positions.data(), n, params.r1, params.r2,
                                 row.data());
        for (std::uint32_t j = i + 1; j < n; ++j)
            if (row[j]) os << i << ' ' << j << '\n';
    }
}

void write_positions_csv(std::ostream& os, const PositionSet& ps) {
    os << "index,position\n";
    char buf[64];
    for (std::uint32_t i = 0; i < ps.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%u,%.17g\n", i, ps.positions[i]);
        os << buf;
    }
}

} // namespace rag
