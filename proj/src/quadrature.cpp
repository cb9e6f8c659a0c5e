#include <cassert>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "rag/model.hpp"
#include "rag/stats.hpp"

// Midpoint-rule lattice quadrature for the kernel moments. All lattice sums
// are accumulated as exact integers, so results are deterministic and
// independent of any loop partitioning.
//
// Indicator values are stored in half-units ({0,1,2} = {outside, boundary,
// inside}). A lattice point exactly on an annulus boundary takes the average
// of the two one-sided limits (weight 1/2): with r*grid integral the grid
// hits the relative-distance breakpoints exactly, and this convention is what
// keeps the rule exact for the piecewise-constant integrand (the strict
// convention leaves an O(1/grid) boundary deficit). The coincidence line
// d = 0 with r2 = 0 is a removable discontinuity, not a jump, so it takes
// the almost-everywhere value 1.

namespace rag {

namespace {

struct RelSpec {
    // interior band of min-representative offsets: rel = 2 for mlo <= m <= mhi
    std::int64_t mlo = 0;
    std::int64_t mhi = -1;
    std::int64_t tie[2] = {0, 0};  // boundary offsets, rel = 1
    int n_ties = 0;
    std::uint64_t rel0 = 0;   // weight at offset 0 (2 when r2 == 0)
    std::uint64_t rtot = 0;   // sum of rel over all G offsets
};

RelSpec classify_offsets(std::uint32_t G, double r1, double r2) {
    RelSpec rs;
    if (r2 == 0.0) rs.rel0 = 2;
    rs.rtot = rs.rel0;
    bool in_band = false;
    for (std::uint32_t m = 1; 2 * m <= G; ++m) {
        const double t = static_cast<double>(m) / static_cast<double>(G);
        const std::uint64_t mult = (2 * m == G) ? 1 : 2;  // offsets m and G-m
        if (r2 < t && t < r1) {
            if (!in_band) {
                rs.mlo = m;
                in_band = true;
            }
            rs.mhi = m;
            rs.rtot += 2 * mult;
        } else if (t == r1 || t == r2) {
            assert(rs.n_ties < 2);
            rs.tie[rs.n_ties++] = m;
            rs.rtot += mult;
        }
    }
    return rs;
}

std::vector<std::uint8_t> abs_table(std::uint32_t G, double x1, double r1, double r2) {
    std::vector<std::uint8_t> abs2(G);
    for (std::uint32_t k = 0; k < G; ++k) {
        const double u = (static_cast<double>(k) + 0.5) / static_cast<double>(G);
        const double d = circle_distance(x1, u);
        std::uint8_t v = 0;
        if (r2 < d && d < r1)
            v = 2;
        else if (d == r1 || d == r2)
            v = (d == 0.0) ? 2 : 1;  // d == 0 only when r2 == 0
        abs2[k] = v;
    }
    return abs2;
}

struct LatticeAccumulator {
    std::uint32_t G;
    std::vector<std::uint8_t> abs2;
    std::vector<std::uint64_t> prefix;  // prefix[i] = sum of abs2[0..i)
    RelSpec rs;
    std::uint64_t sa = 0;

    LatticeAccumulator(std::uint32_t grid, double x1, double r1, double r2)
        : G(grid), abs2(abs_table(grid, x1, r1, r2)), rs(classify_offsets(grid, r1, r2)) {
        prefix.resize(G + 1);
        prefix[0] = 0;
        for (std::uint32_t k = 0; k < G; ++k) prefix[k + 1] = prefix[k] + abs2[k];
        sa = prefix[G];
    }

    // sum of abs2 over circular index range [a, a+len)
    std::uint64_t circ_sum(std::uint64_t a, std::uint64_t len) const {
        a %= G;
        const std::uint64_t b = a + len;
        if (b <= G) return prefix[b] - prefix[a];
        return (prefix[G] - prefix[a]) + prefix[b - G];
    }

    // sum over k of abs2[k] * rel[(k - j) mod G]
    std::uint64_t row_correlation(std::uint32_t j) const {
        std::uint64_t r = static_cast<std::uint64_t>(rs.rel0) * abs2[j];
        if (rs.mhi >= rs.mlo) {
            const std::uint64_t len = static_cast<std::uint64_t>(rs.mhi - rs.mlo + 1);
            r += 2 * circ_sum(j + static_cast<std::uint64_t>(rs.mlo), len);
            r += 2 * circ_sum(j + G - static_cast<std::uint64_t>(rs.mhi), len);
        }
        for (int t = 0; t < rs.n_ties; ++t) {
            const std::uint64_t m = static_cast<std::uint64_t>(rs.tie[t]);
            r += abs2[(j + m) % G];
            if (2 * m != G) r += abs2[(j + G - m) % G];
        }
        return r;
    }
};

} // namespace

SigmaEstimate sigma2_cubature(const KernelParams& kp, std::uint32_t grid) {
    if (grid < 100) throw std::invalid_argument("sigma2_cubature: grid must be >= 100");
    const LatticeAccumulator lat(grid, 0.0, kp.r1, kp.r2);
    const double c = kp.c;
    const std::uint64_t pair_base = lat.sa + lat.rs.rtot;

    // The integrand factorizes given the middle coordinate: the lattice sum
    // over (u,v,w) equals sum_u (row sum over v)^2, a sum of squares, so the
    // estimate is nonnegative by construction.
    double acc = 0.0;
    for (std::uint32_t j = 0; j < lat.G; ++j) {
        const std::uint64_t rowar = lat.row_correlation(j);
        const std::uint64_t p8 = lat.abs2[j] * rowar;              // triple products, eighth-units
        const std::uint64_t w4 = lat.abs2[j] * pair_base + rowar;  // pair products, quarter-units
        const double s8 = static_cast<double>(p8) - 2.0 * c * static_cast<double>(w4);
        acc += s8 * s8;
    }
    const double g = static_cast<double>(grid);
    SigmaEstimate est;
    est.value = acc / (64.0 * g * g * g);
    est.std_error = 0.0;
    est.method = SigmaMethod::cubature;
    est.samples_or_grid = grid;
    return est;
}

double mean_h_conditional(double x1, const KernelParams& kp, std::uint32_t grid) {
    if (grid < 2) throw std::invalid_argument("mean_h_conditional: grid must be >= 2");
    if (!(x1 >= 0.0 && x1 < 1.0))
        throw std::invalid_argument("mean_h_conditional: x1 must lie in [0,1)");
    const LatticeAccumulator lat(grid, x1, kp.r1, kp.r2);

    std::uint64_t triple = 0;
    for (std::uint32_t j = 0; j < lat.G; ++j)
        if (lat.abs2[j] != 0) triple += lat.abs2[j] * lat.row_correlation(j);

    const double sa = static_cast<double>(lat.sa);
    const double rtot = static_cast<double>(lat.rs.rtot);
    const double g = static_cast<double>(grid);
    return (static_cast<double>(triple) - 2.0 * kp.c * (sa * sa + 2.0 * sa * rtot)) /
           (8.0 * g * g);
}

} // namespace rag
