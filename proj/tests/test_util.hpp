#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include "rag/model.hpp"

namespace rag::test {

/// PositionSet from explicit values (tests bypass sampling).
inline PositionSet make_position_set(std::vector<double> values) {
    PositionSet ps;
    ps.positions = std::move(values);
    const std::uint32_t n = ps.size();
    ps.sorted_order.resize(n);
    std::iota(ps.sorted_order.begin(), ps.sorted_order.end(), 0u);
    std::sort(ps.sorted_order.begin(), ps.sorted_order.end(), [&](std::uint32_t a, std::uint32_t b) {
        return ps.positions[a] < ps.positions[b] || (ps.positions[a] == ps.positions[b] && a < b);
    });
    ps.sorted.resize(n);
    for (std::uint32_t k = 0; k < n; ++k) ps.sorted[k] = ps.positions[ps.sorted_order[k]];
    return ps;
}

} // namespace rag::test
