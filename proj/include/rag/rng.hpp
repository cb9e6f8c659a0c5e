#pragma once

#include <array>
#include <cstdint>

#include "rag/params.hpp"

namespace rag {

// Philox4x64-10 counter-based generator (Salmon et al., "Parallel random
// numbers: as easy as 1, 2, 3"). Stateless: any 256-bit counter block can be
// generated independently, so work can be partitioned across threads without
// affecting the stream. Output matches the reference implementation
// (known-answer vectors pinned in tests/test_rng.cpp).

using PhiloxBlock = std::array<std::uint64_t, 4>;

PhiloxBlock philox4x64(std::uint64_t c0, std::uint64_t c1, std::uint64_t c2, std::uint64_t c3,
                       std::uint64_t key0, std::uint64_t key1);

/// Domain tags keep independent uses of the same seed on disjoint counters.
enum class StreamDomain : std::uint64_t {
    positions = 0,
    sigma_mc = 1,
    normal = 2,
};

/// Block `index` of the stream identified by (seed, domain).
inline PhiloxBlock stream_block(const RngSeed& seed, StreamDomain domain, std::uint64_t index) {
    return philox4x64(index, static_cast<std::uint64_t>(domain), 0, 0,
                      seed.master_seed, seed.stream_id);
}

/// Map a 64-bit word to a double in [0, 1) using the top 53 bits.
inline double u64_to_unit(std::uint64_t x) {
    return static_cast<double>(x >> 11) * 0x1.0p-53;
}

/// Buffered sequential view of one (seed, domain) stream.
class UniformStream {
  public:
    UniformStream(const RngSeed& seed, StreamDomain domain)
        : seed_(seed), domain_(domain) {}

    double next() {
        if (lane_ == 4) {
            block_ = stream_block(seed_, domain_, index_++);
            lane_ = 0;
        }
        return u64_to_unit(block_[lane_++]);
    }

    /// Standard normal draw (Box-Muller; consumes two uniforms).
    double next_normal();

  private:
    RngSeed seed_;
    StreamDomain domain_;
    PhiloxBlock block_{};
    std::uint64_t index_ = 0;
    int lane_ = 4;
};

} // namespace rag
