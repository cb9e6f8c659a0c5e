#include "rag/rng.hpp"

#include <cmath>

namespace rag {

namespace {

constexpr std::uint64_t kMul0 = 0xD2E7470EE14C6C93ULL;
constexpr std::uint64_t kMul1 = 0xCA5A826395121157ULL;
constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73BULL;

inline std::uint64_t mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi) {
    const unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
    hi = static_cast<std::uint64_t>(p >> 64);
    return static_cast<std::uint64_t>(p);
}

inline void round_once(std::uint64_t c[4], std::uint64_t k0, std::uint64_t k1) {
    std::uint64_t hi0, hi1;
    const std::uint64_t lo0 = mulhilo(kMul0, c[0], hi0);
    const std::uint64_t lo1 = mulhilo(kMul1, c[2], hi1);
    const std::uint64_t n0 = hi1 ^ c[1] ^ k0;
    const std::uint64_t n1 = lo1;
    const std::uint64_t n2 = hi0 ^ c[3] ^ k1;
    const std::uint64_t n3 = lo0;
    c[0] = n0;
    c[1] = n1;
    c[2] = n2;
    c[3] = n3;
}

} // namespace

PhiloxBlock philox4x64(std::uint64_t c0, std::uint64_t c1, std::uint64_t c2, std::uint64_t c3,
                       std::uint64_t key0, std::uint64_t key1) {
    std::uint64_t c[4] = {c0, c1, c2, c3};
    std::uint64_t k0 = key0;
    std::uint64_t k1 = key1;
    round_once(c, k0, k1);
    for (int r = 1; r < 10; ++r) {
        k0 += kWeyl0;
        k1 += kWeyl1;
        round_once(c, k0, k1);
    }
    return {c[0], c[1], c[2], c[3]};
}

double UniformStream::next_normal() {
    // Box-Muller; 1-u keeps the log argument in (0, 1].
    const double u1 = 1.0 - next();
    const double u2 = next();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

} // namespace rag
