#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace rag {

// Error types surfaced by the library. Validation failures of user-supplied
// parameters throw std::invalid_argument; the named conditions below carry
// their own types so callers can react specifically.

struct CapExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RegimeViolation : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct NonpositiveSigma : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct EmptySample : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct TooManyExclusions : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Model triple (n, r1, r2) of the random annulus graph: n points uniform on
/// the unit circle, an edge iff the circle distance lies strictly in (r2, r1).
/// Requires 0 <= r2 < r1 <= 0.5.
struct AnnulusParams {
    std::uint32_t n = 0;
    double r1 = 0.0;
    double r2 = 0.0;

    AnnulusParams(std::uint32_t n_, double r1_, double r2_) : n(n_), r1(r1_), r2(r2_) {
        if (n == 0)
            throw std::invalid_argument("AnnulusParams: n must be positive");
        if (!(r1 > 0.0) || !(r1 <= 0.5))
            throw std::invalid_argument("AnnulusParams: r1 must lie in (0, 0.5]");
        if (!(r2 >= 0.0) || !(r2 < 0.5))
            throw std::invalid_argument("AnnulusParams: r2 must lie in [0, 0.5)");
        if (!(r2 < r1))
            throw std::invalid_argument("AnnulusParams: requires r2 < r1");
    }

    /// Theorem regime 2*r2 < r1. Triangles have positive probability only here.
    bool clt_regime() const { return 2.0 * r2 < r1; }
};

/// Kernel coefficient c = (r1-2r2)^2 / (4 (r1-r2)^2) and the limiting
/// clustering coefficient 3c. Only defined in the regime 2*r2 < r1.
struct KernelParams {
    double r1 = 0.0;
    double r2 = 0.0;
    double c = 0.0;
    double limit = 0.0;

    KernelParams(double r1_, double r2_) : r1(r1_), r2(r2_) {
        if (!(r1 > 0.0) || !(r1 <= 0.5) || !(r2 >= 0.0) || !(r2 < r1))
            throw std::invalid_argument("KernelParams: invalid radii");
        if (!(2.0 * r2 < r1))
            throw RegimeViolation("KernelParams: requires 2*r2 < r1 (clt regime)");
        const double num = r1 - 2.0 * r2;
        const double den = r1 - r2;
        c = (num * num) / (4.0 * den * den);
        limit = 3.0 * c;
    }

    explicit KernelParams(const AnnulusParams& p) : KernelParams(p.r1, p.r2) {}
};

/// Deterministic stream identity: the same (master_seed, stream_id) always
/// reproduces the same draws, independent of thread scheduling.
struct RngSeed {
    std::uint64_t master_seed = 0;
    std::uint64_t stream_id = 0;

    bool operator==(const RngSeed&) const = default;
};

} // namespace rag
