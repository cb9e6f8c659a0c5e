#include "rag/stats.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "rag/kernels.hpp"
#include "rag/model.hpp"
#include "rag/rng.hpp"

namespace rag {

std::optional<double> clustering_coefficient(const GraphCounts& counts) {
    if (counts.ordered_paths == 0) return std::nullopt;
    return static_cast<double>(counts.ordered_triangles) /
           static_cast<double>(counts.ordered_paths);
}

double asymptotic_limit(const KernelParams& kp) { return kp.limit; }

double kernel_h(double x1, double x2, double x3, const KernelParams& kp) {
    const auto adjacent = [&kp](double a, double b) {
        const double d = circle_distance(a, b);
        return (kp.r2 < d && d < kp.r1) ? 1 : 0;
    };
    const int a12 = adjacent(x1, x2);
    const int a13 = adjacent(x1, x3);
    const int a23 = adjacent(x2, x3);
    const int t = a12 & a13 & a23;
    const int w = a12 * a13 + a12 * a23 + a13 * a23;
    return static_cast<double>(t) - kp.c * static_cast<double>(w);
}

SigmaEstimate sigma2_monte_carlo(const KernelParams& kp, std::uint64_t num_samples,
                                 const RngSeed& seed) {
    if (num_samples < 10000)
        throw std::invalid_argument("sigma2_monte_carlo: num_samples must be >= 10^4");

    constexpr std::size_t kBatch = 4096;
    std::vector<double> x1(kBatch), x2(kBatch), x3(kBatch), x4(kBatch);
    simd::McMoments acc;

    std::uint64_t s = 0;
    while (s < num_samples) {
        const std::size_t b = static_cast<std::size_t>(std::min<std::uint64_t>(kBatch, num_samples - s));
        for (std::size_t i = 0; i < b; ++i) {
            const PhiloxBlock blk = stream_block(seed, StreamDomain::sigma_mc, s + i);
            x1[i] = u64_to_unit(blk[0]);
            x2[i] = u64_to_unit(blk[1]);
            x3[i] = u64_to_unit(blk[2]);
            x4[i] = u64_to_unit(blk[3]);
        }
        simd::mc_accumulate(x1.data(), x2.data(), x3.data(), x4.data(), b, kp.r1, kp.r2, acc);
        s += b;
    }

    // h1*h2 = tt - c*tw + c^2*ww with integer monomials; tt^2 = tt per sample.
    const double n = static_cast<double>(num_samples);
    const double c = kp.c;
    const double m1 = (static_cast<double>(acc.tt) - c * static_cast<double>(acc.tw) +
                       c * c * static_cast<double>(acc.ww)) /
                      n;
    const double m2 =
        (static_cast<double>(acc.tt) - 2.0 * c * static_cast<double>(acc.tt_tw) +
         c * c * (static_cast<double>(acc.tw_tw) + 2.0 * static_cast<double>(acc.tt_ww)) -
         2.0 * c * c * c * static_cast<double>(acc.tw_ww) +
         c * c * c * c * static_cast<double>(acc.ww_ww)) /
        n;
    const double var = std::max(m2 - m1 * m1, 0.0);

    SigmaEstimate est;
    est.value = m1;
    est.std_error = std::sqrt(var / n);
    est.method = SigmaMethod::monte_carlo;
    est.samples_or_grid = num_samples;
    return est;
}

double standardized_statistic(double cn, const AnnulusParams& params, const SigmaEstimate& sigma) {
    const KernelParams kp(params);  // throws RegimeViolation outside 2*r2 < r1
    if (!(sigma.value > 0.0))
        throw NonpositiveSigma("standardized_statistic: sigma^2 estimate must be positive");
    const double d = params.r1 - params.r2;
    const double scale = 2.0 * std::sqrt(2.0) * d * d * static_cast<double>(params.n) /
                         (3.0 * std::sqrt(sigma.value));
    return scale * (cn - kp.limit);
}

double normal_cdf(double z) {
    // Abramowitz & Stegun 26.2.17, |error| < 7.5e-8.
    constexpr double p = 0.2316419;
    constexpr double b1 = 0.319381530;
    constexpr double b2 = -0.356563782;
    constexpr double b3 = 1.781477937;
    constexpr double b4 = -1.821255978;
    constexpr double b5 = 1.330274429;
    const double x = std::fabs(z);
    const double t = 1.0 / (1.0 + p * x);
    const double poly = t * (b1 + t * (b2 + t * (b3 + t * (b4 + t * b5))));
    const double pdf = std::exp(-0.5 * x * x) * 0.3989422804014327;  // 1/sqrt(2 pi)
    const double upper = 1.0 - pdf * poly;
    return z >= 0.0 ? upper : 1.0 - upper;
}

double ks_distance(std::span<const double> samples) {
    if (samples.empty()) throw EmptySample("ks_distance: empty sample");
    std::vector<double> s(samples.begin(), samples.end());
    for (const double v : s)
        if (!std::isfinite(v)) throw std::invalid_argument("ks_distance: non-finite sample");
    std::sort(s.begin(), s.end());
    const double n = static_cast<double>(s.size());
    double d = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double f = normal_cdf(s[i]);
        d = std::max(d, f - static_cast<double>(i) / n);
        d = std::max(d, static_cast<double>(i + 1) / n - f);
    }
    return d;
}

std::string SigmaEstimate::to_json() const {
    nlohmann::ordered_json j;
    j["value"] = value;
    j["std_error"] = std_error;
    j["method"] = method == SigmaMethod::cubature ? "cubature" : "monte_carlo";
    j["samples_or_grid"] = samples_or_grid;
    return j.dump();
}

} // namespace rag
