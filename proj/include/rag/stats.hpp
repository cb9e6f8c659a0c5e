#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rag/counting.hpp"
#include "rag/params.hpp"

namespace rag {

/// C_n = ordered_triangles / ordered_paths; empty when there are no 2-paths.
/// The undefined case is a value-level outcome (callers record and exclude),
/// not an exception.
std::optional<double> clustering_coefficient(const GraphCounts& counts);

/// (3/4) (r1-2r2)^2 / (r1-r2)^2, the asymptotic value of C_n.
double asymptotic_limit(const KernelParams& kp);

/// Centered triple kernel
///   h(x1,x2,x3) = A12 A13 A23 - c (A12 A13 + A12 A23 + A13 A23)
/// evaluated with the annulus indicator on the three points. Always equals
/// T - c*W with T the triangle indicator and W the number of adjacent pairs.
double kernel_h(double x1, double x2, double x3, const KernelParams& kp);

enum class SigmaMethod { monte_carlo, cubature };

/// Estimate of sigma^2 = E[h(X1,X2,X3) h(X1,X2,X4)].
struct SigmaEstimate {
    double value = 0.0;
    double std_error = 0.0;  // Monte Carlo standard error; 0 for cubature
    SigmaMethod method = SigmaMethod::monte_carlo;
    std::uint64_t samples_or_grid = 0;

    std::string to_json() const;
};

/// Plain Monte Carlo over i.i.d. uniform quadruples. Deterministic given
/// seed; the accumulation is exact integer arithmetic, so the result does not
/// depend on batching. Requires num_samples >= 10^4.
SigmaEstimate sigma2_monte_carlo(const KernelParams& kp, std::uint64_t num_samples,
                                 const RngSeed& seed);

/// Midpoint rule on a grid^3 lattice with X1 fixed at 0 (valid by rotational
/// invariance). The integrand factorizes over the last two coordinates, and
/// all lattice sums are accumulated as exact integers; a lattice point that
/// falls exactly on an annulus boundary receives weight 1/2 (the indicator's
/// two-sided limit), which keeps the rule exact for boundary-aligned grids.
/// Requires grid >= 100. std_error is 0; the result is >= 0 by construction.
SigmaEstimate sigma2_cubature(const KernelParams& kp, std::uint32_t grid);

/// 2-D midpoint-rule estimate of E[h(x1, X2, X3)] on a grid^2 lattice, same
/// boundary convention as sigma2_cubature. Used to verify the first-order
/// degeneracy E[h | X1] = 0 numerically.
double mean_h_conditional(double x1, const KernelParams& kp, std::uint32_t grid);

/// Standardized statistic of the central limit theorem:
///   2*sqrt(2) (r1-r2)^2 n / (3 sqrt(sigma^2)) * (C_n - limit).
double standardized_statistic(double cn, const AnnulusParams& params, const SigmaEstimate& sigma);

/// Standard normal CDF, absolute error <= 1e-7 (Abramowitz & Stegun 26.2.17
/// rational approximation).
double normal_cdf(double z);

/// Two-sided Kolmogorov-Smirnov distance between the empirical CDF of the
/// samples and the standard normal CDF. Throws EmptySample on empty input.
double ks_distance(std::span<const double> samples);

} // namespace rag
