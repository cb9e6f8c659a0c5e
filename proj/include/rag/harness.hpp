#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rag/params.hpp"
#include "rag/stats.hpp"

namespace rag {

/// One multi-replicate experiment. Replicate k draws its positions from
/// stream_id = k of master_seed, so results are independent of scheduling.
struct ExperimentSpec {
    AnnulusParams params;
    std::uint32_t replicates = 1;
    std::uint64_t master_seed = 1;
    SigmaMethod sigma_method = SigmaMethod::cubature;
    std::uint64_t sigma_budget = 400;  // grid (cubature) or samples (monte carlo)
    std::string output_path;           // records CSV; empty = do not write
    unsigned threads = 0;              // 0 = hardware concurrency
    bool record_timings = false;       // wall-clock in the CSV breaks byte determinism
};

/// Desk-scale gates for the theorem's asymptotic conditions: r1 <= 0.1
/// (r1 = o(1)) and n*r1 >= 20 (n*r1 -> infinity). CLT experiments reject
/// parameters outside these.
void validate_clt_spec(const ExperimentSpec& spec);

struct ExperimentRecord {
    std::uint32_t replicate_index = 0;
    RngSeed seed;
    std::optional<double> cn;
    std::uint64_t ordered_triangles = 0;
    std::uint64_t ordered_paths = 0;
    std::optional<double> standardized;
    double duration_ms = 0.0;  // measured wall clock; in-memory only by default
};

struct CltSummary {
    std::uint32_t sample_count = 0;
    std::uint32_t excluded_count = 0;
    double mean = 0.0;
    double variance = 0.0;  // unbiased (n-1)
    double ks = 0.0;
    // 1%, 5%, 25%, 50%, 75%, 95%, 99% of the standardized statistics
    std::array<double, 7> quantiles{};
};

/// Acceptance bands for a CLT run (documented finite-sample surrogates):
/// KS <= 1.63/sqrt(R) (Kolmogorov alpha = 0.01), |mean| <= 0.2, sd in [0.8, 1.2].
struct CltVerdict {
    double ks_critical = 0.0;
    bool ks_pass = false;
    bool mean_pass = false;
    bool sd_pass = false;
    bool pass() const { return ks_pass && mean_pass && sd_pass; }
};
CltVerdict clt_verdict(const CltSummary& summary, std::uint32_t replicates);

/// Sample, count, and standardize one replicate. Pure given (spec, k, sigma).
ExperimentRecord run_replicate(const ExperimentSpec& spec, std::uint32_t k,
                               const SigmaEstimate& sigma);

struct CltResult {
    CltSummary summary;
    SigmaEstimate sigma;
    std::vector<ExperimentRecord> records;  // sorted by replicate_index
};

/// Computes sigma once, runs all replicates in parallel (deterministically),
/// writes the records file when requested, and summarizes. Throws
/// TooManyExclusions when more than 10% of replicates had undefined C_n
/// (records are written first).
CltResult run_clt_experiment(const ExperimentSpec& spec);

/// Summary of the defined standardized statistics in the records; throws
/// TooManyExclusions past the 10% threshold.
CltSummary summarize_standardized(const std::vector<ExperimentRecord>& records,
                                  std::uint32_t replicates);

struct ConvergenceRow {
    std::uint32_t n = 0;
    double limit = 0.0;
    double mean_cn = 0.0;
    double mean_abs_dev = 0.0;  // mean |C_n - limit|
    double sd_cn = 0.0;
    std::uint32_t excluded = 0;
};

/// For each n, runs spec.replicates replicates at (n, r1, r2) and reports the
/// deviation of C_n from the asymptotic limit.
std::vector<ConvergenceRow> run_convergence_experiment(const ExperimentSpec& base,
                                                       const std::vector<std::uint32_t>& n_values);

struct SigmaScalingRow {
    double r1 = 0.0;
    double r2 = 0.0;
    double sigma2 = 0.0;
    double error_bar = 0.0;  // 3*std_error (MC) or one-step grid-refinement delta
    double ratio = 0.0;      // sigma2 / r1^3
};

/// sigma^2 at each r1 with r2 = r1/lambda; the ratio column exhibits the
/// Theta(r1^3) scaling. Requires lambda > 2 and r1 <= 0.1.
std::vector<SigmaScalingRow> run_sigma_scaling(double lambda, const std::vector<double>& r1_values,
                                               SigmaMethod method, std::uint64_t budget,
                                               std::uint64_t master_seed);

// Persistence. Records CSV header:
//   replicate,seed,cn,ordered_triangles,ordered_paths,standardized,duration_ms
// seed is "<master_seed>:<stream_id>"; undefined C_n leaves cn and
// standardized empty; floats use 17 significant digits. duration_ms is 0
// unless spec.record_timings (wall clock would break byte-level determinism).
std::string records_to_csv(const std::vector<ExperimentRecord>& records, bool record_timings);
std::string summary_to_json(const CltSummary& summary, const ExperimentSpec& spec,
                            const SigmaEstimate& sigma);

/// Replicate slots are preassigned by index, so any thread count yields the
/// same records. 0 resolves to hardware concurrency.
unsigned resolve_threads(unsigned requested);

} // namespace rag
