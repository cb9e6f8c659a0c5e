#include "rag/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "rag/counting.hpp"
#include "rag/model.hpp"

namespace rag {

namespace {

// Reserved stream for the sigma Monte Carlo draw; replicates use streams 0..R-1.
constexpr std::uint64_t kSigmaStream = 0xFFFFFFFFFFFFFFFFULL;

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// type-7 linear interpolation quantile on a sorted vector
double quantile(const std::vector<double>& sorted, double p) {
    if (sorted.empty()) return 0.0;
    if (sorted.size() == 1) return sorted[0];
    const double h = p * static_cast<double>(sorted.size() - 1);
    const std::size_t i = static_cast<std::size_t>(h);
    if (i + 1 >= sorted.size()) return sorted.back();
    const double frac = h - static_cast<double>(i);
    return sorted[i] + frac * (sorted[i + 1] - sorted[i]);
}

SigmaEstimate compute_sigma(const ExperimentSpec& spec) {
    const KernelParams kp(spec.params);
    if (spec.sigma_method == SigmaMethod::cubature)
        return sigma2_cubature(kp, static_cast<std::uint32_t>(spec.sigma_budget));
    return sigma2_monte_carlo(kp, spec.sigma_budget, {spec.master_seed, kSigmaStream});
}

// Runs all replicates with slot-per-index assignment: the records vector is
// identical for any worker count.
std::vector<ExperimentRecord> run_replicates(const ExperimentSpec& spec,
                                             const SigmaEstimate& sigma) {
    const std::uint32_t r = spec.replicates;
    std::vector<ExperimentRecord> records(r);
    const unsigned workers = std::min<unsigned>(resolve_threads(spec.threads), r);
    if (workers <= 1) {
        for (std::uint32_t k = 0; k < r; ++k) records[k] = run_replicate(spec, k, sigma);
        return records;
    }
    std::atomic<std::uint32_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned t = 0; t < workers; ++t)
        pool.emplace_back([&] {
            for (;;) {
                const std::uint32_t k = next.fetch_add(1, std::memory_order_relaxed);
                if (k >= r) return;
                records[k] = run_replicate(spec, k, sigma);
            }
        });
    for (auto& th : pool) th.join();
    return records;
}

} // namespace

unsigned resolve_threads(unsigned requested) {
    if (requested != 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

void validate_clt_spec(const ExperimentSpec& spec) {
    if (spec.replicates < 1)
        throw std::invalid_argument("ExperimentSpec: replicates must be >= 1");
    if (!spec.params.clt_regime())
        throw RegimeViolation("ExperimentSpec: CLT experiments require 2*r2 < r1");
    // desk-scale surrogates for r1 = o(1) and n*r1 -> infinity
    if (spec.params.r1 > 0.1)
        throw std::invalid_argument("ExperimentSpec: CLT experiments require r1 <= 0.1");
    if (static_cast<double>(spec.params.n) * spec.params.r1 < 20.0)
        throw std::invalid_argument("ExperimentSpec: CLT experiments require n*r1 >= 20");
}

CltVerdict clt_verdict(const CltSummary& summary, std::uint32_t replicates) {
    CltVerdict v;
    v.ks_critical = 1.63 / std::sqrt(static_cast<double>(replicates));
    v.ks_pass = summary.ks <= v.ks_critical;
    v.mean_pass = std::fabs(summary.mean) <= 0.2;
    const double sd = std::sqrt(summary.variance);
    v.sd_pass = sd >= 0.8 && sd <= 1.2;
    return v;
}

ExperimentRecord run_replicate(const ExperimentSpec& spec, std::uint32_t k,
                               const SigmaEstimate& sigma) {
    const auto t0 = std::chrono::steady_clock::now();
    ExperimentRecord rec;
    rec.replicate_index = k;
    rec.seed = {spec.master_seed, k};
    const PositionSet ps = sample_positions(spec.params, rec.seed);
    const GraphCounts counts = count_graph(ps, spec.params, 1);
    rec.ordered_triangles = counts.ordered_triangles;
    rec.ordered_paths = counts.ordered_paths;
    rec.cn = clustering_coefficient(counts);
    if (rec.cn.has_value())
        rec.standardized = standardized_statistic(*rec.cn, spec.params, sigma);
    rec.duration_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return rec;
}

std::string records_to_csv(const std::vector<ExperimentRecord>& records, bool record_timings) {
    std::string out = "replicate,seed,cn,ordered_triangles,ordered_paths,standardized,duration_ms\n";
    for (const ExperimentRecord& r : records) {
        out += std::to_string(r.replicate_index);
        out += ',';
        out += std::to_string(r.seed.master_seed);
        out += ':';
        out += std::to_string(r.seed.stream_id);
        out += ',';
        if (r.cn.has_value()) out += fmt17(*r.cn);
        out += ',';
        out += std::to_string(r.ordered_triangles);
        out += ',';
        out += std::to_string(r.ordered_paths);
        out += ',';
        if (r.standardized.has_value()) out += fmt17(*r.standardized);
        out += ',';
        out += std::to_string(record_timings ? static_cast<long long>(std::llround(r.duration_ms))
                                             : 0LL);
        out += '\n';
    }
    return out;
}

CltResult run_clt_experiment(const ExperimentSpec& spec) {
    validate_clt_spec(spec);
    CltResult result;
    result.sigma = compute_sigma(spec);
    if (!(result.sigma.value > 0.0))
        throw NonpositiveSigma("run_clt_experiment: sigma^2 estimate is not positive");
    result.records = run_replicates(spec, result.sigma);

    if (!spec.output_path.empty()) {
        std::ofstream os(spec.output_path, std::ios::binary);
        if (!os) throw std::runtime_error("cannot open records file: " + spec.output_path);
        os << records_to_csv(result.records, spec.record_timings);
        if (!os) throw std::runtime_error("failed writing records file: " + spec.output_path);
    }

    result.summary = summarize_standardized(result.records, spec.replicates);
    return result;
}

CltSummary summarize_standardized(const std::vector<ExperimentRecord>& records,
                                  std::uint32_t replicates) {
    std::vector<double> zs;
    zs.reserve(records.size());
    for (const ExperimentRecord& r : records)
        if (r.standardized.has_value()) zs.push_back(*r.standardized);

    CltSummary s;
    s.sample_count = static_cast<std::uint32_t>(zs.size());
    s.excluded_count = replicates - s.sample_count;

    if (10 * static_cast<std::uint64_t>(s.excluded_count) > replicates)
        throw TooManyExclusions("clt summary: " + std::to_string(s.excluded_count) + " of " +
                                std::to_string(replicates) +
                                " replicates had undefined C_n (no 2-paths); parameters are "
                                "outside the theorem's effective regime");

    if (!zs.empty()) {
        double sum = 0.0;
        for (const double z : zs) sum += z;
        s.mean = sum / static_cast<double>(zs.size());
        if (zs.size() > 1) {
            double ss = 0.0;
            for (const double z : zs) ss += (z - s.mean) * (z - s.mean);
            s.variance = ss / static_cast<double>(zs.size() - 1);
        }
        s.ks = ks_distance(zs);
        std::vector<double> sorted = zs;
        std::sort(sorted.begin(), sorted.end());
        const double ps[7] = {0.01, 0.05, 0.25, 0.50, 0.75, 0.95, 0.99};
        for (int i = 0; i < 7; ++i) s.quantiles[i] = quantile(sorted, ps[i]);
    }
    return s;
}

std::string summary_to_json(const CltSummary& summary, const ExperimentSpec& spec,
                            const SigmaEstimate& sigma) {
    nlohmann::ordered_json j;
    j["sample_count"] = summary.sample_count;
    j["excluded_count"] = summary.excluded_count;
    j["mean"] = summary.mean;
    j["variance"] = summary.variance;
    j["ks_distance"] = summary.ks;
    nlohmann::ordered_json q;
    const char* names[7] = {"q01", "q05", "q25", "q50", "q75", "q95", "q99"};
    for (int i = 0; i < 7; ++i) q[names[i]] = summary.quantiles[i];
    j["quantiles"] = q;
    j["params"] = {{"n", spec.params.n}, {"r1", spec.params.r1}, {"r2", spec.params.r2}};
    j["replicates"] = spec.replicates;
    j["master_seed"] = spec.master_seed;
    j["sigma"] = nlohmann::ordered_json::parse(sigma.to_json());
    j["limit"] = KernelParams(spec.params).limit;
    return j.dump(2);
}

std::vector<ConvergenceRow> run_convergence_experiment(const ExperimentSpec& base,
                                                       const std::vector<std::uint32_t>& n_values) {
    if (n_values.empty())
        throw std::invalid_argument("run_convergence_experiment: empty n list");
    for (const std::uint32_t n : n_values) {
        ExperimentSpec probe = base;
        probe.params = AnnulusParams(n, base.params.r1, base.params.r2);
        validate_clt_spec(probe);
    }

    const SigmaEstimate sigma = compute_sigma(base);  // depends on (r1, r2) only
    const double limit = KernelParams(base.params).limit;

    std::vector<ConvergenceRow> rows;
    rows.reserve(n_values.size());
    for (const std::uint32_t n : n_values) {
        ExperimentSpec spec = base;
        spec.params = AnnulusParams(n, base.params.r1, base.params.r2);
        spec.output_path.clear();
        const std::vector<ExperimentRecord> records = run_replicates(spec, sigma);

        ConvergenceRow row;
        row.n = n;
        row.limit = limit;
        std::vector<double> cns;
        for (const ExperimentRecord& r : records)
            if (r.cn.has_value()) cns.push_back(*r.cn);
        row.excluded = spec.replicates - static_cast<std::uint32_t>(cns.size());
        if (!cns.empty()) {
            double sum = 0.0, dev = 0.0;
            for (const double c : cns) {
                sum += c;
                dev += std::fabs(c - limit);
            }
            row.mean_cn = sum / static_cast<double>(cns.size());
            row.mean_abs_dev = dev / static_cast<double>(cns.size());
            if (cns.size() > 1) {
                double ss = 0.0;
                for (const double c : cns) ss += (c - row.mean_cn) * (c - row.mean_cn);
                row.sd_cn = std::sqrt(ss / static_cast<double>(cns.size() - 1));
            }
        }
        rows.push_back(row);
    }
    return rows;
}

std::vector<SigmaScalingRow> run_sigma_scaling(double lambda, const std::vector<double>& r1_values,
                                               SigmaMethod method, std::uint64_t budget,
                                               std::uint64_t master_seed) {
    if (!(lambda > 2.0))
        throw RegimeViolation("run_sigma_scaling: requires lambda > 2");
    if (r1_values.empty())
        throw std::invalid_argument("run_sigma_scaling: empty r1 list");

    std::vector<SigmaScalingRow> rows;
    rows.reserve(r1_values.size());
    std::uint64_t stream = 0;
    for (const double r1 : r1_values) {
        if (!(r1 > 0.0 && r1 <= 0.1))
            throw std::invalid_argument("run_sigma_scaling: r1 values must lie in (0, 0.1]");
        SigmaScalingRow row;
        row.r1 = r1;
        row.r2 = r1 / lambda;
        const KernelParams kp(row.r1, row.r2);
        if (method == SigmaMethod::cubature) {
            const SigmaEstimate est = sigma2_cubature(kp, static_cast<std::uint32_t>(budget));
            const SigmaEstimate refined =
                sigma2_cubature(kp, static_cast<std::uint32_t>(2 * budget));
            row.sigma2 = est.value;
            row.error_bar = std::fabs(refined.value - est.value);
        } else {
            const SigmaEstimate est = sigma2_monte_carlo(kp, budget, {master_seed, stream++});
            row.sigma2 = est.value;
            row.error_bar = 3.0 * est.std_error;
        }
        row.ratio = row.sigma2 / (r1 * r1 * r1);
        rows.push_back(row);
    }
    return rows;
}

} // namespace rag
