// rag — random annulus graph simulator and clustering-coefficient statistics.
//
// Subcommands: generate, cc, limit, sigma, clt, sweep. Every command is a
// pure function of its flags plus seed: re-running reproduces identical
// output. Exit codes: 0 success, 1 runtime/I-O failure, 2 invalid flags.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "rag/counting.hpp"
#include "rag/harness.hpp"
#include "rag/kernels.hpp"
#include "rag/model.hpp"
#include "rag/params.hpp"
#include "rag/stats.hpp"

namespace {

constexpr const char* kRegimeNote =
    "CLT regime (Theorem conditions at desk scale): 2*r2 < r1 = O(r2), r1 = o(1) "
    "(enforced as r1 <= 0.1) and n*r1 = omega(1) (enforced as n*r1 >= 20).";

struct RadiiFlags {
    double r1 = 0.0;
    std::optional<double> r2;
    std::optional<double> lambda;

    void attach(CLI::App* cmd, bool require_r1 = true) {
        auto* o1 = cmd->add_option("--r1", r1, "outer radius, in (0, 0.5]");
        if (require_r1) o1->required();
        auto* o2 = cmd->add_option("--r2", r2, "inner radius, in [0, r1)");
        auto* ol = cmd->add_option("--lambda", lambda, "ratio r1/r2 (sets r2 = r1/lambda)");
        o2->excludes(ol);
    }

    double resolve_r2() const {
        if (r2.has_value() == lambda.has_value())
            throw std::invalid_argument("exactly one of --r2 / --lambda must be given");
        if (r2) return *r2;
        if (!(*lambda > 1.0)) throw std::invalid_argument("--lambda must exceed 1");
        return r1 / *lambda;
    }
};

unsigned resolve_thread_flag(unsigned flag_value) {
    if (flag_value != 0) return flag_value;
    if (const char* env = std::getenv("RAG_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<unsigned>(v);
    }
    return 0;  // harness resolves to hardware concurrency
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open output file: " + path);
    os << content;
    if (!os) throw std::runtime_error("failed writing output file: " + path);
}

rag::SigmaMethod parse_method(const std::string& m) {
    if (m == "cubature") return rag::SigmaMethod::cubature;
    if (m == "mc" || m == "monte_carlo") return rag::SigmaMethod::monte_carlo;
    throw std::invalid_argument("--sigma-method must be 'cubature' or 'mc'");
}

// ---- generate ---------------------------------------------------------------

int cmd_generate(std::uint32_t n, const RadiiFlags& radii, std::uint64_t seed,
                 const std::string& edges_path, const std::string& positions_path) {
    const rag::AnnulusParams params(n, radii.r1, radii.resolve_r2());
    const rag::RngSeed rng{seed, 0};
    const rag::PositionSet ps = rag::sample_positions(params, rng);

    std::ostringstream edges;
    rag::write_edge_list(edges, ps, params, rng);
    write_file(edges_path, edges.str());

    std::ostringstream pos;
    rag::write_positions_csv(pos, ps);
    write_file(positions_path, pos.str());

    std::cerr << "wrote " << edges_path << " and " << positions_path << "\n";
    return 0;
}

// ---- cc ---------------------------------------------------------------------

rag::AdjacencyMatrix read_edge_list(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open edge list: " + path);
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    std::uint32_t n = 0;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::uint32_t i = 0, j = 0;
        if (!(ls >> i >> j)) throw std::runtime_error("malformed edge line: " + line);
        edges.emplace_back(i, j);
        n = std::max(n, std::max(i, j) + 1);
    }
    if (n == 0) throw std::runtime_error("edge list is empty: " + path);
    if (n > rag::kDefaultAdjacencyCap)
        throw rag::CapExceeded("edge list has " + std::to_string(n) +
                               " nodes, beyond the adjacency cap");
    rag::AdjacencyMatrix m;
    m.n = n;
    m.a.assign(std::size_t(n) * n, 0);
    for (const auto& [i, j] : edges) {
        if (i == j) continue;
        m.a[std::size_t(i) * n + j] = 1;
        m.a[std::size_t(j) * n + i] = 1;
    }
    return m;
}

int cmd_cc(const std::string& edges_path, std::uint32_t n, const RadiiFlags& radii,
           std::uint64_t seed, unsigned threads, const std::string& json_path) {
    rag::GraphCounts counts;
    std::optional<rag::AnnulusParams> params;
    if (!edges_path.empty()) {
        counts = rag::brute_force_counts(read_edge_list(edges_path));
    } else {
        params.emplace(n, radii.r1, radii.resolve_r2());
        const rag::PositionSet ps = rag::sample_positions(*params, {seed, 0});
        counts = rag::count_graph(ps, *params, rag::resolve_threads(resolve_thread_flag(threads)));
    }

    const std::optional<double> cn = rag::clustering_coefficient(counts);
    if (cn.has_value())
        std::printf("C_n = %.17g\n", *cn);
    else
        std::printf("C_n = undefined (no 2-paths)\n");
    std::printf("ordered_triangles = %llu\nordered_paths = %llu\nmax_degree = %u\n",
                static_cast<unsigned long long>(counts.ordered_triangles),
                static_cast<unsigned long long>(counts.ordered_paths), counts.max_degree());

    if (!json_path.empty()) {
        if (!params.has_value())
            throw std::invalid_argument("--json requires generation parameters (not --edges)");
        write_file(json_path, rag::counts_to_json(counts, *params) + "\n");
    }
    return 0;
}

// ---- limit ------------------------------------------------------------------

int cmd_limit(const RadiiFlags& radii) {
    double r1 = radii.r1;
    double r2 = 0.0;
    if (radii.lambda && !(radii.r1 > 0.0)) {
        // pure-lambda form: the limit depends only on the ratio
        r1 = 0.1;
        r2 = 0.1 / *radii.lambda;
        if (!(*radii.lambda > 1.0)) throw std::invalid_argument("--lambda must exceed 1");
    } else {
        r2 = radii.resolve_r2();
    }
    if (2.0 * r2 == r1) {
        std::fprintf(stderr, "warning: 2*r2 == r1 is the boundary of the CLT regime "
                             "(limit is 0 and Theorem normality does not apply)\n");
        std::printf("%.17g\n", 0.0);
        return 0;
    }
    const rag::KernelParams kp(r1, r2);  // rejects 2*r2 > r1
    std::printf("%.17g\n", rag::asymptotic_limit(kp));
    return 0;
}

// ---- sigma ------------------------------------------------------------------

int cmd_sigma(const RadiiFlags& radii, const std::string& method, std::uint64_t budget,
              std::uint64_t seed) {
    const rag::KernelParams kp(radii.r1, radii.resolve_r2());
    rag::SigmaEstimate est;
    if (parse_method(method) == rag::SigmaMethod::cubature)
        est = rag::sigma2_cubature(kp, static_cast<std::uint32_t>(budget));
    else
        est = rag::sigma2_monte_carlo(kp, budget, {seed, 0});
    std::printf("%s\n", est.to_json().c_str());
    return 0;
}

// ---- clt --------------------------------------------------------------------

int cmd_clt(std::uint32_t n, const RadiiFlags& radii, std::uint32_t replicates,
            std::uint64_t seed, const std::string& method, std::uint64_t budget,
            const std::string& out_path, const std::string& summary_path, unsigned threads,
            bool record_timings) {
    rag::ExperimentSpec spec{
        rag::AnnulusParams(n, radii.r1, radii.resolve_r2()),
        replicates,
        seed,
        parse_method(method),
        budget,
        out_path,
        resolve_thread_flag(threads),
        record_timings,
    };
    const rag::CltResult result = rag::run_clt_experiment(spec);
    const std::string summary = rag::summary_to_json(result.summary, spec, result.sigma);
    std::printf("%s\n", summary.c_str());
    if (!summary_path.empty()) write_file(summary_path, summary + "\n");

    const rag::CltVerdict v = rag::clt_verdict(result.summary, spec.replicates);
    std::printf("ks_distance %.6f vs critical %.6f (alpha=0.01): %s\n", result.summary.ks,
                v.ks_critical, v.ks_pass ? "PASS" : "FAIL");
    std::printf("mean %.4f in [-0.2, 0.2]: %s\n", result.summary.mean,
                v.mean_pass ? "PASS" : "FAIL");
    std::printf("sd %.4f in [0.8, 1.2]: %s\n", std::sqrt(result.summary.variance),
                v.sd_pass ? "PASS" : "FAIL");
    std::printf("verdict: %s\n", v.pass() ? "PASS" : "FAIL");
    return 0;
}

// ---- sweep ------------------------------------------------------------------

std::string rows_to_csv(const std::vector<rag::ConvergenceRow>& rows) {
    std::string out = "n,limit,mean_cn,mean_abs_dev,sd_cn,excluded\n";
    char buf[256];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%u,%.17g,%.17g,%.17g,%.17g,%u\n", r.n, r.limit, r.mean_cn,
                      r.mean_abs_dev, r.sd_cn, r.excluded);
        out += buf;
    }
    return out;
}

std::string rows_to_csv(const std::vector<rag::SigmaScalingRow>& rows) {
    std::string out = "r1,r2,sigma2,error_bar,ratio\n";
    char buf[256];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", r.r1, r.r2, r.sigma2,
                      r.error_bar, r.ratio);
        out += buf;
    }
    return out;
}

template <typename Rows>
std::string rows_to_json(const Rows& rows);

template <>
std::string rows_to_json(const std::vector<rag::ConvergenceRow>& rows) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& r : rows)
        arr.push_back({{"n", r.n},
                       {"limit", r.limit},
                       {"mean_cn", r.mean_cn},
                       {"mean_abs_dev", r.mean_abs_dev},
                       {"sd_cn", r.sd_cn},
                       {"excluded", r.excluded}});
    return arr.dump(2);
}

template <>
std::string rows_to_json(const std::vector<rag::SigmaScalingRow>& rows) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& r : rows)
        arr.push_back({{"r1", r.r1},
                       {"r2", r.r2},
                       {"sigma2", r.sigma2},
                       {"error_bar", r.error_bar},
                       {"ratio", r.ratio}});
    return arr.dump(2);
}

int cmd_sweep(const std::string& kind, const RadiiFlags& radii,
              const std::vector<std::uint32_t>& n_values, const std::vector<double>& r1_values,
              std::uint32_t replicates, std::uint64_t seed, const std::string& method,
              std::uint64_t budget, const std::string& out_path, const std::string& format,
              unsigned threads) {
    std::string table;
    if (kind == "n") {
        if (n_values.empty()) throw std::invalid_argument("sweep --kind n requires --n-values");
        rag::ExperimentSpec base{
            rag::AnnulusParams(n_values.front(), radii.r1, radii.resolve_r2()),
            replicates,
            seed,
            parse_method(method),
            budget,
            "",
            resolve_thread_flag(threads),
            false,
        };
        const auto rows = rag::run_convergence_experiment(base, n_values);
        table = format == "json" ? rows_to_json(rows) + "\n" : rows_to_csv(rows);
    } else if (kind == "sigma") {
        if (!radii.lambda.has_value())
            throw std::invalid_argument("sweep --kind sigma requires --lambda");
        if (r1_values.empty())
            throw std::invalid_argument("sweep --kind sigma requires --r1-values");
        const auto rows =
            rag::run_sigma_scaling(*radii.lambda, r1_values, parse_method(method), budget, seed);
        table = format == "json" ? rows_to_json(rows) + "\n" : rows_to_csv(rows);
    } else {
        throw std::invalid_argument("--kind must be 'n' or 'sigma'");
    }
    std::fputs(table.c_str(), stdout);
    if (!out_path.empty()) write_file(out_path, table);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"random annulus graph simulator: exact clustering-coefficient counting and "
                 "central-limit verification.\n" +
                 std::string(kRegimeNote)};
    app.require_subcommand(1);

    constexpr const char* kThreadsHelp =
        "worker threads (0 = RAG_THREADS env or hardware; output is thread-count independent)";

    // generate
    auto* gen = app.add_subcommand("generate", "sample one graph and write edge list + positions");
    std::uint32_t gen_n = 0;
    std::uint64_t gen_seed = 1;
    std::string gen_edges = "rag.edges";
    std::string gen_positions = "rag.positions.csv";
    RadiiFlags gen_radii;
    gen->add_option("--n", gen_n, "node count")->required();
    gen_radii.attach(gen);
    gen->add_option("--seed", gen_seed, "master seed");
    gen->add_option("--out-edges", gen_edges, "edge list path");
    gen->add_option("--out-positions", gen_positions, "positions CSV path");

    // cc
    auto* cc = app.add_subcommand("cc", "global clustering coefficient of one realization");
    std::string cc_edges;
    std::uint32_t cc_n = 0;
    std::uint64_t cc_seed = 1;
    std::string cc_json;
    RadiiFlags cc_radii;
    cc->add_option("--edges", cc_edges, "read an edge-list file instead of sampling");
    cc->add_option("--n", cc_n, "node count (sampling mode)");
    cc_radii.attach(cc, /*require_r1=*/false);
    cc->add_option("--seed", cc_seed, "master seed (sampling mode)");
    cc->add_option("--json", cc_json, "write counts JSON to this path");
    unsigned cc_threads = 0;
    cc->add_option("--threads", cc_threads, kThreadsHelp);

    // limit
    auto* lim = app.add_subcommand("limit", "asymptotic clustering coefficient (3/4)(r1-2r2)^2/(r1-r2)^2");
    RadiiFlags lim_radii;
    lim_radii.attach(lim, /*require_r1=*/false);

    // sigma
    auto* sig = app.add_subcommand("sigma", "estimate sigma^2 = E[h(X1,X2,X3) h(X1,X2,X4)]");
    RadiiFlags sig_radii;
    std::string sig_method = "cubature";
    std::uint64_t sig_budget = 400;
    std::uint64_t sig_seed = 1;
    sig_radii.attach(sig);
    sig->add_option("--method", sig_method, "cubature | mc");
    sig->add_option("--budget", sig_budget, "grid size (cubature) or samples (mc)");
    sig->add_option("--seed", sig_seed, "master seed (mc only)");

    // clt
    auto* clt = app.add_subcommand("clt", "multi-replicate CLT verification experiment");
    std::uint32_t clt_n = 0, clt_reps = 300;
    std::uint64_t clt_seed = 1, clt_budget = 400;
    std::string clt_method = "cubature", clt_out, clt_summary;
    bool clt_timings = false;
    RadiiFlags clt_radii;
    clt->add_option("--n", clt_n, "node count")->required();
    clt_radii.attach(clt);
    clt->add_option("--replicates", clt_reps, "number of replicates");
    clt->add_option("--seed", clt_seed, "master seed");
    clt->add_option("--sigma-method", clt_method, "cubature | mc");
    clt->add_option("--sigma-budget", clt_budget, "grid size or samples");
    clt->add_option("--out", clt_out, "records CSV path");
    clt->add_option("--summary", clt_summary, "summary JSON path");
    unsigned clt_threads = 0;
    clt->add_option("--threads", clt_threads, kThreadsHelp);
    clt->add_flag("--record-timings", clt_timings,
                  "write wall-clock durations into the records CSV (breaks byte-level "
                  "reproducibility of the file)");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "convergence sweep over n, or sigma^2 scaling over r1");
    std::string sweep_kind = "n";
    std::vector<std::uint32_t> sweep_n_values;
    std::vector<double> sweep_r1_values;
    std::uint32_t sweep_reps = 50;
    std::uint64_t sweep_seed = 1, sweep_budget = 400;
    std::string sweep_method = "cubature", sweep_out, sweep_format = "csv";
    RadiiFlags sweep_radii;
    sweep->add_option("--kind", sweep_kind, "n (convergence) | sigma (variance scaling)");
    sweep_radii.attach(sweep, /*require_r1=*/false);
    sweep->add_option("--n-values", sweep_n_values, "node counts (kind n)")->delimiter(',');
    sweep->add_option("--r1-values", sweep_r1_values, "outer radii (kind sigma)")->delimiter(',');
    sweep->add_option("--replicates", sweep_reps, "replicates per n (kind n)");
    sweep->add_option("--seed", sweep_seed, "master seed");
    sweep->add_option("--sigma-method", sweep_method, "cubature | mc");
    sweep->add_option("--sigma-budget", sweep_budget, "grid size or samples");
    sweep->add_option("--out", sweep_out, "write the table to this path");
    sweep->add_option("--format", sweep_format, "csv | json");
    unsigned sweep_threads = 0;
    sweep->add_option("--threads", sweep_threads, kThreadsHelp);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (gen->parsed()) return cmd_generate(gen_n, gen_radii, gen_seed, gen_edges, gen_positions);
        if (cc->parsed()) {
            if (cc_edges.empty() && cc_n == 0)
                throw std::invalid_argument("cc requires --edges or --n with radii");
            return cmd_cc(cc_edges, cc_n, cc_radii, cc_seed, cc_threads, cc_json);
        }
        if (lim->parsed()) return cmd_limit(lim_radii);
        if (sig->parsed()) return cmd_sigma(sig_radii, sig_method, sig_budget, sig_seed);
        if (clt->parsed())
            return cmd_clt(clt_n, clt_radii, clt_reps, clt_seed, clt_method, clt_budget, clt_out,
                           clt_summary, clt_threads, clt_timings);
        if (sweep->parsed())
            return cmd_sweep(sweep_kind, sweep_radii, sweep_n_values, sweep_r1_values, sweep_reps,
                             sweep_seed, sweep_method, sweep_budget, sweep_out, sweep_format,
                             sweep_threads);
    } catch (const rag::TooManyExclusions& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
