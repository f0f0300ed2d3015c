// ncbcast: analytic solver, policy optimizers, Round-Robin baselines, and
// Monte Carlo simulator for block broadcast with random linear coding over
// stop-and-wait TDD erasure channels.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ncbcast/baselines.hpp"
#include "ncbcast/config.hpp"
#include "ncbcast/markov.hpp"
#include "ncbcast/model.hpp"
#include "ncbcast/policy.hpp"
#include "ncbcast/sim.hpp"

namespace {

using namespace ncbcast;

std::string fmt9(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", x);
    return buf;
}

struct CommonOpts {
    std::string config_path;
    std::vector<std::string> overrides;

    SystemParams build() const {
        ConfigMap cfg;
        if (!config_path.empty()) cfg = load_config_file(config_path);
        for (const auto& kv : overrides) apply_override(cfg, kv);
        return params_from_config(cfg);
    }
};

void add_common(CLI::App* cmd, CommonOpts& common) {
    cmd->add_option("-c,--config", common.config_path, "flat key=value config file");
    cmd->add_option("-s,--set", common.overrides, "override a config key, e.g. --set pe=0.5")
        ->take_all();
}

// Output sink: path or '-' for stdout.
class Sink {
public:
    explicit Sink(const std::string& path) {
        if (!path.empty() && path != "-") {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) throw std::invalid_argument("cannot open output file '" + path + "'");
        }
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

Policy load_policy_checked(const std::string& path, const SystemParams& p) {
    Policy policy = load_policy_file(path);
    if (policy.block_size() != p.M)
        throw std::invalid_argument("policy file is for M=" + std::to_string(policy.block_size()) +
                                    " but the configuration has M=" + std::to_string(p.M));
    return policy;
}

int cmd_analyze(const CommonOpts& common, const std::string& policy_path, bool per_state,
                const std::string& matrix_csv) {
    const SystemParams p = common.build();
    const Policy policy = load_policy_checked(policy_path, p);
    const CompletionResult result = mean_completion_time(policy, p);

    std::cout << "T_p: " << fmt9(packet_duration(p)) << '\n';
    std::cout << "T_w: " << fmt9(wait_time(p)) << '\n';
    for (int i = 1; i <= p.M; ++i)
        std::cout << "round_cost[" << i << "]: N_" << i << "=" << policy.burst_for(i)
                  << " T=" << fmt9(round_duration(p, policy.burst_for(i))) << '\n';
    std::cout << "mean_completion_time: " << fmt9(result.mean_time) << '\n';
    if (per_state)
        for (std::size_t idx = 0; idx < result.per_state_times.size(); ++idx) {
            const auto s = state_from_index(idx, p.M, p.N);
            std::cout << "T_state[";
            for (std::size_t j = 0; j < s.size(); ++j) std::cout << (j ? "," : "") << s[j];
            std::cout << "]: " << fmt9(result.per_state_times[idx]) << '\n';
        }
    if (!matrix_csv.empty()) {
        Sink sink(matrix_csv);
        dump_matrix_csv(build_matrix(policy, p), sink.stream());
    }
    return 0;
}

int cmd_optimize(const CommonOpts& common, const std::string& method,
                 const std::string& out_path) {
    const SystemParams p = common.build();
    const auto start = std::chrono::steady_clock::now();
    Policy policy;
    if (method == "exact")
        policy = optimize_exact(p);
    else if (method == "worst-link")
        policy = heuristic_worst_link(p);
    else if (method == "combined")
        policy = heuristic_combined(p);
    else
        throw std::invalid_argument("method must be exact, worst-link, or combined");
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;

    const double objective = mean_completion_time(policy, p).mean_time;
    if (out_path.empty() || out_path == "-")
        save_policy(policy, std::cout);
    else
        save_policy_file(policy, out_path);
    std::cout << "objective: " << fmt9(objective) << '\n';
    std::cout << "search_seconds: " << fmt9(elapsed.count()) << '\n';
    return 0;
}

int cmd_bound(const CommonOpts& common, const std::string& policy_path, double epsilon) {
    const SystemParams p = common.build();
    const Policy policy = load_policy_checked(policy_path, p);
    const StoppingBound bound = lemma1_bound(policy, p, epsilon);
    std::cout << "lambda2_magnitude: " << fmt9(bound.lambda2_magnitude) << '\n';
    std::cout << "eigen_distinct: " << (bound.eigen_distinct ? "true" : "false") << '\n';
    if (bound.G) std::cout << "G: " << fmt9(*bound.G) << '\n';
    if (bound.aleph_bound) std::cout << "aleph_bound: " << fmt9(*bound.aleph_bound) << '\n';
    std::cout << "aleph_empirical: " << bound.aleph_empirical << '\n';
    return 0;
}

int cmd_simulate(const CommonOpts& common, const std::string& policy_path, long runs,
                 std::uint64_t seed, bool ideal_field, int field_bits,
                 const std::string& out_path) {
    const SystemParams p = common.build();
    SimConfig cfg;
    cfg.params = p;
    cfg.policy = load_policy_checked(policy_path, p);
    cfg.field = FieldSpec::standard(field_bits);
    cfg.runs = runs;
    cfg.seed = seed;
    cfg.ideal_field = ideal_field;

    std::cout << "seed: " << seed << '\n';
    std::cout << "rng: mt19937_64+splitmix64-substreams\n";
    const BatchSummary summary = run_batch(cfg);

    Sink sink(out_path);
    auto& out = sink.stream();
    out << "config_hash,seed,runs,ideal_field,mean_time,stderr_time,mean_rounds,mean_packets,"
           "non_innovative_rate\n";
    out << std::hex << config_hash(p) << std::dec << ',' << seed << ',' << runs << ','
        << (ideal_field ? "true" : "false") << ',' << fmt9(summary.time.mean) << ','
        << fmt9(summary.time.std_error) << ',' << fmt9(summary.rounds.mean) << ','
        << fmt9(summary.packets.mean) << ',' << fmt9(summary.non_innovative_rate) << '\n';

    const double analytic = mean_completion_time(cfg.policy, p).mean_time;
    const double z = summary.time.std_error > 0
                         ? (summary.time.mean - analytic) / summary.time.std_error
                         : 0.0;
    std::cout << "analytic_mean_time: " << fmt9(analytic) << '\n';
    std::cout << "z_score: " << fmt9(z) << '\n';
    return 0;
}

int cmd_compare(const CommonOpts& common, const std::string& gamma) {
    const SystemParams p = common.build();
    GammaMode mode = GammaMode::Both;
    if (gamma == "lower") mode = GammaMode::Lower;
    else if (gamma == "upper") mode = GammaMode::Upper;
    else if (gamma != "both") throw std::invalid_argument("gamma must be lower, upper, or both");

    const RRParams rp = RRParams::from_system(p, mode);
    const Policy opt = optimize_exact(p);
    const Policy wl = heuristic_worst_link(p);
    const double nc_opt = mean_completion_time(opt, p).mean_time;
    const double nc_wl = mean_completion_time(wl, p).mean_time;
    const RRTddResult tdd = rr_tdd(rp);
    const RRFullDuplexResult fd = rr_full_duplex(rp);

    std::cout << "method,mean_time,ratio_to_nc_optimal\n";
    auto row = [&](const std::string& name, double t) {
        std::cout << name << ',' << fmt9(t) << ',' << fmt9(t / nc_opt) << '\n';
    };
    row("nc_optimal", nc_opt);
    row("nc_worst_link", nc_wl);
    row(tdd.degenerate ? "rr_tdd(adjusted:pe=0)" : "rr_tdd", tdd.time);
    if (mode != GammaMode::Upper) row("rr_full_duplex_gamma_0.5", fd.lower);
    if (mode != GammaMode::Lower) row("rr_full_duplex_gamma_1", fd.upper);
    return 0;
}

int cmd_sweep(const CommonOpts& common, const std::string& var, double start, double stop,
              double step, const std::vector<std::string>& methods, long runs,
              std::uint64_t seed, bool ideal_field, int field_bits,
              const std::string& out_path) {
    if (step <= 0) throw std::invalid_argument("step must be > 0");
    if (start > stop) throw std::invalid_argument("start must be <= stop");
    if (methods.empty()) throw std::invalid_argument("at least one method is required");
    if (var != "pe" && var != "pe_ack")
        throw std::invalid_argument("sweep variable must be pe or pe_ack");

    Sink sink(out_path);
    auto& out = sink.stream();

    const SystemParams base = common.build();
    out << "var,value,method,mean_time,stderr_time";
    for (int i = 1; i <= base.M; ++i) out << ",N_" << i;
    out << ",error\n";

    const std::size_t n_cols = 6 + static_cast<std::size_t>(base.M);
    auto emit = [&](const std::vector<std::string>& fields) {
        for (std::size_t c = 0; c < n_cols; ++c)
            out << (c ? "," : "") << (c < fields.size() ? fields[c] : "");
        out << '\n';
    };

    for (double v = start; v <= stop + step * 1e-9; v += step) {
        SystemParams p = base;
        for (auto& ch : p.channels) (var == "pe" ? ch.pe : ch.pe_ack) = v;
        for (const auto& method : methods) {
            std::vector<std::string> fields{var, fmt9(v), method};
            try {
                if (method == "rr_full_duplex_lower") {
                    fields.push_back(fmt9(rr_full_duplex(RRParams::from_system(p)).lower));
                } else if (method == "rr_full_duplex_upper") {
                    fields.push_back(fmt9(rr_full_duplex(RRParams::from_system(p)).upper));
                } else if (method == "rr_tdd") {
                    fields.push_back(fmt9(rr_tdd(RRParams::from_system(p)).time));
                } else if (method == "simulate") {
                    SimConfig cfg;
                    cfg.params = p;
                    cfg.policy = optimize_exact(p);
                    cfg.field = FieldSpec::standard(field_bits);
                    cfg.runs = runs;
                    cfg.seed = seed;
                    cfg.ideal_field = ideal_field;
                    const BatchSummary s = run_batch(cfg);
                    fields.push_back(fmt9(s.time.mean));
                    fields.push_back(fmt9(s.time.std_error));
                    for (int i = 1; i <= p.M; ++i)
                        fields.push_back(std::to_string(cfg.policy.burst_for(i)));
                } else {
                    Policy policy;
                    if (method == "optimal") policy = optimize_exact(p);
                    else if (method == "worst_link") policy = heuristic_worst_link(p);
                    else if (method == "combined") policy = heuristic_combined(p);
                    else throw std::invalid_argument("unknown method '" + method + "'");
                    fields.push_back(fmt9(mean_completion_time(policy, p).mean_time));
                    fields.push_back(""); // no sampling error for analytic methods
                    for (int i = 1; i <= p.M; ++i)
                        fields.push_back(std::to_string(policy.burst_for(i)));
                }
                emit(fields);
            } catch (const std::exception& e) {
                std::string msg = e.what();
                for (auto& c : msg)
                    if (c == ',' || c == '\n') c = ';';
                fields.resize(3);
                fields.push_back("ERROR");
                fields.resize(n_cols - 1);
                fields.push_back(msg);
                emit(fields);
            }
        }
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Network-coded TDD broadcast: analysis, optimization, and simulation"};
    app.require_subcommand(1);

    CommonOpts common;
    std::string policy_path, matrix_csv, out_path, method = "exact", gamma = "both", var = "pe";
    bool per_state = false, ideal_field = true;
    double epsilon = 0.01, start = 0.0, stop = 0.8, step = 0.1;
    long runs = 1000;
    std::uint64_t seed = 20090101;
    int field_bits = 20;
    std::vector<std::string> methods;

    auto* analyze = app.add_subcommand("analyze", "mean completion time under a policy table");
    add_common(analyze, common);
    analyze->add_option("-p,--policy", policy_path, "policy table file")->required();
    analyze->add_flag("--per-state", per_state, "print the full per-state time vector");
    analyze->add_option("--matrix-csv", matrix_csv, "dump the transition matrix as CSV");

    auto* optimize = app.add_subcommand("optimize", "compute a burst-length table");
    add_common(optimize, common);
    optimize->add_option("-m,--method", method, "exact | worst-link | combined");
    optimize->add_option("-o,--output", out_path, "policy file to write ('-' = stdout)");

    auto* bound = app.add_subcommand("bound", "stopping-count bound and empirical stop count");
    add_common(bound, common);
    bound->add_option("-p,--policy", policy_path, "policy table file")->required();
    bound->add_option("-e,--epsilon", epsilon, "residual non-completion probability")
        ->check(CLI::Range(1e-12, 0.999999));

    auto* simulate = app.add_subcommand("simulate", "Monte Carlo batch with analytic comparison");
    add_common(simulate, common);
    simulate->add_option("-p,--policy", policy_path, "policy table file")->required();
    simulate->add_option("-r,--runs", runs, "replications");
    simulate->add_option("--seed", seed, "base RNG seed (printed)");
    simulate->add_option("--ideal-field", ideal_field, "true: every reception is innovative");
    simulate->add_option("--field-bits", field_bits, "coefficient width g for the real field");
    simulate->add_option("-o,--output", out_path, "CSV output path ('-' = stdout)");

    auto* compare = app.add_subcommand("compare", "network coding vs Round-Robin baselines");
    add_common(compare, common);
    compare->add_option("--gamma", gamma, "lower | upper | both");

    auto* sweep = app.add_subcommand("sweep", "sweep a channel parameter across methods");
    add_common(sweep, common);
    sweep->add_option("--var", var, "pe | pe_ack");
    sweep->add_option("--start", start)->required();
    sweep->add_option("--stop", stop)->required();
    sweep->add_option("--step", step)->required();
    sweep->add_option("--methods", methods,
                      "subset of optimal,worst_link,combined,rr_full_duplex_lower,"
                      "rr_full_duplex_upper,rr_tdd,simulate")
        ->delimiter(',')
        ->required();
    sweep->add_option("-r,--runs", runs, "replications for the simulate method");
    sweep->add_option("--seed", seed, "base RNG seed for the simulate method");
    sweep->add_option("--ideal-field", ideal_field, "ideal-field switch for simulate");
    sweep->add_option("--field-bits", field_bits, "coefficient width g for simulate");
    sweep->add_option("-o,--output", out_path, "CSV output path ('-' = stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (analyze->parsed()) return cmd_analyze(common, policy_path, per_state, matrix_csv);
        if (optimize->parsed()) return cmd_optimize(common, method, out_path);
        if (bound->parsed()) return cmd_bound(common, policy_path, epsilon);
        if (simulate->parsed())
            return cmd_simulate(common, policy_path, runs, seed, ideal_field, field_bits, out_path);
        if (compare->parsed()) return cmd_compare(common, gamma);
        if (sweep->parsed())
            return cmd_sweep(common, var, start, stop, step, methods, runs, seed, ideal_field,
                             field_bits, out_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
