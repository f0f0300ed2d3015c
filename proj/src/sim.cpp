#include "ncbcast/sim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ncbcast {

namespace {

double percentile(std::vector<double>& sorted, double q) {
    if (sorted.empty()) return 0.0;
    const auto idx = static_cast<std::size_t>(
        std::llround(q * static_cast<double>(sorted.size() - 1)));
    return sorted[idx];
}

SummaryStats summarize(std::vector<double> values) {
    SummaryStats s;
    const auto n = static_cast<double>(values.size());
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / n;
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    if (values.size() > 1) s.std_error = std::sqrt(ss / (n - 1.0) / n);
    std::sort(values.begin(), values.end());
    s.p50 = percentile(values, 0.50);
    s.p90 = percentile(values, 0.90);
    s.p99 = percentile(values, 0.99);
    return s;
}

} // namespace

std::uint64_t substream_seed(std::uint64_t base, std::uint64_t index) {
    std::uint64_t z = base + 0x9e3779b97f4a7c15ull * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

LiveRun::LiveRun(const SimConfig& cfg)
    : beliefs(cfg.params.N, cfg.params.M), ranks(cfg.params.N, 0) {
    cfg.params.validate();
    cfg.policy.validate();
    if (cfg.policy.block_size() != cfg.params.M)
        throw std::invalid_argument("policy block size does not match M");
    if (!cfg.ideal_field)
        for (int j = 0; j < cfg.params.N; ++j) decoders.emplace_back(cfg.params.M, cfg.field);
}

bool LiveRun::done() const {
    for (int b : beliefs)
        if (b > 0) return false;
    return true;
}

void step_round(const SimConfig& cfg, LiveRun& run, std::mt19937_64& rng) {
    const SystemParams& p = cfg.params;
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::uniform_int_distribution<std::uint32_t> coeff(0, cfg.field.order_mask());

    const int i = *std::max_element(run.beliefs.begin(), run.beliefs.end());
    const int n_i = cfg.policy.burst_for(i);
    run.tally.rounds += 1;
    run.tally.packets_sent += n_i;
    run.tally.completion_time += round_duration(p, n_i);

    std::vector<std::uint32_t> coeffs(cfg.ideal_field ? 0 : p.M);
    for (int pkt = 0; pkt < n_i; ++pkt) {
        if (!cfg.ideal_field)
            for (auto& c : coeffs) c = coeff(rng);
        for (int j = 0; j < p.N; ++j) {
            if (unif(rng) < p.channels[j].pe) continue; // erased
            if (run.ranks[j] >= p.M) continue;          // receiver already complete
            run.tally.received_while_incomplete += 1;
            const bool innovative = cfg.ideal_field ? true : run.decoders[j].absorb(coeffs);
            if (innovative)
                run.ranks[j] += 1;
            else
                run.tally.non_innovative_received += 1;
        }
    }
    // Every receiver ACKs its true deficit each round; a lost ACK leaves
    // the transmitter's belief where it was.
    for (int j = 0; j < p.N; ++j)
        if (unif(rng) >= p.channels[j].pe_ack) run.beliefs[j] = p.M - run.ranks[j];
}

SimOutcome run_once(const SimConfig& cfg, std::mt19937_64& rng) {
    LiveRun run(cfg);
    while (!run.done()) {
        if (run.tally.rounds >= cfg.round_cap)
            throw std::runtime_error("round cap reached after " + std::to_string(cfg.round_cap) +
                                     " rounds; the configuration may not be completable");
        step_round(cfg, run, rng);
    }
    return run.tally;
}

BatchSummary run_batch(const SimConfig& cfg) {
    if (cfg.runs < 1) throw std::invalid_argument("runs must be >= 1");
    std::vector<double> times, rounds, packets;
    times.reserve(cfg.runs);
    rounds.reserve(cfg.runs);
    packets.reserve(cfg.runs);
    long non_innovative = 0, received = 0;

    for (long r = 0; r < cfg.runs; ++r) {
        std::mt19937_64 rng(substream_seed(cfg.seed, static_cast<std::uint64_t>(r)));
        const SimOutcome out = run_once(cfg, rng);
        times.push_back(out.completion_time);
        rounds.push_back(static_cast<double>(out.rounds));
        packets.push_back(static_cast<double>(out.packets_sent));
        non_innovative += out.non_innovative_received;
        received += out.received_while_incomplete;
    }

    BatchSummary summary;
    summary.runs = cfg.runs;
    summary.time = summarize(std::move(times));
    summary.rounds = summarize(std::move(rounds));
    summary.packets = summarize(std::move(packets));
    summary.non_innovative_rate =
        received > 0 ? static_cast<double>(non_innovative) / static_cast<double>(received) : 0.0;
    summary.rng_name = "mt19937_64+splitmix64-substreams";
    return summary;
}

} // namespace ncbcast
