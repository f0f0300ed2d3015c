#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "ncbcast/galois.hpp"
#include "ncbcast/model.hpp"
#include "ncbcast/policy.hpp"

namespace ncbcast {

struct SimConfig {
    SystemParams params;
    Policy policy;
    FieldSpec field = FieldSpec::standard(8);
    long runs = 1;
    std::uint64_t seed = 0;
    // When true, every packet received at a receiver that is not yet full
    // rank counts as innovative (the large-field assumption of the
    // analytic chain). When false, real coding vectors are drawn and
    // Gaussian-eliminated.
    bool ideal_field = true;
    long round_cap = 1000000;
};

struct SimOutcome {
    double completion_time = 0.0;
    long rounds = 0;
    long packets_sent = 0;
    long non_innovative_received = 0;  // received at rank < M yet dependent
    long received_while_incomplete = 0;
};

/// splitmix64 of (base, index): the per-run substream seed, so replications
/// are reproducible independently of execution order.
std::uint64_t substream_seed(std::uint64_t base, std::uint64_t index);

/// In-flight state of one simulated session, stepped one round at a time.
struct LiveRun {
    std::vector<int> beliefs; // transmitter's last-acknowledged dofs needed
    std::vector<int> ranks;   // true decoder ranks
    std::vector<DecoderState> decoders; // populated only when !ideal_field
    SimOutcome tally;

    explicit LiveRun(const SimConfig& cfg);
    bool done() const;
};

/// One burst + ACK window: transmit N_i packets for i = max_j belief_j,
/// apply per-receiver erasures, absorb survivors, then update beliefs
/// from whichever ACKs survive.
void step_round(const SimConfig& cfg, LiveRun& run, std::mt19937_64& rng);

/// Full protocol run until every belief reaches zero.
SimOutcome run_once(const SimConfig& cfg, std::mt19937_64& rng);

struct SummaryStats {
    double mean = 0.0;
    double std_error = 0.0;
    double p50 = 0.0;
    double p90 = 0.0;
    double p99 = 0.0;
};

struct BatchSummary {
    long runs = 0;
    SummaryStats time;
    SummaryStats rounds;
    SummaryStats packets;
    double non_innovative_rate = 0.0; // over packets received at rank < M
    const char* rng_name = "";
};

/// Independent replications on per-run substreams; deterministic in
/// (seed, runs).
BatchSummary run_batch(const SimConfig& cfg);

} // namespace ncbcast
