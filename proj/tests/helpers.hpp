#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "ncbcast/model.hpp"
#include "ncbcast/policy.hpp"

namespace ncbcast::testing {

/// Satellite broadcast scenario: M=5, N=2, R=1.5 Mbps, n=10000, h=80,
/// g=20, n_ack=50, GEO round trip 0.25 s, loss-free ACKs.
inline SystemParams satellite_params(double pe = 0.0, int M = 5, int N = 2) {
    SystemParams p;
    p.M = M;
    p.N = N;
    p.R = 1.5e6;
    p.n = 10000;
    p.h = 80;
    p.g = 20;
    p.n_ack = 50;
    p.channels.assign(N, ChannelParams{pe, 0.0, 0.25});
    return p;
}

inline SystemParams single_link(double pe, double pe_ack = 0.0, int M = 1) {
    SystemParams p = satellite_params(pe, M, 1);
    p.channels[0].pe_ack = pe_ack;
    return p;
}

inline Policy manual_policy(std::vector<int> bursts) {
    Policy policy;
    policy.bursts = std::move(bursts);
    policy.provenance = Provenance::Manual;
    return policy;
}

/// Minimal-burst table N_i = i.
inline Policy unit_policy(int M) {
    std::vector<int> bursts(M);
    for (int i = 1; i <= M; ++i) bursts[i - 1] = i;
    return manual_policy(std::move(bursts));
}

/// Independent oracle for receiver_transition: enumerate all 2^n_i erasure
/// patterns of the burst and the two ACK outcomes.
inline double brute_force_receiver_transition(int s, int s_prime, int n_i,
                                              const ChannelParams& ch) {
    if (s == 0) return s_prime == 0 ? 1.0 : 0.0;
    double success_ge_s = 0.0, success_exact = 0.0, success_zero = 0.0;
    for (unsigned long pattern = 0; pattern < (1ul << n_i); ++pattern) {
        double prob = 1.0;
        int successes = 0;
        for (int b = 0; b < n_i; ++b) {
            if (pattern >> b & 1ul) {
                prob *= 1.0 - ch.pe;
                ++successes;
            } else {
                prob *= ch.pe;
            }
        }
        if (successes >= s) success_ge_s += prob;
        if (successes == s - s_prime) success_exact += prob;
        if (successes == 0) success_zero += prob;
    }
    if (s_prime == 0) return (1.0 - ch.pe_ack) * success_ge_s;
    if (s_prime == s) return (1.0 - ch.pe_ack) * success_zero + ch.pe_ack;
    return (1.0 - ch.pe_ack) * success_exact;
}

} // namespace ncbcast::testing
