#pragma once

#include "ncbcast/model.hpp"

namespace ncbcast {

enum class GammaMode { Lower, Upper, Both };

/// Round-Robin baselines are defined for symmetric channels with
/// loss-free ACKs only; from_system rejects anything else.
struct RRParams {
    double pe = 0.0;
    int M = 1;
    int N = 1;
    SystemParams params;
    GammaMode gamma_mode = GammaMode::Both;

    static RRParams from_system(const SystemParams& p, GammaMode mode = GammaMode::Both);
};

/// E[max_{i,k} X^i_k] = sum_{t>=1} [1 - (1 - pe^t)^(M N)], truncated once
/// the geometric tail bound M N pe^(t+1)/(1-pe) drops below tol.
double expected_max_retx(double pe, int M, int N, double tol = 1e-9);

struct RRFullDuplexResult {
    double lower = 0.0; // gamma = 1/2
    double upper = 0.0; // gamma = 1
};

/// E[T] = T_w + T_p M (gamma + E[max X]) at both gamma endpoints.
RRFullDuplexResult rr_full_duplex(const RRParams& rp, double tol = 1e-9);

struct RRTddResult {
    double time = 0.0;
    // True at pe = 0, where the literal series gives a zero completion
    // time and the value is pinned to exactly one full pass instead.
    bool degenerate = false;
};

/// E[T] = (T_w + T_p M)(1 + E[max X]): E[max X] counts retransmission
/// passes, so the mandatory first pass is added on top.
RRTddResult rr_tdd(const RRParams& rp, double tol = 1e-9);

} // namespace ncbcast
