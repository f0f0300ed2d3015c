#include "ncbcast/baselines.hpp"

#include <cmath>
#include <stdexcept>

namespace ncbcast {

RRParams RRParams::from_system(const SystemParams& p, GammaMode mode) {
    p.validate();
    RRParams rp;
    rp.pe = p.channels[0].pe;
    for (const auto& ch : p.channels) {
        if (ch.pe != rp.pe)
            throw std::invalid_argument(
                "Round-Robin analysis requires symmetric channels (equal pe for all receivers)");
        if (ch.pe_ack != 0.0)
            throw std::invalid_argument("Round-Robin analysis requires loss-free ACKs (pe_ack = 0)");
    }
    rp.M = p.M;
    rp.N = p.N;
    rp.params = p;
    rp.gamma_mode = mode;
    return rp;
}

double expected_max_retx(double pe, int M, int N, double tol) {
    if (pe < 0.0 || pe >= 1.0) throw std::invalid_argument("pe must be in [0,1)");
    if (M < 1 || N < 1) throw std::invalid_argument("M and N must be >= 1");
    if (tol <= 0.0) throw std::invalid_argument("tol must be > 0");
    if (pe == 0.0) return 0.0;

    const double mn = static_cast<double>(M) * N;
    double sum = 0.0;
    double pet = 1.0; // pe^t, updated each iteration
    for (long t = 1; t <= 100000000L; ++t) {
        pet *= pe;
        sum += -std::expm1(mn * std::log1p(-pet));
        if (mn * pet * pe / (1.0 - pe) < tol) return sum;
    }
    throw std::runtime_error("expected_max_retx series failed to converge");
}

RRFullDuplexResult rr_full_duplex(const RRParams& rp, double tol) {
    const double e_max = expected_max_retx(rp.pe, rp.M, rp.N, tol);
    const double t_w = wait_time(rp.params);
    const double t_p = packet_duration(rp.params);
    return {t_w + t_p * rp.M * (0.5 + e_max), t_w + t_p * rp.M * (1.0 + e_max)};
}

RRTddResult rr_tdd(const RRParams& rp, double tol) {
    const double pass = wait_time(rp.params) + packet_duration(rp.params) * rp.M;
    if (rp.pe == 0.0) return {pass, true};
    return {pass * (1.0 + expected_max_retx(rp.pe, rp.M, rp.N, tol)), false};
}

} // namespace ncbcast
