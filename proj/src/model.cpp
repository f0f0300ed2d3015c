#include "ncbcast/model.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace ncbcast {

void SystemParams::validate() const {
    if (M < 1) throw std::invalid_argument("M must be >= 1");
    if (N < 1) throw std::invalid_argument("N must be >= 1");
    if (R <= 0) throw std::invalid_argument("R must be > 0");
    if (n <= 0) throw std::invalid_argument("n must be > 0");
    if (h < 0) throw std::invalid_argument("h must be >= 0");
    if (g < 0) throw std::invalid_argument("g must be >= 0");
    if (n_ack < 0) throw std::invalid_argument("n_ack must be >= 0");
    if (static_cast<int>(channels.size()) != N)
        throw std::invalid_argument("expected " + std::to_string(N) + " channel entries, got " +
                                    std::to_string(channels.size()));
    for (const auto& ch : channels) {
        if (ch.pe < 0 || ch.pe > 1) throw std::invalid_argument("pe must be in [0,1]");
        if (ch.pe_ack < 0 || ch.pe_ack > 1) throw std::invalid_argument("pe_ack must be in [0,1]");
        if (ch.t_rt < 0) throw std::invalid_argument("t_rt must be >= 0");
    }
    for (int j = 1; j < N; ++j)
        if (channels[j].t_rt < channels[j - 1].t_rt)
            throw std::invalid_argument("channels must be sorted by t_rt ascending");
}

double packet_duration(const SystemParams& p) {
    p.validate();
    return (p.h + p.n + p.g * p.M) / p.R;
}

double ack_duration(const SystemParams& p) {
    return p.n_ack / p.R;
}

std::vector<double> ack_wait_offsets(const SystemParams& p) {
    p.validate();
    const double t_ack = ack_duration(p);
    std::vector<double> t(p.N, 0.0);
    if (p.ack_mode == AckMode::Interfering)
        t[0] = (p.channels[p.N - 1].t_rt - p.channels[0].t_rt) / 2.0;
    for (int i = 1; i < p.N; ++i)
        t[i] = std::max(t[i - 1] + t_ack - p.channels[i].t_rt + p.channels[i - 1].t_rt, 0.0);
    return t;
}

double wait_time(const SystemParams& p) {
    const auto offsets = ack_wait_offsets(p);
    return p.channels[p.N - 1].t_rt + offsets[p.N - 1] + ack_duration(p);
}

double round_duration(const SystemParams& p, int n_i) {
    if (n_i < 1) throw std::invalid_argument("round must send at least one packet");
    return n_i * packet_duration(p) + wait_time(p);
}

double rt_from_distance(double d, double c) {
    if (d < 0) throw std::invalid_argument("distance must be >= 0");
    if (c <= 0) throw std::invalid_argument("propagation speed must be > 0");
    return 2.0 * d / c;
}

} // namespace ncbcast
