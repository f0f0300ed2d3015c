#pragma once

#include <vector>

namespace ncbcast {

/// How receivers schedule their ACK transmissions relative to each other.
enum class AckMode { NonInterfering, Interfering };

struct ChannelParams {
    double pe = 0.0;     // data packet erasure probability
    double pe_ack = 0.0; // ACK packet erasure probability
    double t_rt = 0.0;   // round-trip time [s]
};

/// Physical and protocol parameters for one broadcast session.
/// Channels must be ordered by round-trip time ascending.
struct SystemParams {
    int M = 1;           // data packets per block
    int N = 1;           // receivers
    double R = 1.0;      // link rate [bit/s]
    double n = 1.0;      // payload bits per packet
    double h = 0.0;      // header bits
    double g = 0.0;      // bits per coding coefficient
    double n_ack = 0.0;  // ACK packet bits
    AckMode ack_mode = AckMode::NonInterfering;
    // Gate partial-progress transitions on n_i >= s (as opposed to
    // n_i >= s - s'); see receiver_transition.
    bool strict_f_gate = true;
    std::vector<ChannelParams> channels;

    // Throws std::invalid_argument on any violated invariant.
    void validate() const;
};

/// Transmission time of one coded packet: (h + n + g*M)/R.
double packet_duration(const SystemParams& p);

/// Transmission time of one ACK packet: n_ack/R.
double ack_duration(const SystemParams& p);

/// Per-receiver hold-off before sending its ACK, t_btA^1..t_btA^N.
std::vector<double> ack_wait_offsets(const SystemParams& p);

/// Stop-and-listen window: T_w = T_rt-N + t_btA^N + T_ack.
double wait_time(const SystemParams& p);

/// Duration of a round sending n_i coded packets: n_i*T_p + T_w.
double round_duration(const SystemParams& p, int n_i);

/// Round-trip time from one-way distance d and propagation speed c.
double rt_from_distance(double d, double c);

} // namespace ncbcast
