#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "ncbcast/model.hpp"

namespace ncbcast {

enum class Provenance { Optimal, WorstLink, CombinedErasure, Manual };

std::string to_string(Provenance p);
Provenance provenance_from_string(const std::string& s);

/// Burst-length table: bursts[i-1] = N_i coded packets sent when the
/// largest outstanding dof count across receivers is i.
struct Policy {
    std::vector<int> bursts;
    Provenance provenance = Provenance::Manual;

    int block_size() const { return static_cast<int>(bursts.size()); }
    int burst_for(int i) const;

    // Enforces N_i >= i; throws std::invalid_argument.
    void validate() const;
};

/// Single-receiver abstraction used by the heuristics: one erasure pair
/// plus the full broadcast timing.
struct LinkParams {
    double pe = 0.0;
    double pe_ack = 0.0;
    SystemParams params;
};

struct OptimizerOptions {
    int patience = 5;        // consecutive non-improving candidates before a scan stops
    int cap_multiplier = 50; // N_i <= cap_multiplier * M
    int window_slack = 5;    // widening of the heuristic window in optimize_exact
    int max_sweeps = 100;
};

/// Exact per-state optimizer for the link (N = 1) chain. States are solved
/// in increasing dof order; each N_s scan stops after `patience`
/// non-improving candidates.
Policy optimize_link(const LinkParams& lp, const OptimizerOptions& opt = {});

/// Mean completion times T_0..T_M of the link chain under a fixed policy.
std::vector<double> link_state_times(const LinkParams& lp, const Policy& policy);

/// Approximates the broadcast as a link to the worst receiver:
/// pe = max_j pe_j, pe_ack = max_j pe_ack_j.
Policy heuristic_worst_link(const SystemParams& p, const OptimizerOptions& opt = {});

/// Approximates the broadcast as a link where a packet is lost when any
/// receiver loses it: pe = 1 - prod_j (1 - pe_j).
Policy heuristic_combined(const SystemParams& p, const OptimizerOptions& opt = {});

/// Coordinate descent over the table, started from the worst-link
/// heuristic and searched within the heuristic sandwich (plus slack).
Policy optimize_exact(const SystemParams& p, const OptimizerOptions& opt = {});

/// Window [lo, hi] searched for N_i by optimize_exact.
struct SearchWindow {
    int lo = 0;
    int hi = 0;
};
std::vector<SearchWindow> exact_search_windows(const SystemParams& p,
                                               const OptimizerOptions& opt = {});

// Table file format: "# M=<M> provenance=<tag>" then M lines "i N_i".
void save_policy(const Policy& policy, std::ostream& out);
void save_policy_file(const Policy& policy, const std::string& path);
Policy load_policy(std::istream& in);
Policy load_policy_file(const std::string& path);

} // namespace ncbcast
