#include "ncbcast/policy.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "ncbcast/markov.hpp"

namespace ncbcast {

std::string to_string(Provenance p) {
    switch (p) {
        case Provenance::Optimal: return "optimal";
        case Provenance::WorstLink: return "worst_link";
        case Provenance::CombinedErasure: return "combined_erasure";
        case Provenance::Manual: return "manual";
    }
    throw std::logic_error("unreachable provenance value");
}

Provenance provenance_from_string(const std::string& s) {
    if (s == "optimal") return Provenance::Optimal;
    if (s == "worst_link") return Provenance::WorstLink;
    if (s == "combined_erasure") return Provenance::CombinedErasure;
    if (s == "manual") return Provenance::Manual;
    throw std::invalid_argument("unknown provenance tag '" + s + "'");
}

int Policy::burst_for(int i) const {
    if (i < 1 || i > block_size())
        throw std::invalid_argument("dof count out of policy range");
    return bursts[i - 1];
}

void Policy::validate() const {
    if (bursts.empty()) throw std::invalid_argument("policy table is empty");
    for (int i = 1; i <= block_size(); ++i)
        if (bursts[i - 1] < i)
            throw std::invalid_argument("N_" + std::to_string(i) + " must be >= " +
                                        std::to_string(i));
}

namespace {

// Mean time spent in link state s under burst length k, given the
// completion times of all smaller states.
double link_state_objective(const LinkParams& lp, int s, int k,
                            const std::vector<double>& times) {
    const ChannelParams ch{lp.pe, lp.pe_ack, 0.0};
    const bool gate = lp.params.strict_f_gate;
    const double stay = receiver_transition(s, s, k, ch, gate);
    const double escape = 1.0 - stay;
    if (escape <= 1e-15) return std::numeric_limits<double>::infinity();
    double acc = round_duration(lp.params, k);
    for (int sp = 1; sp < s; ++sp)
        acc += receiver_transition(s, sp, k, ch, gate) * times[sp];
    return acc / escape;
}

} // namespace

Policy optimize_link(const LinkParams& lp, const OptimizerOptions& opt) {
    lp.params.validate();
    if (lp.pe < 0 || lp.pe > 1 || lp.pe_ack < 0 || lp.pe_ack > 1)
        throw std::invalid_argument("link erasure probabilities must be in [0,1]");
    if (lp.pe >= 1.0) throw std::domain_error("link with pe = 1 never completes");
    if (lp.pe_ack >= 1.0) throw std::domain_error("link with pe_ack = 1 never completes");

    const int M = lp.params.M;
    const int cap = opt.cap_multiplier * M;
    Policy policy;
    policy.bursts.assign(M, 0);
    policy.provenance = Provenance::Optimal;

    std::vector<double> times(M + 1, 0.0);
    for (int s = 1; s <= M; ++s) {
        int best_k = s;
        double best = link_state_objective(lp, s, s, times);
        int stale = 0;
        for (int k = s + 1; k <= cap && stale < opt.patience; ++k) {
            const double obj = link_state_objective(lp, s, k, times);
            if (obj < best) {
                best = obj;
                best_k = k;
                stale = 0;
            } else {
                ++stale;
            }
        }
        policy.bursts[s - 1] = best_k;
        times[s] = best;
    }
    return policy;
}

std::vector<double> link_state_times(const LinkParams& lp, const Policy& policy) {
    lp.params.validate();
    policy.validate();
    const int M = lp.params.M;
    if (policy.block_size() != M) throw std::invalid_argument("policy block size does not match M");
    std::vector<double> times(M + 1, 0.0);
    for (int s = 1; s <= M; ++s)
        times[s] = link_state_objective(lp, s, policy.burst_for(s), times);
    return times;
}

Policy heuristic_worst_link(const SystemParams& p, const OptimizerOptions& opt) {
    p.validate();
    LinkParams lp;
    lp.params = p;
    for (const auto& ch : p.channels) {
        lp.pe = std::max(lp.pe, ch.pe);
        lp.pe_ack = std::max(lp.pe_ack, ch.pe_ack);
    }
    Policy policy = optimize_link(lp, opt);
    policy.provenance = Provenance::WorstLink;
    return policy;
}

Policy heuristic_combined(const SystemParams& p, const OptimizerOptions& opt) {
    p.validate();
    double keep = 1.0, keep_ack = 1.0;
    for (const auto& ch : p.channels) {
        keep *= 1.0 - ch.pe;
        keep_ack *= 1.0 - ch.pe_ack;
    }
    LinkParams lp;
    lp.params = p;
    lp.pe = 1.0 - keep;
    lp.pe_ack = 1.0 - keep_ack;
    Policy policy = optimize_link(lp, opt);
    policy.provenance = Provenance::CombinedErasure;
    return policy;
}

std::vector<SearchWindow> exact_search_windows(const SystemParams& p,
                                               const OptimizerOptions& opt) {
    const Policy wl = heuristic_worst_link(p, opt);
    const Policy ce = heuristic_combined(p, opt);
    const int cap = opt.cap_multiplier * p.M;
    std::vector<SearchWindow> windows(p.M);
    for (int i = 1; i <= p.M; ++i) {
        const int a = wl.burst_for(i);
        const int b = ce.burst_for(i);
        windows[i - 1].lo = std::max(i, std::min(a, b) - opt.window_slack);
        windows[i - 1].hi = std::min(cap, std::max(a, b) + opt.window_slack);
    }
    return windows;
}

Policy optimize_exact(const SystemParams& p, const OptimizerOptions& opt) {
    p.validate();
    for (const auto& ch : p.channels)
        if (ch.pe >= 1.0) throw std::domain_error("a channel with pe = 1 never completes");

    const std::vector<SearchWindow> windows = exact_search_windows(p, opt);
    Policy current = heuristic_worst_link(p, opt);
    double best = mean_completion_time(current, p).mean_time;

    for (int sweep = 0; sweep < opt.max_sweeps; ++sweep) {
        bool changed = false;
        for (int i = 1; i <= p.M; ++i) {
            const auto [lo, hi] = windows[i - 1];
            int best_k = current.burst_for(i);
            Policy candidate = current;
            for (int k = lo; k <= hi; ++k) {
                if (k == current.burst_for(i)) continue;
                candidate.bursts[i - 1] = k;
                const double obj = mean_completion_time(candidate, p).mean_time;
                // Ties resolve to the smaller burst length.
                if (obj < best || (obj == best && k < best_k)) {
                    best = obj;
                    best_k = k;
                }
            }
            if (best_k != current.burst_for(i)) {
                current.bursts[i - 1] = best_k;
                changed = true;
            }
        }
        if (!changed) break;
    }

    // Coordinate descent from the worst-link start is already no worse than
    // that heuristic; guarantee the same against the combined table.
    const Policy ce = heuristic_combined(p, opt);
    if (mean_completion_time(ce, p).mean_time < best) current.bursts = ce.bursts;

    current.provenance = Provenance::Optimal;
    return current;
}

void save_policy(const Policy& policy, std::ostream& out) {
    policy.validate();
    out << "# M=" << policy.block_size() << " provenance=" << to_string(policy.provenance) << '\n';
    for (int i = 1; i <= policy.block_size(); ++i)
        out << i << ' ' << policy.burst_for(i) << '\n';
}

void save_policy_file(const Policy& policy, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot open policy file '" + path + "' for writing");
    save_policy(policy, out);
}

Policy load_policy(std::istream& in) {
    std::string header;
    if (!std::getline(in, header) || header.rfind("# M=", 0) != 0)
        throw std::invalid_argument("policy file must start with '# M=<M> provenance=<tag>'");
    std::istringstream hs(header.substr(2));
    std::string m_field, prov_field;
    hs >> m_field >> prov_field;
    const int M = std::stoi(m_field.substr(2));
    if (prov_field.rfind("provenance=", 0) != 0)
        throw std::invalid_argument("policy header missing provenance tag");

    Policy policy;
    policy.provenance = provenance_from_string(prov_field.substr(11));
    policy.bursts.assign(M, 0);
    for (int expected = 1; expected <= M; ++expected) {
        int i = 0, n_i = 0;
        if (!(in >> i >> n_i) || i != expected)
            throw std::invalid_argument("policy file: expected row for i=" +
                                        std::to_string(expected));
        policy.bursts[expected - 1] = n_i;
    }
    policy.validate();
    return policy;
}

Policy load_policy_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open policy file '" + path + "'");
    return load_policy(in);
}

} // namespace ncbcast
