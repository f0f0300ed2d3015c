#include "ncbcast/markov.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace ncbcast {

namespace {

constexpr double kSingularTol = 1e-15;
constexpr double kEigenDistinctTol = 1e-9;

// C(n,k) (1-pe)^k pe^(n-k); log-space above n = 60 to avoid overflow.
double binom_term(int n, int k, double pe) {
    if (pe <= 0.0) return k == n ? 1.0 : 0.0;
    if (pe >= 1.0) return k == 0 ? 1.0 : 0.0;
    if (n <= 60) {
        double c = 1.0;
        for (int i = 0; i < k; ++i) c = c * (n - i) / (i + 1);
        return c * std::pow(1.0 - pe, k) * std::pow(pe, n - k);
    }
    const double lc = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
    return std::exp(lc + k * std::log1p(-pe) + (n - k) * std::log(pe));
}

int max_dof(std::span<const int> dofs) {
    int m = 0;
    for (int s : dofs) m = std::max(m, s);
    return m;
}

void check_state(std::span<const int> dofs, int M) {
    for (int s : dofs)
        if (s < 0 || s > M) throw std::invalid_argument("dof component out of [0,M]");
}

// Sign and log-magnitude of a dense determinant, by Gaussian elimination
// with partial pivoting. Returns sign 0 for a singular matrix.
struct LogDet {
    int sign = 1;
    double log_abs = 0.0;
};

LogDet log_determinant(std::vector<double> a, std::size_t n) {
    LogDet d;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a[r * n + col]) > std::abs(a[piv * n + col])) piv = r;
        if (std::abs(a[piv * n + col]) < kSingularTol) return {0, 0.0};
        if (piv != col) {
            for (std::size_t c = 0; c < n; ++c) std::swap(a[piv * n + c], a[col * n + c]);
            d.sign = -d.sign;
        }
        const double pivot = a[col * n + col];
        if (pivot < 0) d.sign = -d.sign;
        d.log_abs += std::log(std::abs(pivot));
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = a[r * n + col] / pivot;
            if (f == 0.0) continue;
            for (std::size_t c = col; c < n; ++c) a[r * n + c] -= f * a[col * n + c];
        }
    }
    return d;
}

} // namespace

std::size_t state_count(int M, int N) {
    std::size_t count = 1;
    for (int j = 0; j < N; ++j) {
        if (count > 20000000 / static_cast<std::size_t>(M + 1))
            throw std::invalid_argument("state space too large: (M+1)^N overflows practical limits");
        count *= static_cast<std::size_t>(M + 1);
    }
    return count;
}

std::size_t state_index(std::span<const int> dofs, int M) {
    check_state(dofs, M);
    std::size_t idx = 0;
    for (int s : dofs) idx = idx * (M + 1) + static_cast<std::size_t>(M - s);
    return idx;
}

std::vector<int> state_from_index(std::size_t idx, int M, int N) {
    std::vector<int> dofs(N);
    for (int j = N - 1; j >= 0; --j) {
        dofs[j] = M - static_cast<int>(idx % (M + 1));
        idx /= (M + 1);
    }
    return dofs;
}

double receiver_transition(int s, int s_prime, int n_i, const ChannelParams& ch,
                           bool strict_f_gate) {
    if (s < 0 || s_prime < 0) throw std::invalid_argument("dof counts must be >= 0");
    if (s_prime > s) throw std::invalid_argument("dof count cannot increase");
    if (n_i < 1) throw std::invalid_argument("burst length must be >= 1");

    if (s == 0) return 1.0;
    if (s_prime == s) return (1.0 - ch.pe_ack) * binom_term(n_i, 0, ch.pe) + ch.pe_ack;
    if (s_prime > 0) {
        const int gate = strict_f_gate ? s : s - s_prime;
        if (n_i < gate) return 0.0;
        return (1.0 - ch.pe_ack) * binom_term(n_i, s - s_prime, ch.pe);
    }
    // s' = 0: complement of all other outcomes.
    double rest = 0.0;
    for (int x = 1; x <= s; ++x) rest += receiver_transition(s, x, n_i, ch, strict_f_gate);
    return std::clamp(1.0 - rest, 0.0, 1.0);
}

double joint_transition(std::span<const int> s, std::span<const int> s_prime,
                        const Policy& policy, const SystemParams& p) {
    p.validate();
    policy.validate();
    if (s.size() != static_cast<std::size_t>(p.N) || s_prime.size() != s.size())
        throw std::invalid_argument("state length must equal receiver count");
    check_state(s, p.M);
    check_state(s_prime, p.M);
    for (std::size_t j = 0; j < s.size(); ++j)
        if (s_prime[j] > s[j]) throw std::invalid_argument("dof count cannot increase");

    const int i = max_dof(s);
    if (i == 0) return 1.0; // absorbing state
    const int n_i = policy.burst_for(i);
    double prob = 1.0;
    for (std::size_t j = 0; j < s.size(); ++j)
        prob *= receiver_transition(s[j], s_prime[j], n_i, p.channels[j], p.strict_f_gate);
    return prob;
}

TransitionMatrix build_matrix(const Policy& policy, const SystemParams& p) {
    p.validate();
    policy.validate();
    if (policy.block_size() != p.M)
        throw std::invalid_argument("policy block size does not match M");

    TransitionMatrix tm;
    tm.M = p.M;
    tm.N = p.N;
    tm.order = state_count(p.M, p.N);
    tm.entries.assign(tm.order * tm.order, 0.0);

    std::vector<int> to(p.N);
    for (std::size_t from = 0; from < tm.order; ++from) {
        const std::vector<int> s = state_from_index(from, p.M, p.N);
        const int i = max_dof(s);
        if (i == 0) {
            tm.at(from, from) = 1.0;
            continue;
        }
        const int n_i = policy.burst_for(i);
        // Odometer over all componentwise-dominated target states.
        std::fill(to.begin(), to.end(), 0);
        for (;;) {
            double prob = 1.0;
            for (int j = 0; j < p.N; ++j)
                prob *= receiver_transition(s[j], to[j], n_i, p.channels[j], p.strict_f_gate);
            tm.at(from, state_index(to, p.M)) = prob;
            int j = p.N - 1;
            while (j >= 0 && to[j] == s[j]) to[j--] = 0;
            if (j < 0) break;
            ++to[j];
        }
    }
    return tm;
}

CompletionResult mean_completion_time(const Policy& policy, const SystemParams& p) {
    const TransitionMatrix tm = build_matrix(policy, p);
    const std::size_t order = tm.order;
    std::vector<double> t(order, 0.0); // absorption time; absorbing state stays 0

    for (std::size_t idx = order - 1; idx-- > 0;) {
        const double diag = 1.0 - tm.at(idx, idx);
        if (diag <= kSingularTol)
            throw std::domain_error("non-absorbing chain: state " + std::to_string(idx) +
                                    " has self-loop probability 1");
        const int i = max_dof(state_from_index(idx, p.M, p.N));
        double acc = round_duration(p, policy.burst_for(i));
        for (std::size_t j = idx + 1; j < order; ++j) acc += tm.at(idx, j) * t[j];
        t[idx] = acc / diag;
    }

    CompletionResult result;
    result.mean_time = t[0];
    result.per_state_times.assign(t.begin(), t.end() - 1);
    result.policy_used = policy;
    return result;
}

double completion_time_cramer(const Policy& policy, const SystemParams& p) {
    const TransitionMatrix tm = build_matrix(policy, p);
    const std::size_t t = tm.order - 1; // transient block

    // Gamma = I - P over the transient states; its determinant is the
    // diagonal product (triangular), tracked in log space.
    double log_den = 0.0;
    for (std::size_t i = 0; i < t; ++i) {
        const double d = 1.0 - tm.at(i, i);
        if (d <= kSingularTol)
            throw std::domain_error("non-absorbing chain: singular Gamma diagonal");
        log_den += std::log(d);
    }

    // Numerator: Gamma with the column of state (M,...,M) replaced by mu.
    std::vector<double> a(t * t, 0.0);
    for (std::size_t i = 0; i < t; ++i)
        for (std::size_t j = 0; j < t; ++j)
            a[i * t + j] = (i == j ? 1.0 : 0.0) - tm.at(i, j);
    for (std::size_t i = 0; i < t; ++i) {
        const int dof = max_dof(state_from_index(i, p.M, p.N));
        a[i * t + 0] = round_duration(p, policy.burst_for(dof));
    }
    const LogDet num = log_determinant(std::move(a), t);
    if (num.sign == 0) return 0.0;
    return num.sign * std::exp(num.log_abs - log_den);
}

double absorption_probability_after(const Policy& policy, const SystemParams& p, long rounds) {
    if (rounds < 0) throw std::invalid_argument("rounds must be >= 0");
    const TransitionMatrix tm = build_matrix(policy, p);
    const std::size_t order = tm.order;
    std::vector<double> v(order, 0.0), next(order, 0.0);
    v[0] = 1.0;
    for (long r = 0; r < rounds; ++r) {
        std::fill(next.begin(), next.end(), 0.0);
        for (std::size_t i = 0; i < order; ++i) {
            if (v[i] == 0.0) continue;
            for (std::size_t j = i; j < order; ++j) next[j] += v[i] * tm.at(i, j);
        }
        v.swap(next);
    }
    return v[order - 1];
}

long empirical_stops(const Policy& policy, const SystemParams& p, double epsilon, long cap) {
    if (epsilon <= 0.0 || epsilon >= 1.0) throw std::invalid_argument("epsilon must be in (0,1)");
    const TransitionMatrix tm = build_matrix(policy, p);
    const std::size_t order = tm.order;
    std::vector<double> v(order, 0.0), next(order, 0.0);
    v[0] = 1.0;
    for (long r = 1; r <= cap; ++r) {
        std::fill(next.begin(), next.end(), 0.0);
        for (std::size_t i = 0; i < order; ++i) {
            if (v[i] == 0.0) continue;
            for (std::size_t j = i; j < order; ++j) next[j] += v[i] * tm.at(i, j);
        }
        v.swap(next);
        if (v[order - 1] >= 1.0 - epsilon) return r;
    }
    throw std::runtime_error("absorption probability did not reach 1-epsilon within " +
                             std::to_string(cap) + " rounds");
}

StoppingBound lemma1_bound(const Policy& policy, const SystemParams& p, double epsilon, long cap) {
    if (epsilon <= 0.0 || epsilon >= 1.0) throw std::invalid_argument("epsilon must be in (0,1)");
    const TransitionMatrix tm = build_matrix(policy, p);
    const std::size_t order = tm.order;

    // Triangular matrix: the spectrum is the diagonal. The absorbing state
    // contributes the eigenvalue 1.
    std::vector<double> eig(order);
    for (std::size_t i = 0; i < order; ++i) eig[i] = tm.at(i, i);

    double lambda2 = 0.0;
    for (std::size_t i = 0; i + 1 < order; ++i) lambda2 = std::max(lambda2, std::abs(eig[i]));
    if (lambda2 >= 1.0) throw std::domain_error("non-absorbing chain: |lambda2| >= 1");

    StoppingBound bound;
    bound.lambda2_magnitude = lambda2;
    bound.aleph_empirical = empirical_stops(policy, p, epsilon, cap);

    std::vector<double> sorted = eig;
    std::sort(sorted.begin(), sorted.end());
    bound.eigen_distinct = true;
    for (std::size_t i = 0; i + 1 < sorted.size(); ++i)
        if (sorted[i + 1] - sorted[i] <= kEigenDistinctTol) {
            bound.eigen_distinct = false;
            break;
        }
    if (!bound.eigen_distinct) return bound;

    // G = entry [(M,...,M),(0,...,0)] of sum_{i>=2} |F_i(P)| with
    // F_i(P) = prod_{j!=i} (P - lambda_j I) / (lambda_i - lambda_j).
    const std::size_t absorbing = order - 1; // eigenvalue 1
    std::vector<double> work(order * order), prod(order * order);
    double g_entry = 0.0;
    for (std::size_t i = 0; i < order; ++i) {
        if (i == absorbing) continue;
        std::fill(prod.begin(), prod.end(), 0.0);
        for (std::size_t d = 0; d < order; ++d) prod[d * order + d] = 1.0;
        for (std::size_t j = 0; j < order; ++j) {
            if (j == i) continue;
            const double scale = 1.0 / (eig[i] - eig[j]);
            // work = prod * (P - lambda_j I) * scale; both factors upper triangular.
            std::fill(work.begin(), work.end(), 0.0);
            for (std::size_t r = 0; r < order; ++r)
                for (std::size_t k = r; k < order; ++k) {
                    const double v = prod[r * order + k];
                    if (v == 0.0) continue;
                    for (std::size_t c = k; c < order; ++c) {
                        const double f = tm.at(k, c) - (k == c ? eig[j] : 0.0);
                        if (f != 0.0) work[r * order + c] += v * f * scale;
                    }
                }
            work.swap(prod);
        }
        g_entry += std::abs(prod[0 * order + (order - 1)]);
    }
    bound.G = g_entry;
    bound.aleph_bound = (std::log(g_entry) - std::log(epsilon)) / (-std::log(lambda2));
    return bound;
}

void dump_matrix_csv(const TransitionMatrix& tm, std::ostream& out) {
    auto label = [&](std::size_t idx) {
        const std::vector<int> s = state_from_index(idx, tm.M, tm.N);
        std::string text = "(";
        for (std::size_t j = 0; j < s.size(); ++j) {
            if (j) text += ';';
            text += std::to_string(s[j]);
        }
        return text + ")";
    };
    out << "from";
    for (std::size_t j = 0; j < tm.order; ++j) out << ',' << label(j);
    out << '\n';
    char buf[32];
    for (std::size_t i = 0; i < tm.order; ++i) {
        out << label(i);
        for (std::size_t j = 0; j < tm.order; ++j) {
            std::snprintf(buf, sizeof buf, "%.9g", tm.at(i, j));
            out << ',' << buf;
        }
        out << '\n';
    }
}

} // namespace ncbcast
