#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "ncbcast/model.hpp"
#include "ncbcast/policy.hpp"

namespace ncbcast {

// State space: vectors (s_1,...,s_N) of dofs still needed, s_j in [0,M].
// Canonical index is the mixed-radix value of (M - s_1, ..., M - s_N) with
// receiver 1 most significant, so (M,...,M) has index 0, (0,...,0) is last,
// and the transition matrix is upper triangular.

std::size_t state_count(int M, int N);
std::size_t state_index(std::span<const int> dofs, int M);
std::vector<int> state_from_index(std::size_t idx, int M, int N);

struct TransitionMatrix {
    int M = 0;
    int N = 0;
    std::size_t order = 0;
    std::vector<double> entries; // row-major, order x order

    double at(std::size_t from, std::size_t to) const { return entries[from * order + to]; }
    double& at(std::size_t from, std::size_t to) { return entries[from * order + to]; }
};

/// Per-receiver one-round transition probability P(s'|s, n_i).
/// strict_f_gate selects the gate n_i >= s for partial progress
/// (the alternative being n_i >= s - s').
double receiver_transition(int s, int s_prime, int n_i, const ChannelParams& ch,
                           bool strict_f_gate = true);

/// Joint transition probability: product over receivers with the shared
/// burst length N_i, i = max_j s_j.
double joint_transition(std::span<const int> s, std::span<const int> s_prime,
                        const Policy& policy, const SystemParams& p);

/// Dense row-stochastic matrix over all (M+1)^N states in canonical order.
TransitionMatrix build_matrix(const Policy& policy, const SystemParams& p);

struct CompletionResult {
    double mean_time = 0.0;               // T_(M,...,M)
    std::vector<double> per_state_times;  // one entry per transient state, canonical order
    Policy policy_used;
};

/// Mean absorption time from every transient state via back-substitution
/// on the triangular system (I - P) T = mu.
CompletionResult mean_completion_time(const Policy& policy, const SystemParams& p);

/// T_(M,...,M) via Cramer's rule on Gamma = I - P (small instances only).
double completion_time_cramer(const Policy& policy, const SystemParams& p);

/// Probability of having been absorbed after the given number of rounds,
/// starting from (M,...,M).
double absorption_probability_after(const Policy& policy, const SystemParams& p, long rounds);

/// Smallest round count reaching absorption probability >= 1 - epsilon.
long empirical_stops(const Policy& policy, const SystemParams& p, double epsilon,
                     long cap = 1000000);

struct StoppingBound {
    double lambda2_magnitude = 0.0;
    bool eigen_distinct = false;
    std::optional<double> G;           // set only when eigen_distinct
    std::optional<double> aleph_bound; // set only when eigen_distinct
    long aleph_empirical = 0;
};

/// Second-eigenvalue stopping bound. Eigenvalues are read off the diagonal
/// of the triangular matrix; when they are all distinct the constant G is
/// evaluated through the Lagrange interpolation expansion of P^n.
StoppingBound lemma1_bound(const Policy& policy, const SystemParams& p, double epsilon,
                           long cap = 1000000);

/// Debug dump: row/column labels are state tuples.
void dump_matrix_csv(const TransitionMatrix& tm, std::ostream& out);

} // namespace ncbcast
