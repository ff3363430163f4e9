#pragma once

// Direct simulation of the four consensus systems on a constructed graph:
// noiseless averaging, averaging under a uniform communication delay, and
// first/second-order dynamics driven by white noise.
//
// Integration is fixed-step explicit Euler (Euler-Maruyama for the noisy
// systems); the delay is handled by a ring buffer of past states with
// constant pre-history. Runs are bit-reproducible for a given config.

#include <cstdint>
#include <optional>
#include <vector>

#include "selfsim/graph.hpp"

namespace selfsim {

enum class SimKind { Noiseless, Delayed, FirstOrderNoisy, SecondOrderNoisy };

std::string sim_kind_name(SimKind kind);
SimKind sim_kind_from_name(const std::string& name);

struct SimConfig {
    const Graph* graph = nullptr;
    SimKind kind = SimKind::Noiseless;
    double dt = 0.0;
    double t_end = 0.0;
    double tau = 0.0;              // uniform delay, Delayed only
    double noise_intensity = 1.0;  // multiplier on the unit-variance noise
    std::uint64_t seed = 0;
    std::vector<double> initial_state;     // empty means all zeros
    std::vector<double> initial_velocity;  // second-order only
    int record_stride = 1;
};

/// Checks dt > 0, t_end >= dt, dt <= 0.1/zeta (explicit-integration
/// headroom), tau an integer multiple of dt, and initial vector lengths.
/// Throws std::invalid_argument on violation.
void validate_config(const SimConfig& cfg);

struct SimTrace {
    std::vector<double> times;
    std::vector<std::vector<double>> states;      // one row per recorded step
    std::vector<std::vector<double>> velocities;  // second-order only
    bool diverged = false;
    double divergence_time = 0.0;  // meaningful only when diverged
};

/// x' = -L x. The agent mean is preserved step by step; states converge to
/// the all-equal average for any initial condition.
SimTrace run_noiseless(const SimConfig& cfg);

/// x'(t) = -L x(t - tau), constant history x(0) on [-tau, 0]. Converges for
/// tau below the delay margin; flagged diverged once max|x| exceeds
/// 1e6 * max(1, max|x(0)|). tau = 0 reproduces run_noiseless bit for bit.
SimTrace run_delayed(const SimConfig& cfg);

struct NoisyResult {
    SimTrace sample;        // trajectory of trial 0
    double empirical = 0.0; // mean over trials of the steady-window variance
    double std_error = 0.0; // standard error across trials
    int num_trials = 0;
};

/// x' = -L x + w. Empirical first-order coherence: time-and-trial average of
/// (1/N) sum_i (x_i - mean(x))^2 over the window [t_end/2, t_end]. Trials use
/// independent counter-based streams derived from (seed, trial).
NoisyResult run_first_order_noisy(const SimConfig& cfg, int num_trials);

/// x' = v, v' = -L x - L v + w (noise enters the velocities only).
/// Empirical second-order coherence from the position deviations.
NoisyResult run_second_order_noisy(const SimConfig& cfg, int num_trials);

/// Least-squares slope of log ||x - mean(x)*1||_2 against time over
/// [t_lo, t_hi]; returns the decay rate (positive for decaying residuals).
double fit_decay_rate(const SimTrace& trace, double t_lo, double t_hi);

/// Largest deviation of the agent mean from its initial value over the trace.
double max_mean_drift(const SimTrace& trace);

/// Deterministic initial condition with entries uniform in [-1, 1] shifted
/// to the requested mean.
std::vector<double> seeded_initial_state(std::int64_t n, std::uint64_t seed,
                                         double mean = 0.0);

struct DelayBracket {
    double tau_stable = 0.0;    // largest probed delay that converged
    double tau_unstable = 0.0;  // smallest probed delay that diverged
};

/// Bisection over the delay grid (integer multiples of dt) using the
/// divergence flag as predicate. The returned bracket has consecutive grid
/// points around the empirical stability transition.
DelayBracket find_delay_threshold(const Graph& g, double dt, double t_end,
                                  std::uint64_t seed);

}  // namespace selfsim
