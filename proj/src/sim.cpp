#include "selfsim/sim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "selfsim/metrics.hpp"
#include "selfsim/rng.hpp"

namespace selfsim {

std::string sim_kind_name(SimKind kind) {
    switch (kind) {
        case SimKind::Noiseless: return "noiseless";
        case SimKind::Delayed: return "delayed";
        case SimKind::FirstOrderNoisy: return "noisy1";
        case SimKind::SecondOrderNoisy: return "noisy2";
    }
    return "unknown";
}

SimKind sim_kind_from_name(const std::string& name) {
    if (name == "noiseless") return SimKind::Noiseless;
    if (name == "delayed") return SimKind::Delayed;
    if (name == "noisy1") return SimKind::FirstOrderNoisy;
    if (name == "noisy2") return SimKind::SecondOrderNoisy;
    throw std::invalid_argument("unknown simulation kind '" + name + "'");
}

namespace {

// Compressed adjacency for repeated Laplacian products.
struct Adjacency {
    std::vector<std::int64_t> offsets;
    std::vector<std::int32_t> neighbors;
    std::vector<std::int32_t> degrees;
};

Adjacency make_adjacency(const Graph& g) {
    Adjacency a;
    const auto n = g.num_vertices;
    a.degrees = g.degrees;
    a.offsets.assign(n + 1, 0);
    for (const auto& [u, v] : g.edges) {
        ++a.offsets[u + 1];
        ++a.offsets[v + 1];
    }
    for (std::int64_t i = 0; i < n; ++i) a.offsets[i + 1] += a.offsets[i];
    a.neighbors.resize(2 * g.edges.size());
    std::vector<std::int64_t> cursor(a.offsets.begin(), a.offsets.end() - 1);
    for (const auto& [u, v] : g.edges) {
        a.neighbors[cursor[u]++] = v;
        a.neighbors[cursor[v]++] = u;
    }
    return a;
}

void apply_laplacian(const Adjacency& a, const std::vector<double>& x,
                     std::vector<double>& out) {
    const auto n = static_cast<std::int64_t>(x.size());
    for (std::int64_t i = 0; i < n; ++i) {
        double acc = a.degrees[i] * x[i];
        for (std::int64_t e = a.offsets[i]; e < a.offsets[i + 1]; ++e) {
            acc -= x[a.neighbors[e]];
        }
        out[i] = acc;
    }
}

double inf_norm(const std::vector<double>& x) {
    double m = 0.0;
    for (const double v : x) m = std::max(m, std::abs(v));
    return m;
}

double blow_up_threshold(const std::vector<double>& x0) {
    const double norm = inf_norm(x0);
    return norm == 0.0 ? 1e6 : 1e6 * norm;
}

std::int64_t step_count(const SimConfig& cfg) {
    return std::llround(cfg.t_end / cfg.dt);
}

std::vector<double> initial_or_zero(const std::vector<double>& init,
                                    std::int64_t n) {
    if (init.empty()) return std::vector<double>(n, 0.0);
    return init;
}

void record(SimTrace& trace, double t, const std::vector<double>& x,
            const std::vector<double>* v) {
    trace.times.push_back(t);
    trace.states.push_back(x);
    if (v != nullptr) trace.velocities.push_back(*v);
}

// Shared first-order core: delayed Laplacian argument (delay_steps == 0 is
// the noiseless system), optional additive noise.
SimTrace integrate_first_order(const SimConfig& cfg, std::int64_t delay_steps,
                               GaussianStream* noise) {
    const Graph& g = *cfg.graph;
    const auto n = g.num_vertices;
    const auto adj = make_adjacency(g);
    const auto steps = step_count(cfg);
    const auto x0 = initial_or_zero(cfg.initial_state, n);
    const double threshold = blow_up_threshold(x0);
    const double noise_scale = cfg.noise_intensity * std::sqrt(cfg.dt);

    // Ring buffer over the last delay_steps+1 states; slot t % (d+1) holds
    // the state at time step t, pre-filled with the constant history x(0).
    const auto ring = delay_steps + 1;
    std::vector<std::vector<double>> buffer(ring, x0);
    std::vector<double> x = x0;
    std::vector<double> lap(n);

    SimTrace trace;
    record(trace, 0.0, x, nullptr);
    for (std::int64_t m = 0; m < steps; ++m) {
        const auto delayed_slot = ((m - delay_steps) % ring + ring) % ring;
        apply_laplacian(adj, buffer[delayed_slot], lap);
        if (noise == nullptr) {
            for (std::int64_t i = 0; i < n; ++i) x[i] -= cfg.dt * lap[i];
        } else {
            for (std::int64_t i = 0; i < n; ++i) {
                x[i] += -cfg.dt * lap[i] + noise_scale * noise->gaussian();
            }
        }
        buffer[(m + 1) % ring] = x;
        const bool last = (m + 1 == steps);
        if ((m + 1) % cfg.record_stride == 0 || last) {
            record(trace, (m + 1) * cfg.dt, x, nullptr);
        }
        if (inf_norm(x) > threshold) {
            trace.diverged = true;
            trace.divergence_time = (m + 1) * cfg.dt;
            if ((m + 1) % cfg.record_stride != 0 && !last) {
                record(trace, (m + 1) * cfg.dt, x, nullptr);
            }
            break;
        }
    }
    return trace;
}

double window_variance_mean(const std::vector<double>& x) {
    const auto n = static_cast<double>(x.size());
    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
    double var = 0.0;
    for (const double v : x) var += (v - mean) * (v - mean);
    return var / n;
}

}  // namespace

void validate_config(const SimConfig& cfg) {
    if (cfg.graph == nullptr) {
        throw std::invalid_argument("sim config has no graph");
    }
    if (!(cfg.dt > 0.0)) throw std::invalid_argument("dt must be > 0");
    if (!(cfg.t_end >= cfg.dt)) {
        throw std::invalid_argument("t_end must be >= dt");
    }
    const auto& spec = cfg.graph->spec;
    const double zeta =
        zeta_recursive(spec.family, spec.generation, spec.branching);
    if (cfg.dt > 0.1 / zeta * (1.0 + 1e-12)) {
        throw std::invalid_argument(
            "dt too large for explicit integration: need dt <= 0.1/zeta = " +
            std::to_string(0.1 / zeta));
    }
    if (cfg.tau < 0.0) throw std::invalid_argument("tau must be >= 0");
    if (cfg.kind != SimKind::Delayed && cfg.tau != 0.0) {
        throw std::invalid_argument("tau is only meaningful for delayed runs");
    }
    const double ratio = cfg.tau / cfg.dt;
    if (std::abs(ratio - std::llround(ratio)) > 1e-9 * std::max(1.0, ratio)) {
        throw std::invalid_argument(
            "tau must be an integer multiple of dt (delay buffer indexing)");
    }
    const auto n = cfg.graph->num_vertices;
    if (!cfg.initial_state.empty() &&
        static_cast<std::int64_t>(cfg.initial_state.size()) != n) {
        throw std::invalid_argument("initial_state length != num_vertices");
    }
    if (!cfg.initial_velocity.empty() &&
        static_cast<std::int64_t>(cfg.initial_velocity.size()) != n) {
        throw std::invalid_argument("initial_velocity length != num_vertices");
    }
    if (cfg.record_stride < 1) {
        throw std::invalid_argument("record_stride must be >= 1");
    }
    if (cfg.noise_intensity < 0.0) {
        throw std::invalid_argument("noise_intensity must be >= 0");
    }
}

SimTrace run_noiseless(const SimConfig& cfg) {
    validate_config(cfg);
    return integrate_first_order(cfg, 0, nullptr);
}

SimTrace run_delayed(const SimConfig& cfg) {
    validate_config(cfg);
    const auto delay_steps = std::llround(cfg.tau / cfg.dt);
    return integrate_first_order(cfg, delay_steps, nullptr);
}

NoisyResult run_first_order_noisy(const SimConfig& cfg, int num_trials) {
    validate_config(cfg);
    if (num_trials < 1) {
        throw std::invalid_argument("num_trials must be >= 1");
    }
    const Graph& g = *cfg.graph;
    const auto n = g.num_vertices;
    const auto adj = make_adjacency(g);
    const auto steps = step_count(cfg);
    const auto burn = steps / 2;
    const auto x0 = initial_or_zero(cfg.initial_state, n);
    const double noise_scale = cfg.noise_intensity * std::sqrt(cfg.dt);

    NoisyResult result;
    result.num_trials = num_trials;
    std::vector<double> trial_values(num_trials, 0.0);
    std::vector<double> x(n), lap(n);
    for (int trial = 0; trial < num_trials; ++trial) {
        GaussianStream noise(cfg.seed, static_cast<std::uint64_t>(trial));
        x = x0;
        const bool sample = trial == 0;
        if (sample) record(result.sample, 0.0, x, nullptr);
        double acc = 0.0;
        std::int64_t count = 0;
        for (std::int64_t m = 0; m < steps; ++m) {
            apply_laplacian(adj, x, lap);
            for (std::int64_t i = 0; i < n; ++i) {
                x[i] += -cfg.dt * lap[i] + noise_scale * noise.gaussian();
            }
            if (m + 1 > burn) {
                acc += window_variance_mean(x);
                ++count;
            }
            if (sample &&
                ((m + 1) % cfg.record_stride == 0 || m + 1 == steps)) {
                record(result.sample, (m + 1) * cfg.dt, x, nullptr);
            }
        }
        trial_values[trial] = acc / static_cast<double>(count);
    }
    const double mean =
        std::accumulate(trial_values.begin(), trial_values.end(), 0.0) /
        num_trials;
    double var = 0.0;
    for (const double v : trial_values) var += (v - mean) * (v - mean);
    result.empirical = mean;
    result.std_error = num_trials > 1
                           ? std::sqrt(var / (num_trials - 1.0) / num_trials)
                           : 0.0;
    result.sample.diverged = false;
    return result;
}

NoisyResult run_second_order_noisy(const SimConfig& cfg, int num_trials) {
    validate_config(cfg);
    if (num_trials < 1) {
        throw std::invalid_argument("num_trials must be >= 1");
    }
    const Graph& g = *cfg.graph;
    const auto n = g.num_vertices;
    const auto adj = make_adjacency(g);
    const auto steps = step_count(cfg);
    const auto burn = steps / 2;
    const auto x0 = initial_or_zero(cfg.initial_state, n);
    const auto v0 = initial_or_zero(cfg.initial_velocity, n);
    const double noise_scale = cfg.noise_intensity * std::sqrt(cfg.dt);

    NoisyResult result;
    result.num_trials = num_trials;
    std::vector<double> trial_values(num_trials, 0.0);
    std::vector<double> x(n), v(n), lap_x(n), lap_v(n);
    for (int trial = 0; trial < num_trials; ++trial) {
        GaussianStream noise(cfg.seed, static_cast<std::uint64_t>(trial));
        x = x0;
        v = v0;
        const bool sample = trial == 0;
        if (sample) record(result.sample, 0.0, x, &v);
        double acc = 0.0;
        std::int64_t count = 0;
        for (std::int64_t m = 0; m < steps; ++m) {
            apply_laplacian(adj, x, lap_x);
            apply_laplacian(adj, v, lap_v);
            for (std::int64_t i = 0; i < n; ++i) {
                const double xi = x[i];
                x[i] = xi + cfg.dt * v[i];
                v[i] += -cfg.dt * (lap_x[i] + lap_v[i]) +
                        noise_scale * noise.gaussian();
            }
            if (m + 1 > burn) {
                acc += window_variance_mean(x);
                ++count;
            }
            if (sample &&
                ((m + 1) % cfg.record_stride == 0 || m + 1 == steps)) {
                record(result.sample, (m + 1) * cfg.dt, x, &v);
            }
        }
        trial_values[trial] = acc / static_cast<double>(count);
    }
    const double mean =
        std::accumulate(trial_values.begin(), trial_values.end(), 0.0) /
        num_trials;
    double var = 0.0;
    for (const double t : trial_values) var += (t - mean) * (t - mean);
    result.empirical = mean;
    result.std_error = num_trials > 1
                           ? std::sqrt(var / (num_trials - 1.0) / num_trials)
                           : 0.0;
    return result;
}

double fit_decay_rate(const SimTrace& trace, double t_lo, double t_hi) {
    std::vector<double> ts, logs;
    for (std::size_t i = 0; i < trace.times.size(); ++i) {
        const double t = trace.times[i];
        if (t < t_lo || t > t_hi) continue;
        const auto& x = trace.states[i];
        const double mean =
            std::accumulate(x.begin(), x.end(), 0.0) / x.size();
        double sq = 0.0;
        for (const double v : x) sq += (v - mean) * (v - mean);
        const double residual = std::sqrt(sq);
        if (residual <= 0.0 || !std::isfinite(residual)) continue;
        ts.push_back(t);
        logs.push_back(std::log(residual));
    }
    if (ts.size() < 2) {
        throw std::invalid_argument(
            "fit_decay_rate: fewer than two usable samples in window");
    }
    const double tm = std::accumulate(ts.begin(), ts.end(), 0.0) / ts.size();
    const double lm =
        std::accumulate(logs.begin(), logs.end(), 0.0) / logs.size();
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        num += (ts[i] - tm) * (logs[i] - lm);
        den += (ts[i] - tm) * (ts[i] - tm);
    }
    return -num / den;
}

double max_mean_drift(const SimTrace& trace) {
    if (trace.states.empty()) return 0.0;
    const auto mean_of = [](const std::vector<double>& x) {
        return std::accumulate(x.begin(), x.end(), 0.0) / x.size();
    };
    const double mean0 = mean_of(trace.states.front());
    double drift = 0.0;
    for (const auto& row : trace.states) {
        drift = std::max(drift, std::abs(mean_of(row) - mean0));
    }
    return drift;
}

std::vector<double> seeded_initial_state(std::int64_t n, std::uint64_t seed,
                                         double mean) {
    GaussianStream stream(seed, 0x1A17);
    std::vector<double> x(n);
    for (auto& v : x) v = 2.0 * stream.uniform() - 1.0;
    const double m = std::accumulate(x.begin(), x.end(), 0.0) / n;
    for (auto& v : x) v += mean - m;
    return x;
}

DelayBracket find_delay_threshold(const Graph& g, double dt, double t_end,
                                  std::uint64_t seed) {
    SimConfig cfg;
    cfg.graph = &g;
    cfg.kind = SimKind::Delayed;
    cfg.dt = dt;
    cfg.t_end = t_end;
    cfg.seed = seed;
    cfg.initial_state = seeded_initial_state(g.num_vertices, seed);
    cfg.record_stride = 1 << 20;  // endpoints only; the flag is what matters

    const auto diverges = [&](std::int64_t d) {
        cfg.tau = static_cast<double>(d) * dt;
        return run_delayed(cfg).diverged;
    };
    std::int64_t lo = 0;  // tau = 0 is stable under the dt <= 0.1/zeta guard
    std::int64_t hi = 1;
    while (!diverges(hi)) {
        lo = hi;
        hi *= 2;
        if (hi > (1 << 24)) {
            throw std::logic_error(
                "find_delay_threshold: no divergence up to 2^24 steps of "
                "delay; t_end too small?");
        }
    }
    while (hi - lo > 1) {
        const auto mid = lo + (hi - lo) / 2;
        (diverges(mid) ? hi : lo) = mid;
    }
    return {static_cast<double>(lo) * dt, static_cast<double>(hi) * dt};
}

}  // namespace selfsim
