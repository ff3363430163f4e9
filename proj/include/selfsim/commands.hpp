#pragma once

// Implementations of the CLI subcommands, kept in the library so tests can
// drive them directly. Each returns a process exit code: 0 success,
// 1 validation failure. Usage errors throw UsageError (mapped to 2).

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "selfsim/graph.hpp"
#include "selfsim/metrics.hpp"
#include "selfsim/sim.hpp"

namespace selfsim {

struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct GlobalOptions {
    Budgets budgets;
    bool quiet = false;
    std::string out_dir;  // prefixed to relative output paths when set
};

struct GenerateOptions {
    GraphSpec spec;
    std::string out;              // empty = stdout
    std::string format = "edgelist";  // edgelist | json
};
int cmd_generate(const GenerateOptions& opt, const GlobalOptions& global);

struct SpectrumOptions {
    GraphSpec spec;
    bool expand = false;  // one eigenvalue per line instead of (value, mult)
    std::string out;
};
int cmd_spectrum(const SpectrumOptions& opt, const GlobalOptions& global);

struct MetricsOptions {
    GraphSpec spec;
    bool sweep = false;  // iterate spec.generation over [n_lo, n_hi]
    int n_lo = 1;
    int n_hi = 1;
    std::string format = "csv";  // csv | json
    std::string out;
};
int cmd_metrics(const MetricsOptions& opt, const GlobalOptions& global);

struct ValidateOptions {
    bool all = false;    // full cross-check matrix over k in {3,4,5}
    GraphSpec spec;      // used when all == false
    int max_n_per_k = 0; // 0 = as far as the dense budget allows
};
int cmd_validate(const ValidateOptions& opt, const GlobalOptions& global,
                 std::ostream& out);

struct SimulateOptions {
    GraphSpec spec;
    SimKind kind = SimKind::Noiseless;
    double tau = 0.0;
    int trials = 0;    // 0 = default per kind
    double dt = 0.0;   // 0 = auto (safely below the stability bound)
    double t_end = 0.0;  // 0 = auto (several relaxation times)
    double noise_intensity = 1.0;
    std::uint64_t seed = 1;
    int stride = 1;
    std::string out;          // trace CSV
    std::string summary_out;  // summary JSON; empty = stdout
};
int cmd_simulate(const SimulateOptions& opt, const GlobalOptions& global);

struct SweepOptions {
    std::vector<Family> families;
    std::vector<int> k_values;
    int n_lo = 1;
    int n_hi = 8;
    std::vector<std::string> outputs;  // metric column names; empty = all
    std::string format = "csv";        // csv | json
    std::string out;
};
int cmd_sweep(const SweepOptions& opt, const GlobalOptions& global);

/// True when the recursive spectrum matches the dense eigensolver to within
/// `tolerance` (max absolute difference after sorting both). `detail`, when
/// given, receives a short human-readable report either way.
bool spectrum_matches_oracle(const Graph& g, const Budgets& budgets,
                             double tolerance, std::string* detail = nullptr);

// Shared row formatting for metrics/sweep output (schema metrics.v1).
extern const std::vector<std::string> kMetricsColumns;
void write_metrics_csv(std::ostream& os, const std::vector<MetricsReport>& rows,
                       const std::vector<std::string>& columns = {});
std::string metrics_json_string(const std::vector<MetricsReport>& rows,
                                const std::vector<std::string>& columns = {});

/// Shortest round-trip-safe decimal rendering of a double ("%.17g").
std::string format_double(double x);

}  // namespace selfsim
