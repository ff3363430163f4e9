#include "selfsim/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "selfsim/oracle.hpp"
#include "selfsim/spectrum.hpp"

namespace selfsim {

using ordered_json = nlohmann::ordered_json;

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

namespace {

// Counts below 2^53 print as plain integers.
std::string format_count(double x) {
    if (std::abs(x) < 9.007199254740992e15) {
        return std::to_string(static_cast<std::int64_t>(std::llround(x)));
    }
    return format_double(x);
}

std::string resolve_out(const std::string& path, const GlobalOptions& global) {
    if (path.empty()) return path;
    std::filesystem::path p(path);
    if (!global.out_dir.empty() && p.is_relative()) {
        p = std::filesystem::path(global.out_dir) / p;
    }
    if (p.has_parent_path()) {
        std::filesystem::create_directories(p.parent_path());
    }
    return p.string();
}

// Writes to the resolved file, or stdout when the path is empty.
class OutputTarget {
public:
    OutputTarget(const std::string& path, const GlobalOptions& global) {
        const auto resolved = resolve_out(path, global);
        if (resolved.empty()) {
            os_ = &std::cout;
        } else {
            file_.open(resolved, std::ios::binary);
            if (!file_) {
                throw std::runtime_error("cannot open output file " +
                                         resolved);
            }
            os_ = &file_;
        }
    }
    std::ostream& stream() { return *os_; }

private:
    std::ofstream file_;
    std::ostream* os_ = nullptr;
};

}  // namespace

const std::vector<std::string> kMetricsColumns = {
    "family",     "n",         "k",          "N",
    "E",          "epsilon",   "epsilon_asym", "zeta",
    "zeta_asym",  "tau_max",   "H1",         "H2",
    "lambda_sum", "lambda_sq_sum", "kirchhoff", "mean_hitting"};

namespace {

std::string metrics_column_value(const MetricsReport& r,
                                 const std::string& col) {
    if (col == "family") return family_name(r.spec.family);
    if (col == "n") return std::to_string(r.spec.generation);
    if (col == "k") return std::to_string(r.spec.branching);
    if (col == "N") return format_count(r.num_vertices);
    if (col == "E") return format_count(r.num_edges);
    if (col == "epsilon") return format_double(r.epsilon.value);
    if (col == "epsilon_asym") return format_double(r.epsilon_asymptotic);
    if (col == "zeta") return format_double(r.zeta.value);
    if (col == "zeta_asym") return format_double(r.zeta_asymptotic);
    if (col == "tau_max") return format_double(r.tau_max.value);
    if (col == "H1") return format_double(r.h1.value);
    if (col == "H2") return format_double(r.h2.value);
    if (col == "lambda_sum") return format_double(r.lambda_sum.value);
    if (col == "lambda_sq_sum") return format_double(r.lambda_sq_sum.value);
    if (col == "kirchhoff") return format_double(r.kirchhoff.value);
    if (col == "mean_hitting") return format_double(r.mean_hitting.value);
    throw UsageError("unknown metrics column '" + col + "'");
}

std::vector<std::string> select_columns(
    const std::vector<std::string>& requested) {
    if (requested.empty()) return kMetricsColumns;
    for (const auto& col : requested) {
        if (std::find(kMetricsColumns.begin(), kMetricsColumns.end(), col) ==
            kMetricsColumns.end()) {
            throw UsageError("unknown metrics column '" + col + "'");
        }
    }
    // Keys first, then requested metrics in canonical order.
    std::vector<std::string> cols = {"family", "n", "k"};
    for (const auto& col : kMetricsColumns) {
        if (std::find(cols.begin(), cols.end(), col) != cols.end()) continue;
        if (std::find(requested.begin(), requested.end(), col) !=
            requested.end()) {
            cols.push_back(col);
        }
    }
    return cols;
}

ordered_json metrics_row_json(const MetricsReport& r,
                              const std::vector<std::string>& cols) {
    ordered_json row;
    for (const auto& col : cols) {
        if (col == "family") {
            row[col] = family_name(r.spec.family);
        } else if (col == "n") {
            row[col] = r.spec.generation;
        } else if (col == "k") {
            row[col] = r.spec.branching;
        } else {
            row[col] = std::stod(metrics_column_value(r, col));
        }
    }
    row["methods"] = {{"epsilon", method_name(r.epsilon.method)},
                      {"zeta", method_name(r.zeta.method)},
                      {"tau_max", method_name(r.tau_max.method)},
                      {"H1", method_name(r.h1.method)},
                      {"H2", method_name(r.h2.method)},
                      {"lambda_sum", method_name(r.lambda_sum.method)},
                      {"lambda_sq_sum", method_name(r.lambda_sq_sum.method)},
                      {"kirchhoff", method_name(r.kirchhoff.method)},
                      {"mean_hitting", method_name(r.mean_hitting.method)}};
    return row;
}

}  // namespace

void write_metrics_csv(std::ostream& os, const std::vector<MetricsReport>& rows,
                       const std::vector<std::string>& columns) {
    const auto cols = select_columns(columns);
    os << "# schema=selfsim.metrics.v1\n";
    for (std::size_t i = 0; i < cols.size(); ++i) {
        os << (i ? "," : "") << cols[i];
    }
    os << "\n";
    for (const auto& r : rows) {
        for (std::size_t i = 0; i < cols.size(); ++i) {
            os << (i ? "," : "") << metrics_column_value(r, cols[i]);
        }
        os << "\n";
    }
}

std::string metrics_json_string(const std::vector<MetricsReport>& rows,
                                const std::vector<std::string>& columns) {
    const auto cols = select_columns(columns);
    ordered_json doc;
    doc["schema"] = "selfsim.metrics.v1";
    doc["rows"] = ordered_json::array();
    for (const auto& r : rows) doc["rows"].push_back(metrics_row_json(r, cols));
    return doc.dump(2) + "\n";
}

int cmd_generate(const GenerateOptions& opt, const GlobalOptions& global) {
    if (opt.format != "edgelist" && opt.format != "json") {
        throw UsageError("generate: format must be edgelist or json");
    }
    const Graph g = build_graph(opt.spec, global.budgets);
    OutputTarget out(opt.out, global);
    auto& os = out.stream();
    if (opt.format == "edgelist") {
        os << "# selfsim edge list schema=v1 family="
           << family_name(g.spec.family) << " n=" << g.spec.generation
           << " k=" << g.spec.branching << " num_vertices=" << g.num_vertices
           << " num_edges=" << g.edges.size() << "\n";
        for (const auto& [u, v] : g.edges) os << u << " " << v << "\n";
    } else {
        ordered_json doc;
        doc["schema"] = "selfsim.graph.v1";
        doc["spec"] = {{"family", family_name(g.spec.family)},
                       {"n", g.spec.generation},
                       {"k", g.spec.branching}};
        doc["num_vertices"] = g.num_vertices;
        auto edges = ordered_json::array();
        for (const auto& [u, v] : g.edges) {
            edges.push_back(ordered_json::array({u, v}));
        }
        doc["edges"] = std::move(edges);
        os << doc.dump(2) << "\n";
    }
    return 0;
}

int cmd_spectrum(const SpectrumOptions& opt, const GlobalOptions& global) {
    const auto s = spectrum_of(opt.spec, global.budgets);
    OutputTarget out(opt.out, global);
    auto& os = out.stream();
    os << "# selfsim spectrum schema=v1 family=" << family_name(s.family)
       << " n=" << s.generation << " k=" << s.branching
       << (opt.expand ? " expanded=1" : "") << "\n";
    if (opt.expand) {
        for (const double v : s.expand(global.budgets)) {
            os << format_double(v) << "\n";
        }
    } else {
        os << "value,multiplicity\n";
        for (const auto& e : s.entries) {
            os << format_double(e.value) << "," << e.multiplicity << "\n";
        }
    }
    return 0;
}

int cmd_metrics(const MetricsOptions& opt, const GlobalOptions& global) {
    if (opt.format != "csv" && opt.format != "json") {
        throw UsageError("metrics: format must be csv or json");
    }
    std::vector<MetricsReport> rows;
    if (opt.sweep) {
        if (opt.n_lo < 1 || opt.n_lo > opt.n_hi) {
            throw UsageError("metrics: invalid sweep range");
        }
        for (int n = opt.n_lo; n <= opt.n_hi; ++n) {
            GraphSpec spec = opt.spec;
            spec.generation = n;
            rows.push_back(full_report(spec, global.budgets));
        }
    } else {
        rows.push_back(full_report(opt.spec, global.budgets));
    }
    OutputTarget out(opt.out, global);
    if (opt.format == "csv") {
        write_metrics_csv(out.stream(), rows);
    } else {
        out.stream() << metrics_json_string(rows);
    }
    return 0;
}

int cmd_sweep(const SweepOptions& opt, const GlobalOptions& global) {
    if (opt.families.empty()) throw UsageError("sweep: no families given");
    if (opt.k_values.empty()) throw UsageError("sweep: no k values given");
    if (opt.n_lo < 1 || opt.n_lo > opt.n_hi) {
        throw UsageError("sweep: empty or invalid n range");
    }
    if (opt.format != "csv" && opt.format != "json") {
        throw UsageError("sweep: format must be csv or json");
    }
    for (const int k : opt.k_values) {
        if (k < 3) throw UsageError("sweep: k must be >= 3");
    }

    // Deterministic (family, k, n) order regardless of flag order.
    std::vector<Family> families;
    for (const Family f : {Family::Hierarchical, Family::Sierpinski}) {
        if (std::find(opt.families.begin(), opt.families.end(), f) !=
            opt.families.end()) {
            families.push_back(f);
        }
    }
    std::vector<int> ks = opt.k_values;
    std::sort(ks.begin(), ks.end());
    ks.erase(std::unique(ks.begin(), ks.end()), ks.end());

    std::vector<MetricsReport> rows;
    for (const Family f : families) {
        for (const int k : ks) {
            for (int n = opt.n_lo; n <= opt.n_hi; ++n) {
                rows.push_back(
                    full_report({f, n, k}, global.budgets));
            }
        }
    }
    OutputTarget out(opt.out, global);
    if (opt.format == "csv") {
        write_metrics_csv(out.stream(), rows, opt.outputs);
    } else {
        out.stream() << metrics_json_string(rows, opt.outputs);
    }
    return 0;
}

namespace {

double auto_dt(SimKind kind, double zeta) {
    (void)kind;
    return 0.05 / zeta;
}

double auto_t_end(SimKind kind, double epsilon) {
    switch (kind) {
        case SimKind::Noiseless: return std::max(25.0 / epsilon, 10.0);
        case SimKind::Delayed: return std::max(50.0 / epsilon, 240.0);
        case SimKind::FirstOrderNoisy: return std::max(40.0 / epsilon, 20.0);
        case SimKind::SecondOrderNoisy: return std::max(80.0 / epsilon, 40.0);
    }
    return 10.0;
}

}  // namespace

int cmd_simulate(const SimulateOptions& opt, const GlobalOptions& global) {
    const Graph g = build_graph(opt.spec, global.budgets);
    const int n = opt.spec.generation;
    const int k = opt.spec.branching;
    const double zeta = zeta_recursive(opt.spec.family, n, k);
    const double epsilon = epsilon_recursive(opt.spec.family, n, k);

    SimConfig cfg;
    cfg.graph = &g;
    cfg.kind = opt.kind;
    cfg.seed = opt.seed;
    cfg.noise_intensity = opt.noise_intensity;
    cfg.record_stride = opt.stride;
    cfg.dt = opt.dt > 0.0 ? opt.dt : auto_dt(opt.kind, zeta);
    cfg.t_end = opt.t_end > 0.0 ? opt.t_end : auto_t_end(opt.kind, epsilon);
    if (opt.kind == SimKind::Delayed) {
        cfg.tau = opt.tau;
        if (opt.dt <= 0.0 && cfg.tau > 0.0) {
            // Snap the automatic step so the delay is an exact multiple.
            cfg.dt = cfg.tau / std::ceil(cfg.tau / cfg.dt);
        }
    } else if (opt.tau != 0.0) {
        throw UsageError("simulate: --tau requires --kind delayed");
    }
    if (opt.kind == SimKind::Noiseless || opt.kind == SimKind::Delayed) {
        cfg.initial_state = seeded_initial_state(g.num_vertices, opt.seed);
    }

    int trials = opt.trials;
    if (trials <= 0) trials = 200;

    SimTrace trace;
    ordered_json summary;
    summary["schema"] = "selfsim.sim-summary.v1";
    summary["family"] = family_name(opt.spec.family);
    summary["n"] = n;
    summary["k"] = k;
    summary["kind"] = sim_kind_name(opt.kind);
    summary["seed"] = opt.seed;
    summary["dt"] = cfg.dt;
    summary["t_end"] = cfg.t_end;
    summary["tau"] = cfg.tau;
    summary["stride"] = cfg.record_stride;
    summary["noise_intensity"] = cfg.noise_intensity;

    const double sigma_sq = cfg.noise_intensity * cfg.noise_intensity;
    switch (opt.kind) {
        case SimKind::Noiseless: {
            trace = run_noiseless(cfg);
            summary["trials"] = 1;
            summary["analytic"] = nullptr;
            break;
        }
        case SimKind::Delayed: {
            trace = run_delayed(cfg);
            summary["trials"] = 1;
            summary["analytic"] = nullptr;
            summary["tau_max"] = tau_max_of(zeta);
            break;
        }
        case SimKind::FirstOrderNoisy: {
            const auto res = run_first_order_noisy(cfg, trials);
            trace = res.sample;
            summary["trials"] = trials;
            summary["empirical_coherence"] = res.empirical;
            summary["std_error"] = res.std_error;
            summary["analytic"] =
                sigma_sq * (opt.spec.family == Family::Hierarchical
                                ? h1_hierarchical(n, k)
                                : h1_sierpinski(n, k));
            break;
        }
        case SimKind::SecondOrderNoisy: {
            const auto res = run_second_order_noisy(cfg, trials);
            trace = res.sample;
            summary["trials"] = trials;
            summary["empirical_coherence"] = res.empirical;
            summary["std_error"] = res.std_error;
            summary["analytic"] =
                sigma_sq * (opt.spec.family == Family::Hierarchical
                                ? h2_hierarchical(n, k)
                                : h2_sierpinski(n, k));
            break;
        }
    }
    summary["diverged"] = trace.diverged;
    if (trace.diverged) {
        summary["divergence_time"] = trace.divergence_time;
    } else {
        summary["divergence_time"] = nullptr;
    }

    if (!opt.out.empty()) {
        OutputTarget out(opt.out, global);
        auto& os = out.stream();
        os << "# selfsim trace schema=v1 family="
           << family_name(opt.spec.family) << " n=" << n << " k=" << k
           << " kind=" << sim_kind_name(opt.kind) << " seed=" << opt.seed
           << " dt=" << format_double(cfg.dt)
           << " t_end=" << format_double(cfg.t_end)
           << " tau=" << format_double(cfg.tau)
           << " stride=" << cfg.record_stride << "\n";
        os << "time";
        for (std::int64_t i = 0; i < g.num_vertices; ++i) os << ",x_" << i;
        os << "\n";
        for (std::size_t row = 0; row < trace.times.size(); ++row) {
            os << format_double(trace.times[row]);
            for (const double v : trace.states[row]) {
                os << "," << format_double(v);
            }
            os << "\n";
        }
    }
    OutputTarget sum_out(opt.summary_out, global);
    sum_out.stream() << summary.dump(2) << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// validate

namespace {

struct CheckRow {
    std::string name;
    enum class Status { Pass, Fail, Skip } status = Status::Skip;
    std::string detail;
};

CheckRow pass_row(std::string name, std::string detail = "") {
    return {std::move(name), CheckRow::Status::Pass, std::move(detail)};
}
CheckRow fail_row(std::string name, std::string detail) {
    return {std::move(name), CheckRow::Status::Fail, std::move(detail)};
}
CheckRow skip_row(std::string name, std::string detail) {
    return {std::move(name), CheckRow::Status::Skip, std::move(detail)};
}

double rel_diff(double a, double b) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

std::map<int, std::int64_t> expected_histogram(const GraphSpec& spec) {
    const int n = spec.generation;
    const int k = spec.branching;
    std::map<int, std::int64_t> expected;
    if (spec.family == Family::Sierpinski) {
        expected[k - 1] = k;
        if (n >= 2) expected[k] = spec.num_vertices() - k;
        return expected;
    }
    // Degree (n-j)(k-1) occurs (k-1) k^j times; the hubs have j = 0 folded
    // into the leading k count.
    expected[n * (k - 1)] = k;
    for (int j = 1; j <= n - 1; ++j) {
        expected[(n - j) * (k - 1)] =
            (k - 1) * checked_pow(k, j, std::int64_t{1} << 62);
    }
    return expected;
}

}  // namespace

bool spectrum_matches_oracle(const Graph& g, const Budgets& budgets,
                             double tolerance, std::string* detail) {
    const auto oracle = eig_all(g, budgets);
    const auto recursive =
        spectrum_of(g.spec, budgets).expand(budgets);
    if (oracle.eigenvalues.size() != recursive.size()) {
        if (detail != nullptr) {
            *detail = "eigenvalue count mismatch: oracle " +
                      std::to_string(oracle.eigenvalues.size()) +
                      " vs recursion " + std::to_string(recursive.size());
        }
        return false;
    }
    double max_err = 0.0;
    for (std::size_t i = 0; i < recursive.size(); ++i) {
        max_err =
            std::max(max_err, std::abs(oracle.eigenvalues[i] - recursive[i]));
    }
    if (detail != nullptr) {
        std::ostringstream os;
        os << "max |oracle - recursive| = " << max_err;
        *detail = os.str();
    }
    return max_err <= tolerance;
}

namespace {

std::vector<CheckRow> run_spec_checks(const GraphSpec& spec,
                                      const Budgets& budgets) {
    std::vector<CheckRow> rows;
    const auto tag = " [" + spec.to_string() + "]";
    const RouteTolerances tol;

    Graph g;
    try {
        g = build_graph(spec, budgets);
    } catch (const BudgetError& e) {
        rows.push_back(skip_row("construction" + tag, e.what()));
        return rows;
    }

    {
        const bool order_ok = g.num_vertices == spec.num_vertices();
        const bool size_ok =
            static_cast<std::int64_t>(g.edges.size()) == spec.num_edges();
        std::int64_t degree_sum = 0;
        for (const auto d : g.degrees) degree_sum += d;
        const bool handshake_ok =
            degree_sum == 2 * static_cast<std::int64_t>(g.edges.size());
        if (order_ok && size_ok && handshake_ok) {
            rows.push_back(pass_row(
                "order/size" + tag,
                "N=" + std::to_string(g.num_vertices) +
                    " E=" + std::to_string(g.edges.size())));
        } else {
            rows.push_back(fail_row("order/size" + tag,
                                    "vertex/edge counts off closed form"));
        }
    }
    rows.push_back(is_connected(g)
                       ? pass_row("connected" + tag)
                       : fail_row("connected" + tag, "BFS from 0 incomplete"));
    {
        const auto hist = degree_histogram(g);
        const auto expected = expected_histogram(spec);
        rows.push_back(hist == expected
                           ? pass_row("degree-histogram" + tag)
                           : fail_row("degree-histogram" + tag,
                                      "histogram differs from closed form"));
    }
    if (spec.family == Family::Sierpinski && g.num_vertices <= 256) {
        // Brute-force the tuple adjacency predicate over all pairs.
        std::vector<Edge> expected;
        for (std::int32_t u = 0; u < g.num_vertices; ++u) {
            const auto tu =
                sierpinski_tuple(u, spec.generation, spec.branching);
            for (std::int32_t v = u + 1; v < g.num_vertices; ++v) {
                const auto tv =
                    sierpinski_tuple(v, spec.generation, spec.branching);
                if (sierpinski_adjacent(tu, tv)) expected.emplace_back(u, v);
            }
        }
        rows.push_back(expected == g.edges
                           ? pass_row("adjacency-predicate" + tag)
                           : fail_row("adjacency-predicate" + tag,
                                      "edge set differs from predicate"));
    }

    if (spec.generation > budgets.max_spectrum_generation) {
        rows.push_back(skip_row("spectrum checks" + tag,
                                "beyond spectrum budget"));
        return rows;
    }
    const auto spectrum = spectrum_of(spec, budgets);
    {
        const bool count_ok =
            spectrum.total_multiplicity() == g.num_vertices;
        const double trace_rel =
            rel_diff(spectrum.trace(), 2.0 * g.edges.size());
        rows.push_back(count_ok && trace_rel <= 1e-12
                           ? pass_row("spectrum count/trace" + tag)
                           : fail_row("spectrum count/trace" + tag,
                                      "multiplicity or trace identity broken"));
    }

    const int n = spec.generation;
    const int k = spec.branching;
    const bool dense_ok = g.num_vertices <= budgets.max_dense;
    if (dense_ok) {
        std::string detail;
        const bool ok = spectrum_matches_oracle(g, budgets, 1e-8, &detail);
        rows.push_back(ok ? pass_row("spectrum vs oracle" + tag, detail)
                          : fail_row("spectrum vs oracle" + tag, detail));
    } else {
        rows.push_back(
            skip_row("spectrum vs oracle" + tag, "beyond dense budget"));
    }

    {
        const double eps = epsilon_recursive(spec.family, n, k);
        const double zeta = zeta_recursive(spec.family, n, k);
        const bool ok = rel_diff(eps, spectrum.min_nonzero()) <= tol.analytic &&
                        rel_diff(zeta, spectrum.max_value()) <= tol.analytic;
        rows.push_back(ok ? pass_row("extreme eigenvalues" + tag)
                          : fail_row("extreme eigenvalues" + tag,
                                     "recursions differ from spectrum"));
    }
    {
        const bool hier = spec.family == Family::Hierarchical;
        const double sum_closed = hier ? lambda_sum_closed_hierarchical(n, k)
                                       : lambda_sum_closed_sierpinski(n, k);
        const double sum_rec = hier ? lambda_sum_recursive_hierarchical(n, k)
                                    : lambda_sum_recursive_sierpinski(n, k);
        const double sq_closed = hier
                                     ? lambda_sq_sum_closed_hierarchical(n, k)
                                     : lambda_sq_sum_closed_sierpinski(n, k);
        const double sq_rec = hier
                                  ? lambda_sq_sum_recursive_hierarchical(n, k)
                                  : lambda_sq_sum_recursive_sierpinski(n, k);
        std::ostringstream os;
        os << std::setprecision(3) << "closed/recursive rel "
           << rel_diff(sum_closed, sum_rec) << "/" << rel_diff(sq_closed, sq_rec)
           << ", vs spectrum " << rel_diff(sum_closed, spectrum.reciprocal_sum())
           << "/" << rel_diff(sq_closed, spectrum.reciprocal_square_sum());
        const bool ok =
            rel_diff(sum_closed, sum_rec) <= 1e-9 &&
            rel_diff(sq_closed, sq_rec) <= 1e-9 &&
            rel_diff(sum_closed, spectrum.reciprocal_sum()) <= 1e-9 &&
            rel_diff(sq_closed, spectrum.reciprocal_square_sum()) <= 1e-9;
        rows.push_back(ok ? pass_row("coherence routes" + tag, os.str())
                          : fail_row("coherence routes" + tag, os.str()));

        if (dense_ok) {
            const auto oracle = eig_all(g, budgets);
            const bool oracle_ok =
                rel_diff(sum_closed, oracle.lambda_sum) <= tol.oracle &&
                rel_diff(sq_closed, oracle.lambda_sq_sum) <= tol.oracle;
            rows.push_back(oracle_ok
                               ? pass_row("coherence vs oracle" + tag)
                               : fail_row("coherence vs oracle" + tag,
                                          "dense sums beyond tolerance"));
            const double pinv = kirchhoff_via_pinv(g, budgets);
            const double analytic = g.num_vertices * sum_closed;
            rows.push_back(
                rel_diff(pinv, analytic) <= 1e-8
                    ? pass_row("kirchhoff pinv" + tag)
                    : fail_row("kirchhoff pinv" + tag,
                               "pseudoinverse route differs from N*sum"));
        } else {
            rows.push_back(skip_row("coherence vs oracle" + tag,
                                    "beyond dense budget"));
            rows.push_back(
                skip_row("kirchhoff pinv" + tag, "beyond dense budget"));
        }
    }
    return rows;
}

std::vector<CheckRow> run_sim_smoke_checks(const Budgets& budgets) {
    std::vector<CheckRow> rows;

    const Graph hier23 = build_hierarchical({Family::Hierarchical, 2, 3},
                                            budgets);
    const Graph sier23 = build_sierpinski({Family::Sierpinski, 2, 3}, budgets);
    const double zeta_h = zeta_recursive(Family::Hierarchical, 2, 3);
    const double zeta_s = zeta_recursive(Family::Sierpinski, 2, 3);

    {
        SimConfig cfg;
        cfg.graph = &hier23;
        cfg.kind = SimKind::Noiseless;
        cfg.dt = 0.05 / zeta_h;
        cfg.t_end = 60.0;
        cfg.seed = 7;
        cfg.initial_state = seeded_initial_state(9, 7, 2.0);
        const auto trace = run_noiseless(cfg);
        double residual = 0.0;
        for (const double v : trace.states.back()) {
            residual = std::max(residual, std::abs(v - 2.0));
        }
        const bool ok = max_mean_drift(trace) <= 1e-9 && residual < 1e-6 &&
                        !trace.diverged;
        rows.push_back(ok ? pass_row("sim noiseless convergence [hier(2,3)]")
                          : fail_row("sim noiseless convergence [hier(2,3)]",
                                     "mean drift or residual too large"));
    }
    {
        SimConfig cfg;
        cfg.graph = &sier23;
        cfg.kind = SimKind::Noiseless;
        cfg.dt = 0.01;
        cfg.t_end = 30.0;
        cfg.seed = 11;
        cfg.initial_state = seeded_initial_state(9, 11);
        const auto base = run_noiseless(cfg);
        cfg.kind = SimKind::Delayed;
        cfg.tau = 0.0;
        const auto delayed = run_delayed(cfg);
        const bool ok = base.states == delayed.states;
        rows.push_back(ok ? pass_row("sim tau=0 equals noiseless [sier(2,3)]")
                          : fail_row("sim tau=0 equals noiseless [sier(2,3)]",
                                     "trajectories differ"));
    }
    {
        const double tau_max = tau_max_of(zeta_s);
        SimConfig cfg;
        cfg.graph = &sier23;
        cfg.kind = SimKind::Delayed;
        cfg.seed = 13;
        cfg.initial_state = seeded_initial_state(9, 13);
        cfg.record_stride = 1 << 20;

        cfg.tau = 0.8 * tau_max;
        cfg.dt = cfg.tau / std::ceil(cfg.tau / 0.01);
        cfg.t_end = 240.0;
        const bool stable_ok = !run_delayed(cfg).diverged;

        cfg.tau = 1.2 * tau_max;
        cfg.dt = cfg.tau / std::ceil(cfg.tau / 0.01);
        const bool unstable_ok = run_delayed(cfg).diverged;
        rows.push_back(stable_ok && unstable_ok
                           ? pass_row("sim delay boundary flags [sier(2,3)]")
                           : fail_row("sim delay boundary flags [sier(2,3)]",
                                      "stability flags disagree with margin"));
    }
    {
        const Graph k3 = build_hierarchical({Family::Hierarchical, 1, 3},
                                            budgets);
        SimConfig cfg;
        cfg.graph = &k3;
        cfg.kind = SimKind::FirstOrderNoisy;
        cfg.dt = 0.01;
        cfg.t_end = 60.0;
        cfg.seed = 17;
        cfg.record_stride = 1 << 20;
        const auto res = run_first_order_noisy(cfg, 64);
        const double analytic = h1_hierarchical(1, 3);
        const bool ok =
            std::abs(res.empirical - analytic) <= 6.0 * res.std_error;
        std::ostringstream os;
        os << "empirical " << res.empirical << " vs " << analytic << " +- "
           << res.std_error;
        rows.push_back(ok ? pass_row("sim first-order coherence [K3]", os.str())
                          : fail_row("sim first-order coherence [K3]",
                                     os.str()));
    }
    {
        const Graph k3 = build_hierarchical({Family::Hierarchical, 1, 3},
                                            budgets);
        SimConfig cfg;
        cfg.graph = &k3;
        cfg.kind = SimKind::SecondOrderNoisy;
        cfg.dt = 0.01;
        cfg.t_end = 80.0;
        cfg.seed = 19;
        cfg.record_stride = 1 << 20;
        const auto res = run_second_order_noisy(cfg, 64);
        const double analytic = h2_hierarchical(1, 3);
        const bool ok =
            std::abs(res.empirical - analytic) <= 6.0 * res.std_error;
        std::ostringstream os;
        os << "empirical " << res.empirical << " vs " << analytic << " +- "
           << res.std_error;
        rows.push_back(ok
                           ? pass_row("sim second-order coherence [K3]",
                                      os.str())
                           : fail_row("sim second-order coherence [K3]",
                                      os.str()));
    }
    return rows;
}

}  // namespace

int cmd_validate(const ValidateOptions& opt, const GlobalOptions& global,
                 std::ostream& out) {
    std::vector<CheckRow> rows;
    try {
        if (opt.all) {
            for (const Family f : {Family::Hierarchical, Family::Sierpinski}) {
                for (const int k : {3, 4, 5}) {
                    int max_n = opt.max_n_per_k > 0 ? opt.max_n_per_k : 8;
                    max_n = std::min(max_n,
                                     global.budgets.max_spectrum_generation);
                    for (int n = 1; n <= max_n; ++n) {
                        GraphSpec spec{f, n, k};
                        if (spec.num_vertices() > global.budgets.max_vertices) {
                            break;
                        }
                        const auto spec_rows =
                            run_spec_checks(spec, global.budgets);
                        rows.insert(rows.end(), spec_rows.begin(),
                                    spec_rows.end());
                    }
                }
            }
            const auto sim_rows = run_sim_smoke_checks(global.budgets);
            rows.insert(rows.end(), sim_rows.begin(), sim_rows.end());
        } else {
            rows = run_spec_checks(opt.spec, global.budgets);
        }
    } catch (const BudgetError& e) {
        out << "error: " << e.what() << "\n";
        out << "error: no checks ran\n";
        return 1;
    }

    int passed = 0, failed = 0, skipped = 0;
    for (const auto& row : rows) {
        const char* status = row.status == CheckRow::Status::Pass ? "PASS"
                             : row.status == CheckRow::Status::Fail ? "FAIL"
                                                                    : "SKIP";
        out << std::left << std::setw(52) << row.name << " " << status;
        if (!row.detail.empty() && !global.quiet) out << "  " << row.detail;
        out << "\n";
        if (row.status == CheckRow::Status::Pass) ++passed;
        if (row.status == CheckRow::Status::Fail) ++failed;
        if (row.status == CheckRow::Status::Skip) ++skipped;
    }
    out << passed << " passed, " << failed << " failed, " << skipped
        << " skipped\n";
    if (passed + failed == 0) {
        out << "error: no checks ran\n";
        return 1;
    }
    return failed == 0 ? 0 : 1;
}

}  // namespace selfsim
