// Command-line front end: generate / spectrum / metrics / validate /
// simulate / sweep. Exit codes: 0 success, 1 validation failure, 2 usage
// error.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "selfsim/commands.hpp"

namespace {

using namespace selfsim;

struct FamilyFlag {
    std::string value = "hier";
    Family parse() const { return family_from_name(value); }
};

void add_spec_options(CLI::App* cmd, FamilyFlag& family, GraphSpec& spec) {
    cmd->add_option("--family", family.value, "Graph family: hier or sier")
        ->required();
    cmd->add_option("-n,--generation", spec.generation, "Generation n >= 1")
        ->required();
    cmd->add_option("-k,--branching", spec.branching,
                    "Branching / clique size k >= 3")
        ->required();
}

std::pair<int, int> parse_range(const std::string& text) {
    const auto sep = text.find("..");
    if (sep == std::string::npos) {
        const int single = std::stoi(text);
        return {single, single};
    }
    return {std::stoi(text.substr(0, sep)), std::stoi(text.substr(sep + 2))};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "selfsim: spectra and consensus metrics of hierarchical and "
        "Sierpinski graphs"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Read options from a config file");

    GlobalOptions global;
    app.add_option("--budget-vertices", global.budgets.max_vertices,
                   "Max vertices for graph construction");
    app.add_option("--budget-dense", global.budgets.max_dense,
                   "Max vertices for dense/oracle computations");
    app.add_option("--budget-spectrum",
                   global.budgets.max_spectrum_generation,
                   "Max generation for the spectrum recursion");
    app.add_flag("--quiet", global.quiet, "Suppress informational detail");
    app.add_option("--out-dir", global.out_dir,
                   "Directory prefixed to relative output paths");

    FamilyFlag gen_family;
    GenerateOptions gen;
    auto* cmd_gen = app.add_subcommand("generate", "Write a graph to disk");
    add_spec_options(cmd_gen, gen_family, gen.spec);
    cmd_gen->add_option("--out", gen.out, "Output file (default stdout)");
    cmd_gen->add_option("--format", gen.format, "edgelist or json");

    FamilyFlag spec_family;
    SpectrumOptions spectrum;
    auto* cmd_spec = app.add_subcommand(
        "spectrum", "Compute the full Laplacian spectrum by recursion");
    add_spec_options(cmd_spec, spec_family, spectrum.spec);
    cmd_spec->add_flag("--expand", spectrum.expand,
                       "One eigenvalue per line instead of (value, mult)");
    cmd_spec->add_option("--out", spectrum.out, "Output file (default stdout)");

    FamilyFlag met_family;
    MetricsOptions metrics;
    std::string metrics_sweep;
    auto* cmd_met = app.add_subcommand(
        "metrics", "Consensus metrics via recursions and closed forms");
    add_spec_options(cmd_met, met_family, metrics.spec);
    cmd_met->add_option("--sweep", metrics_sweep,
                        "Generation range n1..n2 (overrides -n)");
    cmd_met->add_option("--format", metrics.format, "csv or json");
    cmd_met->add_option("--out", metrics.out, "Output file (default stdout)");

    FamilyFlag val_family;
    ValidateOptions validate;
    auto* cmd_val = app.add_subcommand(
        "validate", "Cross-check recursions against brute-force oracles");
    auto* val_all =
        cmd_val->add_flag("--all", validate.all,
                          "Run the full matrix over k in {3,4,5}");
    cmd_val->add_option("--family", val_family.value, "Graph family")
        ->excludes(val_all);
    cmd_val->add_option("-n,--generation", validate.spec.generation,
                        "Generation n");
    cmd_val->add_option("-k,--branching", validate.spec.branching,
                        "Branching k");
    cmd_val->add_option("--max-n", validate.max_n_per_k,
                        "Cap generation in --all mode");

    FamilyFlag sim_family;
    SimulateOptions simulate;
    std::string kind_name = "noiseless";
    auto* cmd_sim = app.add_subcommand(
        "simulate", "Integrate a consensus system on a constructed graph");
    add_spec_options(cmd_sim, sim_family, simulate.spec);
    cmd_sim->add_option("--kind", kind_name,
                        "noiseless | delayed | noisy1 | noisy2");
    cmd_sim->add_option("--tau", simulate.tau, "Uniform delay (delayed only)");
    cmd_sim->add_option("--trials", simulate.trials,
                        "Monte-Carlo trials (noisy kinds)");
    cmd_sim->add_option("--dt", simulate.dt, "Step size (default 0.05/zeta)");
    cmd_sim->add_option("--t-end", simulate.t_end, "End time");
    cmd_sim->add_option("--noise-intensity", simulate.noise_intensity,
                        "Noise multiplier (default 1)");
    cmd_sim->add_option("--seed", simulate.seed, "RNG seed");
    cmd_sim->add_option("--stride", simulate.stride,
                        "Record every Nth step in the trace");
    cmd_sim->add_option("--out", simulate.out, "Trace CSV file");
    cmd_sim->add_option("--summary", simulate.summary_out,
                        "Summary JSON file (default stdout)");

    SweepOptions sweep;
    std::vector<std::string> sweep_families{"hier", "sier"};
    std::string sweep_range = "1..8";
    auto* cmd_swp = app.add_subcommand(
        "sweep", "Metrics table over families x k x n (figure data)");
    cmd_swp->add_option("--families", sweep_families, "hier,sier")
        ->delimiter(',');
    cmd_swp
        ->add_option("--k-values", sweep.k_values, "Branching values, e.g. 3,4,5")
        ->delimiter(',')
        ->required();
    cmd_swp->add_option("--n-range", sweep_range, "Generation range n1..n2");
    cmd_swp->add_option("--outputs", sweep.outputs,
                        "Metric columns to emit (default all)")
        ->delimiter(',');
    cmd_swp->add_option("--format", sweep.format, "csv or json");
    cmd_swp->add_option("--out", sweep.out, "Output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (cmd_gen->parsed()) {
            gen.spec.family = gen_family.parse();
            return cmd_generate(gen, global);
        }
        if (cmd_spec->parsed()) {
            spectrum.spec.family = spec_family.parse();
            return cmd_spectrum(spectrum, global);
        }
        if (cmd_met->parsed()) {
            metrics.spec.family = met_family.parse();
            if (!metrics_sweep.empty()) {
                metrics.sweep = true;
                std::tie(metrics.n_lo, metrics.n_hi) =
                    parse_range(metrics_sweep);
            }
            return cmd_metrics(metrics, global);
        }
        if (cmd_val->parsed()) {
            if (!validate.all) validate.spec.family = val_family.parse();
            return cmd_validate(validate, global, std::cout);
        }
        if (cmd_sim->parsed()) {
            simulate.spec.family = sim_family.parse();
            simulate.kind = sim_kind_from_name(kind_name);
            return cmd_simulate(simulate, global);
        }
        if (cmd_swp->parsed()) {
            sweep.families.clear();
            for (const auto& name : sweep_families) {
                sweep.families.push_back(family_from_name(name));
            }
            std::tie(sweep.n_lo, sweep.n_hi) = parse_range(sweep_range);
            return cmd_sweep(sweep, global);
        }
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const BudgetError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
