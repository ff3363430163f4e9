#pragma once

// Consensus performance metrics: convergence speed (second smallest Laplacian
// eigenvalue), delay robustness (largest eigenvalue and the delay margin
// pi/(2*zeta)), and first/second-order network coherence (sums of reciprocal
// and squared-reciprocal nonzero eigenvalues).
//
// Every coherence quantity is available through three mutually checking
// routes: a scalar recursion over generations, a closed form, and direct
// summation over the recursive spectrum.

#include <cstdint>

#include "selfsim/graph.hpp"

namespace selfsim {

enum class Method { Recursion, ClosedForm, SpectrumSum, Oracle };

std::string method_name(Method m);

/// Thrown when two routes that must agree do not (implementation bug).
struct RouteDisagreement : std::logic_error {
    using std::logic_error::logic_error;
};

struct RouteTolerances {
    double analytic = 1e-10;  // closed form vs scalar recursion, relative
    double spectrum = 1e-8;   // analytic vs spectrum summation, relative
    double oracle = 1e-7;     // analytic vs dense eigensolver, relative
};

/// Second smallest eigenvalue via the exact scalar recursion from eps_1 = k:
/// lower-branch child map applied n-1 times.
double epsilon_recursive(Family family, int n, int k);

/// The paper-style large-n approximations: k^{2-n} (hierarchical) and
/// k/(k+2)^{n-1} (Sierpinski).
double epsilon_asymptotic(Family family, int n, int k);

/// Largest eigenvalue, exact route: upper-branch recursion from zeta_1 = k
/// for hierarchical graphs; exactly k (n=1) or k+2 (n>=2) for Sierpinski.
double zeta_recursive(Family family, int n, int k);

/// Approximate largest eigenvalue: (k-1)n for hierarchical graphs; for
/// Sierpinski the exact constant is returned (the approximation is exact).
double zeta_asymptotic(Family family, int n, int k);

/// Largest uniform communication delay preserving consensus: pi / (2 zeta).
double tau_max_of(double zeta);

// Sums of reciprocals of nonzero eigenvalues (first-order coherence * 2N).
double lambda_sum_recursive_hierarchical(int n, int k);
double lambda_sum_closed_hierarchical(int n, int k);
double lambda_sum_recursive_sierpinski(int n, int k);
double lambda_sum_closed_sierpinski(int n, int k);

// Sums of squared reciprocals (second-order coherence * 2N).
double lambda_sq_sum_recursive_hierarchical(int n, int k);
double lambda_sq_sum_closed_hierarchical(int n, int k);
double lambda_sq_sum_recursive_sierpinski(int n, int k);
double lambda_sq_sum_closed_sierpinski(int n, int k);

/// The hierarchical squared-reciprocal recursion exactly as printed in its
/// source, which disagrees with its own derivation (wrong middle factor and
/// a dropped emitted-eigenvalue contribution). Kept only so tests can pin
/// down which variant the oracles support.
double lambda_sq_sum_recursive_hierarchical_as_printed(int n, int k);

// First/second-order coherence H1 = Lambda/(2N), H2 = Gamma/(2N). Each
// evaluates the closed form and asserts the scalar recursion agrees to the
// analytic tolerance; throws RouteDisagreement otherwise.
double h1_hierarchical(int n, int k);
double h2_hierarchical(int n, int k);
double h1_sierpinski(int n, int k);
double h2_sierpinski(int n, int k);

/// (Kirchhoff index, mean hitting time) = (N * Lambda, 2 E * Lambda / (N-1)).
struct KirchhoffHitting {
    double kirchhoff = 0.0;
    double mean_hitting = 0.0;
};
KirchhoffHitting kirchhoff_and_hitting(double lambda_sum, int n, int k);

struct MetricValue {
    double value = 0.0;
    Method method = Method::ClosedForm;
};

struct MetricsReport {
    GraphSpec spec;
    // Doubles, not integers: metrics need no graph, so n may exceed what an
    // int64 vertex count can hold (exact for k^n < 2^53).
    double num_vertices = 0.0;
    double num_edges = 0.0;
    MetricValue epsilon;
    double epsilon_asymptotic = 0.0;
    MetricValue zeta;
    double zeta_asymptotic = 0.0;
    MetricValue tau_max;
    MetricValue h1;
    MetricValue h2;
    MetricValue lambda_sum;
    MetricValue lambda_sq_sum;
    MetricValue kirchhoff;
    MetricValue mean_hitting;
};

/// Populates every metric via the cheapest exact route and cross-checks all
/// routes that fit the budgets (recursion vs closed form always; spectrum
/// summation when n is within the spectrum budget). Throws RouteDisagreement
/// on any violation.
MetricsReport full_report(const GraphSpec& spec, const Budgets& budgets = {},
                          const RouteTolerances& tol = {});

}  // namespace selfsim
