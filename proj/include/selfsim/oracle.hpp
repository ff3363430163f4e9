#pragma once

// Brute-force ground truth at small scale: dense symmetric eigensolve of the
// Laplacian and an independent pseudoinverse route to the Kirchhoff index.

#include <vector>

#include "selfsim/graph.hpp"

namespace selfsim {

struct OracleResult {
    GraphSpec source_spec;
    std::vector<double> eigenvalues;  // ascending, eigenvalues[0] snapped to 0
    double lambda_sum = 0.0;          // sum of 1/lambda over nonzero
    double lambda_sq_sum = 0.0;       // sum of 1/lambda^2 over nonzero
    double kirchhoff = 0.0;           // N * lambda_sum
};

/// Full spectrum of L = D - A via a dense symmetric eigensolver. The zero
/// eigenvalue is snapped to exactly 0 when |lambda| < 1e-9; a second
/// eigenvalue below that threshold is an error (graph must be connected).
/// Guarded by budgets.max_dense.
OracleResult eig_all(const Graph& g, const Budgets& budgets = {});

/// Kirchhoff index via the Laplacian pseudoinverse, computed without the
/// eigensolver: N * (trace((L + J/N)^{-1}) - 1) using a Cholesky solve.
/// Asserts agreement with the spectral route N * sum(1/lambda) to 1e-8
/// relative and returns the pseudoinverse value.
double kirchhoff_via_pinv(const Graph& g, const Budgets& budgets = {});

double second_smallest(const Graph& g, const Budgets& budgets = {});
double largest(const Graph& g, const Budgets& budgets = {});

}  // namespace selfsim
