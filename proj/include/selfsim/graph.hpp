#pragma once

// Construction of the two self-similar graph families and basic structural
// queries (degree histogram, BFS diameter, dense Laplacian).
//
// Both families have k^n vertices and (k^{n+1}-k)/2 edges at generation n.
// Construction is deterministic: a given spec always yields the same
// canonically sorted edge list.

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace selfsim {

enum class Family { Hierarchical, Sierpinski };

std::string family_name(Family f);        // "hier" / "sier"
Family family_from_name(const std::string& name);

/// Thrown when a requested computation exceeds a configured budget.
struct BudgetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Resource limits. Construction is linear in edges; the dense budget bounds
/// O(N^2) storage and O(N^3) eigensolves; the spectrum budget bounds the
/// ~2^n distinct entries kept by the eigenvalue recursion.
struct Budgets {
    std::int64_t max_vertices = 2'000'000;
    std::int64_t max_dense = 3000;
    int max_spectrum_generation = 12;
};

/// Which family to build, at which generation n >= 1, with branching k >= 3.
struct GraphSpec {
    Family family = Family::Hierarchical;
    int generation = 1;  // n
    int branching = 3;   // k

    std::int64_t num_vertices() const;  // k^n
    std::int64_t num_edges() const;     // (k^{n+1} - k) / 2
    std::string to_string() const;      // e.g. "hier(n=2,k=3)"
};

/// Throws std::invalid_argument for k < 3 or n < 1, BudgetError when k^n
/// exceeds budgets.max_vertices.
void validate_spec(const GraphSpec& spec, const Budgets& budgets = {});

using Edge = std::pair<std::int32_t, std::int32_t>;

/// Immutable vertex-labeled adjacency structure. Edges are stored as
/// (min,max) pairs in lexicographic order; no self-loops or duplicates.
struct Graph {
    GraphSpec spec;
    std::int64_t num_vertices = 0;
    std::vector<Edge> edges;
    std::vector<std::int32_t> degrees;

    /// Vertex label: construction-order index for hierarchical graphs, the
    /// n-tuple over {1..k} (most significant digit first) for Sierpinski
    /// graphs. Derived from the index, so no per-vertex storage is needed.
    std::string label(std::int64_t v) const;
};

/// Iterative expansion: start from the complete graph on k vertices; each
/// generation attaches a (k-1)-clique to every existing vertex. Vertices are
/// numbered generation by generation, so 0..k-1 are the hubs.
Graph build_hierarchical(const GraphSpec& spec, const Budgets& budgets = {});

/// Nested construction: generation n consists of k translated copies of
/// generation n-1 plus one bridge edge per copy pair. Vertex index is the
/// base-k encoding of its tuple label. Equivalent to the tuple adjacency
/// predicate `sierpinski_adjacent`.
Graph build_sierpinski(const GraphSpec& spec, const Budgets& budgets = {});

Graph build_graph(const GraphSpec& spec, const Budgets& budgets = {});

/// Tuple adjacency predicate for Sierpinski graphs: p and q are adjacent iff
/// there is a position h with p_i = q_i for i < h, p_h != q_h, and
/// p_i = q_h, q_i = p_h for all i > h. Tuples are 1-based digit vectors.
bool sierpinski_adjacent(const std::vector<int>& p, const std::vector<int>& q);

/// Digits (1..k) of a Sierpinski vertex index, most significant first.
std::vector<int> sierpinski_tuple(std::int64_t index, int n, int k);

std::map<int, std::int64_t> degree_histogram(const Graph& g);

bool is_connected(const Graph& g);

/// Exact diameter via all-pairs BFS. Oracle-scale only: guarded by the
/// dense budget. Throws std::logic_error if the graph is disconnected.
int bfs_diameter(const Graph& g, const Budgets& budgets = {});

/// Dense Laplacian L = D - A. Guarded by budgets.max_dense.
Eigen::MatrixXd laplacian_dense(const Graph& g, const Budgets& budgets = {});

/// k^e with overflow/budget guard; throws BudgetError beyond `cap`.
std::int64_t checked_pow(int base, int exp, std::int64_t cap);

}  // namespace selfsim
