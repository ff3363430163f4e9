#include "selfsim/graph.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <sstream>

namespace selfsim {

std::string family_name(Family f) {
    return f == Family::Hierarchical ? "hier" : "sier";
}

Family family_from_name(const std::string& name) {
    if (name == "hier" || name == "hierarchical") return Family::Hierarchical;
    if (name == "sier" || name == "sierpinski") return Family::Sierpinski;
    throw std::invalid_argument("unknown family '" + name +
                                "' (expected hier or sier)");
}

std::int64_t checked_pow(int base, int exp, std::int64_t cap) {
    std::int64_t r = 1;
    for (int i = 0; i < exp; ++i) {
        if (r > cap / base) {
            throw BudgetError("k^n exceeds budget of " + std::to_string(cap) +
                              " (k=" + std::to_string(base) +
                              ", n=" + std::to_string(exp) + ")");
        }
        r *= base;
    }
    return r;
}

std::int64_t GraphSpec::num_vertices() const {
    return checked_pow(branching, generation,
                       std::numeric_limits<std::int64_t>::max() / branching);
}

std::int64_t GraphSpec::num_edges() const {
    const std::int64_t n = num_vertices();
    return branching * (n - 1) / 2;  // (k^{n+1} - k) / 2
}

std::string GraphSpec::to_string() const {
    std::ostringstream os;
    os << family_name(family) << "(n=" << generation << ",k=" << branching
       << ")";
    return os.str();
}

void validate_spec(const GraphSpec& spec, const Budgets& budgets) {
    if (spec.branching < 3) {
        throw std::invalid_argument("branching k must be >= 3, got " +
                                    std::to_string(spec.branching));
    }
    if (spec.generation < 1) {
        throw std::invalid_argument("generation n must be >= 1, got " +
                                    std::to_string(spec.generation));
    }
    checked_pow(spec.branching, spec.generation, budgets.max_vertices);
}

std::vector<int> sierpinski_tuple(std::int64_t index, int n, int k) {
    std::vector<int> digits(n);
    for (int i = n - 1; i >= 0; --i) {
        digits[i] = static_cast<int>(index % k) + 1;
        index /= k;
    }
    return digits;
}

std::string Graph::label(std::int64_t v) const {
    if (spec.family == Family::Hierarchical) return std::to_string(v);
    const auto digits =
        sierpinski_tuple(v, spec.generation, spec.branching);
    std::string out;
    for (std::size_t i = 0; i < digits.size(); ++i) {
        if (spec.branching > 9 && i > 0) out += '.';
        out += std::to_string(digits[i]);
    }
    return out;
}

namespace {

void finalize(Graph& g) {
    for (auto& [u, v] : g.edges) {
        if (u > v) std::swap(u, v);
    }
    std::sort(g.edges.begin(), g.edges.end());
    g.degrees.assign(g.num_vertices, 0);
    for (const auto& [u, v] : g.edges) {
        ++g.degrees[u];
        ++g.degrees[v];
    }
}

}  // namespace

Graph build_hierarchical(const GraphSpec& spec, const Budgets& budgets) {
    if (spec.family != Family::Hierarchical) {
        throw std::invalid_argument("spec is not a hierarchical graph");
    }
    validate_spec(spec, budgets);
    const int k = spec.branching;
    const int n = spec.generation;

    Graph g;
    g.spec = spec;
    g.num_vertices = spec.num_vertices();
    g.edges.reserve(static_cast<std::size_t>(spec.num_edges()));

    for (std::int32_t a = 0; a < k; ++a) {
        for (std::int32_t b = a + 1; b < k; ++b) g.edges.emplace_back(a, b);
    }
    std::int64_t prev = k;  // vertices after the previous generation
    for (int gen = 2; gen <= n; ++gen) {
        for (std::int64_t v = 0; v < prev; ++v) {
            const std::int64_t base = prev + v * (k - 1);
            for (int a = 0; a < k - 1; ++a) {
                const auto va = static_cast<std::int32_t>(base + a);
                g.edges.emplace_back(static_cast<std::int32_t>(v), va);
                for (int b = a + 1; b < k - 1; ++b) {
                    g.edges.emplace_back(
                        va, static_cast<std::int32_t>(base + b));
                }
            }
        }
        prev *= k;
    }
    finalize(g);
    return g;
}

bool sierpinski_adjacent(const std::vector<int>& p, const std::vector<int>& q) {
    const std::size_t n = p.size();
    std::size_t h = 0;
    while (h < n && p[h] == q[h]) ++h;
    if (h == n) return false;  // identical tuples
    for (std::size_t i = h + 1; i < n; ++i) {
        if (p[i] != q[h] || q[i] != p[h]) return false;
    }
    return true;
}

Graph build_sierpinski(const GraphSpec& spec, const Budgets& budgets) {
    if (spec.family != Family::Sierpinski) {
        throw std::invalid_argument("spec is not a Sierpinski graph");
    }
    validate_spec(spec, budgets);
    const int k = spec.branching;
    const int n = spec.generation;

    Graph g;
    g.spec = spec;
    g.num_vertices = spec.num_vertices();

    // Generation 1: complete graph; the tuple (u1) has index u1 - 1.
    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(spec.num_edges()));
    for (std::int32_t a = 0; a < k; ++a) {
        for (std::int32_t b = a + 1; b < k; ++b) edges.emplace_back(a, b);
    }

    std::int64_t block = k;  // vertices per copy at the current generation
    for (int gen = 2; gen <= n; ++gen) {
        const std::size_t old_count = edges.size();
        // k translated copies: copy c holds all tuples with first digit c+1.
        for (int c = 1; c < k; ++c) {
            const std::int64_t off = static_cast<std::int64_t>(c) * block;
            for (std::size_t e = 0; e < old_count; ++e) {
                edges.emplace_back(
                    static_cast<std::int32_t>(edges[e].first + off),
                    static_cast<std::int32_t>(edges[e].second + off));
            }
        }
        // One bridge per copy pair {i,j}: (i+1, j+1, ..., j+1) adjacent to
        // (j+1, i+1, ..., i+1); the repeated-digit suffix has index
        // digit * (block - 1) / (k - 1).
        const std::int64_t rep = (block - 1) / (k - 1);
        for (int i = 0; i < k; ++i) {
            for (int j = i + 1; j < k; ++j) {
                edges.emplace_back(
                    static_cast<std::int32_t>(i * block + j * rep),
                    static_cast<std::int32_t>(j * block + i * rep));
            }
        }
        block *= k;
    }
    g.edges = std::move(edges);
    finalize(g);
    return g;
}

Graph build_graph(const GraphSpec& spec, const Budgets& budgets) {
    return spec.family == Family::Hierarchical
               ? build_hierarchical(spec, budgets)
               : build_sierpinski(spec, budgets);
}

std::map<int, std::int64_t> degree_histogram(const Graph& g) {
    std::map<int, std::int64_t> hist;
    for (const auto d : g.degrees) ++hist[d];
    return hist;
}

namespace {

std::vector<std::vector<std::int32_t>> adjacency_lists(const Graph& g) {
    std::vector<std::vector<std::int32_t>> adj(g.num_vertices);
    for (std::int64_t v = 0; v < g.num_vertices; ++v) {
        adj[v].reserve(g.degrees[v]);
    }
    for (const auto& [u, v] : g.edges) {
        adj[u].push_back(v);
        adj[v].push_back(u);
    }
    return adj;
}

}  // namespace

bool is_connected(const Graph& g) {
    if (g.num_vertices == 0) return false;
    const auto adj = adjacency_lists(g);
    std::vector<char> seen(g.num_vertices, 0);
    std::queue<std::int32_t> q;
    q.push(0);
    seen[0] = 1;
    std::int64_t reached = 1;
    while (!q.empty()) {
        const auto u = q.front();
        q.pop();
        for (const auto w : adj[u]) {
            if (!seen[w]) {
                seen[w] = 1;
                ++reached;
                q.push(w);
            }
        }
    }
    return reached == g.num_vertices;
}

int bfs_diameter(const Graph& g, const Budgets& budgets) {
    if (g.num_vertices > budgets.max_dense) {
        throw BudgetError("bfs_diameter: " + std::to_string(g.num_vertices) +
                          " vertices exceeds the oracle budget of " +
                          std::to_string(budgets.max_dense));
    }
    const auto adj = adjacency_lists(g);
    const auto n = g.num_vertices;
    int diameter = 0;
    std::vector<std::int32_t> dist(n);
    std::vector<std::int32_t> frontier;
    for (std::int64_t s = 0; s < n; ++s) {
        std::fill(dist.begin(), dist.end(), -1);
        frontier.assign(1, static_cast<std::int32_t>(s));
        dist[s] = 0;
        std::int64_t reached = 1;
        int depth = 0;
        while (!frontier.empty()) {
            std::vector<std::int32_t> next;
            for (const auto u : frontier) {
                for (const auto w : adj[u]) {
                    if (dist[w] < 0) {
                        dist[w] = dist[u] + 1;
                        depth = dist[w];
                        ++reached;
                        next.push_back(w);
                    }
                }
            }
            frontier = std::move(next);
        }
        if (reached != n) {
            throw std::logic_error("bfs_diameter: graph is disconnected");
        }
        diameter = std::max(diameter, depth);
    }
    return diameter;
}

Eigen::MatrixXd laplacian_dense(const Graph& g, const Budgets& budgets) {
    if (g.num_vertices > budgets.max_dense) {
        throw BudgetError("laplacian_dense: " +
                          std::to_string(g.num_vertices) +
                          " vertices exceeds the dense budget of " +
                          std::to_string(budgets.max_dense));
    }
    const auto n = g.num_vertices;
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
    for (const auto& [u, v] : g.edges) {
        L(u, v) -= 1.0;
        L(v, u) -= 1.0;
        L(u, u) += 1.0;
        L(v, v) += 1.0;
    }
    return L;
}

}  // namespace selfsim
