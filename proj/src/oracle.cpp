#include "selfsim/oracle.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Dense>

namespace selfsim {

namespace {

constexpr double kZeroSnap = 1e-9;

}  // namespace

OracleResult eig_all(const Graph& g, const Budgets& budgets) {
    const Eigen::MatrixXd laplacian = laplacian_dense(g, budgets);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
        laplacian, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("eig_all: eigensolver failed for " +
                                 g.spec.to_string());
    }
    OracleResult r;
    r.source_spec = g.spec;
    const auto& vals = solver.eigenvalues();
    r.eigenvalues.assign(vals.data(), vals.data() + vals.size());

    if (std::abs(r.eigenvalues.front()) >= kZeroSnap) {
        throw std::logic_error("eig_all: smallest eigenvalue " +
                               std::to_string(r.eigenvalues.front()) +
                               " is not numerically zero");
    }
    r.eigenvalues.front() = 0.0;
    if (r.eigenvalues.size() > 1 && r.eigenvalues[1] < kZeroSnap) {
        throw std::logic_error(
            "eig_all: repeated near-zero eigenvalue (disconnected graph?)");
    }
    for (std::size_t i = 1; i < r.eigenvalues.size(); ++i) {
        r.lambda_sum += 1.0 / r.eigenvalues[i];
        r.lambda_sq_sum += 1.0 / (r.eigenvalues[i] * r.eigenvalues[i]);
    }
    r.kirchhoff = static_cast<double>(g.num_vertices) * r.lambda_sum;
    return r;
}

double kirchhoff_via_pinv(const Graph& g, const Budgets& budgets) {
    const auto n = g.num_vertices;
    const Eigen::MatrixXd laplacian = laplacian_dense(g, budgets);
    // (L + J/N)^{-1} = pinv(L) + J/N for connected graphs, so the Kirchhoff
    // index N * trace(pinv(L)) equals N * (trace of the inverse - 1).
    Eigen::MatrixXd shifted =
        laplacian + Eigen::MatrixXd::Constant(n, n, 1.0 / n);
    const Eigen::MatrixXd inv =
        shifted.llt().solve(Eigen::MatrixXd::Identity(n, n));
    const double pinv_kirchhoff = n * (inv.trace() - 1.0);

    const double spectral_kirchhoff = eig_all(g, budgets).kirchhoff;
    const double rel = std::abs(pinv_kirchhoff - spectral_kirchhoff) /
                       std::max(std::abs(spectral_kirchhoff), 1e-300);
    if (!(rel <= 1e-8)) {
        std::ostringstream os;
        os << "kirchhoff_via_pinv: pseudoinverse route " << pinv_kirchhoff
           << " disagrees with spectral route " << spectral_kirchhoff
           << " (relative " << rel << ")";
        throw std::logic_error(os.str());
    }
    return pinv_kirchhoff;
}

double second_smallest(const Graph& g, const Budgets& budgets) {
    return eig_all(g, budgets).eigenvalues.at(1);
}

double largest(const Graph& g, const Budgets& budgets) {
    return eig_all(g, budgets).eigenvalues.back();
}

}  // namespace selfsim
