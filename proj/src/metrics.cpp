#include "selfsim/metrics.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "selfsim/spectrum.hpp"

namespace selfsim {

std::string method_name(Method m) {
    switch (m) {
        case Method::Recursion: return "recursion";
        case Method::ClosedForm: return "closed-form";
        case Method::SpectrumSum: return "spectrum-sum";
        case Method::Oracle: return "oracle";
    }
    return "unknown";
}

namespace {

double dpow(int base, int exp) {
    return std::pow(static_cast<double>(base), static_cast<double>(exp));
}

void validate_nk(int n, int k) {
    if (k < 3) {
        throw std::invalid_argument("branching k must be >= 3, got " +
                                    std::to_string(k));
    }
    if (n < 1) {
        throw std::invalid_argument("generation n must be >= 1, got " +
                                    std::to_string(n));
    }
}

double relative_difference(double a, double b) {
    const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
    return std::abs(a - b) / scale;
}

void require_agreement(const std::string& what, double a, double b,
                       double tol) {
    const double rel = relative_difference(a, b);
    if (!(rel <= tol)) {
        std::ostringstream os;
        os << what << ": routes disagree (" << a << " vs " << b
           << ", relative " << rel << " > " << tol << ")";
        throw RouteDisagreement(os.str());
    }
}

}  // namespace

double epsilon_recursive(Family family, int n, int k) {
    validate_nk(n, k);
    double eps = k;
    for (int m = 2; m <= n; ++m) {
        eps = family == Family::Hierarchical
                  ? hierarchical_children(eps, k).lower
                  : sierpinski_children(eps, k).lower;
    }
    return eps;
}

double epsilon_asymptotic(Family family, int n, int k) {
    validate_nk(n, k);
    return family == Family::Hierarchical
               ? dpow(k, 2 - n)
               : k * std::pow(static_cast<double>(k + 2),
                              static_cast<double>(1 - n));
}

double zeta_recursive(Family family, int n, int k) {
    validate_nk(n, k);
    if (family == Family::Sierpinski) {
        return n == 1 ? static_cast<double>(k) : static_cast<double>(k + 2);
    }
    double zeta = k;
    for (int m = 2; m <= n; ++m) zeta = hierarchical_children(zeta, k).upper;
    return zeta;
}

double zeta_asymptotic(Family family, int n, int k) {
    validate_nk(n, k);
    if (family == Family::Sierpinski) {
        return n == 1 ? static_cast<double>(k) : static_cast<double>(k + 2);
    }
    return (k - 1.0) * n;
}

double tau_max_of(double zeta) {
    if (!(zeta > 0.0)) {
        throw std::invalid_argument("tau_max requires zeta > 0");
    }
    return std::numbers::pi / (2.0 * zeta);
}

double lambda_sum_recursive_hierarchical(int n, int k) {
    validate_nk(n, k);
    double sum = (k - 1.0) / k;
    for (int m = 2; m <= n; ++m) {
        sum = k * sum + 2.0 * (k - 1) * dpow(k, m - 2) - (k - 1.0) / k;
    }
    return sum;
}

double lambda_sum_closed_hierarchical(int n, int k) {
    validate_nk(n, k);
    // ((2n-1) k^n - 2n k^{n-1} + 1) / k
    return dpow(k, n - 2) * ((2.0 * n - 1.0) * k - 2.0 * n) + 1.0 / k;
}

double lambda_sq_sum_recursive_hierarchical(int n, int k) {
    validate_nk(n, k);
    // The per-generation contribution of the emitted eigenvalue k is
    // (k-2) k^{m-3} + 1/k^2; every surviving nonzero eigenvalue contributes
    // 1 + (2k-2)/lambda + k^2/lambda^2 through its two children.
    double sq_sum = (k - 1.0) / (k * k);
    double sum = (k - 1.0) / k;
    for (int m = 2; m <= n; ++m) {
        sq_sum = static_cast<double>(k) * k * sq_sum + (2.0 * k - 2.0) * sum +
                 dpow(k, m - 1) - 1.0 + (k - 2.0) * dpow(k, m - 3) +
                 1.0 / (static_cast<double>(k) * k);
        sum = k * sum + 2.0 * (k - 1) * dpow(k, m - 2) - (k - 1.0) / k;
    }
    return sq_sum;
}

double lambda_sq_sum_recursive_hierarchical_as_printed(int n, int k) {
    validate_nk(n, k);
    double sq_sum = (k - 1.0) / (k * k);
    for (int m = 2; m <= n; ++m) {
        sq_sum = static_cast<double>(k) * k * sq_sum +
                 (2.0 * k - 2.0) * sq_sum + dpow(k, m - 1) - 1.0;
    }
    return sq_sum;
}

double lambda_sq_sum_closed_hierarchical(int n, int k) {
    validate_nk(n, k);
    const double kn = dpow(k, n);
    const double kd = k;
    return (kd - kd * kd + kn * (kd * kd - 5.0 * kd - 6.0) +
            kn * kn * (4.0 * kd + 6.0)) /
               (kd * kd * kd * (kd + 1.0)) +
           4.0 * n * dpow(k, n - 3) * (1.0 - kd);
}

double lambda_sum_recursive_sierpinski(int n, int k) {
    validate_nk(n, k);
    double sum = (k - 1.0) / k;
    for (int m = 2; m <= n; ++m) {
        sum = (k + 2.0) * sum +
              0.5 * (k - 2.0) *
                  (dpow(k, m - 2) + 1.0 / (k - 2.0) +
                   (dpow(k, m - 1) - 1.0) / (k + 2.0));
    }
    return sum;
}

double lambda_sum_closed_sierpinski(int n, int k) {
    validate_nk(n, k);
    const double kd = k;
    const double a = (kd * kd + kd + 2.0) * (kd - 1.0);
    const double kp2n = std::pow(kd + 2.0, static_cast<double>(n));
    return (a * kp2n - (kd - 2.0) * (kd + 1.0) * (kd + 1.0) * dpow(k, n)) /
               (2.0 * kd * (kd + 1.0) * (kd + 2.0)) -
           2.0 / ((kd + 1.0) * (kd + 2.0));
}

double lambda_sq_sum_recursive_sierpinski(int n, int k) {
    validate_nk(n, k);
    double sq_sum = (k - 1.0) / (static_cast<double>(k) * k);
    double sum = (k - 1.0) / k;
    for (int m = 2; m <= n; ++m) {
        // sq_sum update consumes the previous generation's sum.
        sq_sum = (k + 2.0) * (k + 2.0) * sq_sum - 2.0 * sum +
                 0.5 * (k - 2.0) *
                     (dpow(k, m - 3) + 1.0 / (k * (k - 2.0)) +
                      (dpow(k, m - 1) - 1.0) / ((k + 2.0) * (k + 2.0)));
        sum = (k + 2.0) * sum +
              0.5 * (k - 2.0) *
                  (dpow(k, m - 2) + 1.0 / (k - 2.0) +
                   (dpow(k, m - 1) - 1.0) / (k + 2.0));
    }
    return sq_sum;
}

double lambda_sq_sum_closed_sierpinski(int n, int k) {
    validate_nk(n, k);
    const double kd = k;
    const double kn = dpow(k, n);
    const double kp2 = kd + 2.0;
    const double kp2n = std::pow(kp2, static_cast<double>(n));
    const double poly = kd * kd * kd * kd * kd + 7.0 * kd * kd * kd * kd +
                        16.0 * kd * kd * kd + 28.0 * kd * kd + 26.0 * kd +
                        12.0;
    const double t1 = -(7.0 * kd * kd + 13.0 * kd + 2.0) /
                      (kd * (kd + 1.0) * (kd + 1.0) * kp2 * kp2 * (kd + 3.0));
    const double t2 = -(kd - 2.0) *
                      (kd * kd * kd + 4.0 * kd * kd + 4.0 * kd + 2.0) * kn /
                      (kd * kd * kp2 * kp2 * (kd * kd + 3.0 * kd + 4.0));
    const double t3 = (kd - 1.0) * (kp2n / (kp2 * kp2)) *
                      (kd * kd + kd + 2.0) / (kd * (kd + 1.0) * (kd + 1.0));
    const double t4 = (kd - 1.0) * (kp2n * kp2n / (kp2 * kp2)) * poly /
                      (kd * kd * (kd + 1.0) * (kd + 1.0) * (kd + 3.0) *
                       (kd * kd + 3.0 * kd + 4.0));
    return t1 + t2 + t3 + t4;
}

namespace {

struct CoherenceSums {
    double lambda_sum = 0.0;
    double lambda_sq_sum = 0.0;
};

CoherenceSums checked_sums(Family family, int n, int k, double tol) {
    CoherenceSums s;
    if (family == Family::Hierarchical) {
        s.lambda_sum = lambda_sum_closed_hierarchical(n, k);
        require_agreement("hierarchical reciprocal-sum", s.lambda_sum,
                          lambda_sum_recursive_hierarchical(n, k), tol);
        s.lambda_sq_sum = lambda_sq_sum_closed_hierarchical(n, k);
        require_agreement("hierarchical squared-reciprocal-sum",
                          s.lambda_sq_sum,
                          lambda_sq_sum_recursive_hierarchical(n, k), tol);
    } else {
        s.lambda_sum = lambda_sum_closed_sierpinski(n, k);
        require_agreement("sierpinski reciprocal-sum", s.lambda_sum,
                          lambda_sum_recursive_sierpinski(n, k), tol);
        s.lambda_sq_sum = lambda_sq_sum_closed_sierpinski(n, k);
        require_agreement("sierpinski squared-reciprocal-sum",
                          s.lambda_sq_sum,
                          lambda_sq_sum_recursive_sierpinski(n, k), tol);
    }
    return s;
}

}  // namespace

double h1_hierarchical(int n, int k) {
    const auto s = checked_sums(Family::Hierarchical, n, k,
                                RouteTolerances{}.analytic);
    return s.lambda_sum / (2.0 * dpow(k, n));
}

double h2_hierarchical(int n, int k) {
    const auto s = checked_sums(Family::Hierarchical, n, k,
                                RouteTolerances{}.analytic);
    return s.lambda_sq_sum / (2.0 * dpow(k, n));
}

double h1_sierpinski(int n, int k) {
    const auto s = checked_sums(Family::Sierpinski, n, k,
                                RouteTolerances{}.analytic);
    return s.lambda_sum / (2.0 * dpow(k, n));
}

double h2_sierpinski(int n, int k) {
    const auto s = checked_sums(Family::Sierpinski, n, k,
                                RouteTolerances{}.analytic);
    return s.lambda_sq_sum / (2.0 * dpow(k, n));
}

KirchhoffHitting kirchhoff_and_hitting(double lambda_sum, int n, int k) {
    validate_nk(n, k);
    if (!(lambda_sum > 0.0)) {
        throw std::invalid_argument(
            "kirchhoff_and_hitting requires lambda_sum > 0");
    }
    const double num_vertices = dpow(k, n);
    const double num_edges = (dpow(k, n + 1) - k) / 2.0;
    return {num_vertices * lambda_sum,
            2.0 * num_edges * lambda_sum / (num_vertices - 1.0)};
}

MetricsReport full_report(const GraphSpec& spec, const Budgets& budgets,
                          const RouteTolerances& tol) {
    const int n = spec.generation;
    const int k = spec.branching;
    validate_nk(n, k);

    MetricsReport r;
    r.spec = spec;
    r.num_vertices = dpow(k, n);
    r.num_edges = (dpow(k, n + 1) - k) / 2.0;

    r.epsilon = {epsilon_recursive(spec.family, n, k), Method::Recursion};
    r.epsilon_asymptotic = epsilon_asymptotic(spec.family, n, k);
    r.zeta = {zeta_recursive(spec.family, n, k),
              spec.family == Family::Hierarchical ? Method::Recursion
                                                  : Method::ClosedForm};
    r.zeta_asymptotic = zeta_asymptotic(spec.family, n, k);
    r.tau_max = {tau_max_of(r.zeta.value), Method::ClosedForm};

    const auto sums = checked_sums(spec.family, n, k, tol.analytic);
    const double num_vertices = dpow(k, n);
    r.lambda_sum = {sums.lambda_sum, Method::ClosedForm};
    r.lambda_sq_sum = {sums.lambda_sq_sum, Method::ClosedForm};
    r.h1 = {sums.lambda_sum / (2.0 * num_vertices), Method::ClosedForm};
    r.h2 = {sums.lambda_sq_sum / (2.0 * num_vertices), Method::ClosedForm};
    const auto kh = kirchhoff_and_hitting(sums.lambda_sum, n, k);
    r.kirchhoff = {kh.kirchhoff, Method::ClosedForm};
    r.mean_hitting = {kh.mean_hitting, Method::ClosedForm};

    if (n <= budgets.max_spectrum_generation) {
        const auto s = spectrum_of(spec, budgets);
        require_agreement(spec.to_string() + " reciprocal-sum vs spectrum",
                          sums.lambda_sum, s.reciprocal_sum(), tol.spectrum);
        require_agreement(
            spec.to_string() + " squared-reciprocal-sum vs spectrum",
            sums.lambda_sq_sum, s.reciprocal_square_sum(), tol.spectrum);
        require_agreement(spec.to_string() + " epsilon vs spectrum min",
                          r.epsilon.value, s.min_nonzero(), tol.analytic);
        require_agreement(spec.to_string() + " zeta vs spectrum max",
                          r.zeta.value, s.max_value(), tol.analytic);
    }
    return r;
}

}  // namespace selfsim
