#include "selfsim/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>

namespace selfsim {

namespace {

std::int64_t ipow64(int base, int exp) {
    std::int64_t r = 1;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

void check_spectrum_budget(int n, int k, const Budgets& budgets) {
    if (k < 3) {
        throw std::invalid_argument("branching k must be >= 3, got " +
                                    std::to_string(k));
    }
    if (n < 1) {
        throw std::invalid_argument("generation n must be >= 1, got " +
                                    std::to_string(n));
    }
    if (n > budgets.max_spectrum_generation) {
        throw BudgetError("spectrum generation " + std::to_string(n) +
                          " exceeds budget of " +
                          std::to_string(budgets.max_spectrum_generation) +
                          " (~2^n distinct entries)");
    }
}

}  // namespace

ChildPair hierarchical_children(double parent, int k) {
    const double sum = k + parent;
    const double disc = sum * sum - 4.0 * parent;
    ChildPair c;
    c.upper = 0.5 * (sum + std::sqrt(disc));
    c.lower = parent / c.upper;  // product of the roots equals the parent
    return c;
}

ChildPair sierpinski_children(double parent, int k) {
    const double sum = k + 2;
    const double disc = sum * sum - 4.0 * parent;
    if (disc < 0.0) {
        throw std::logic_error(
            "sierpinski_children: negative discriminant for parent " +
            std::to_string(parent) + " (eigenvalue above k+2)");
    }
    ChildPair c;
    c.upper = 0.5 * (sum + std::sqrt(disc));
    c.lower = parent / c.upper;
    return c;
}

SpectrumMultiset hierarchical_spectrum(int n, int k, const Budgets& budgets) {
    check_spectrum_budget(n, k, budgets);
    SpectrumMultiset s;
    s.family = Family::Hierarchical;
    s.generation = n;
    s.branching = k;
    s.entries = {{0.0, 1}, {static_cast<double>(k), k - 1}};

    const double interlace = k - 2.0;
    for (int gen = 2; gen <= n; ++gen) {
        std::vector<SpectrumEntry> next;
        next.reserve(2 * s.entries.size());
        next.push_back({0.0, 1});
        next.push_back({static_cast<double>(k),
                        (k - 2) * ipow64(k, gen - 1) + 1});
        for (const auto& e : s.entries) {
            if (e.value <= 0.0) continue;
            const auto c = hierarchical_children(e.value, k);
            if (c.lower >= interlace + 1e-9) {
                std::cerr << "selfsim: interlacing check: lower child "
                          << c.lower << " not below k-2 = " << interlace
                          << " (parent " << e.value << ")\n";
            }
            next.push_back({c.lower, e.multiplicity});
        }
        for (const auto& e : s.entries) {
            if (e.value <= 0.0) continue;
            const auto c = hierarchical_children(e.value, k);
            if (c.upper <= interlace - 1e-9) {
                std::cerr << "selfsim: interlacing check: upper child "
                          << c.upper << " not above k-2 = " << interlace
                          << " (parent " << e.value << ")\n";
            }
            next.push_back({c.upper, e.multiplicity});
        }
        std::stable_sort(next.begin(), next.end(),
                         [](const SpectrumEntry& a, const SpectrumEntry& b) {
                             return a.value < b.value;
                         });
        s.entries = std::move(next);
    }
    return s;
}

SpectrumMultiset sierpinski_spectrum(int n, int k, const Budgets& budgets) {
    check_spectrum_budget(n, k, budgets);
    SpectrumMultiset s;
    s.family = Family::Sierpinski;
    s.generation = n;
    s.branching = k;
    s.entries = {{0.0, 1}, {static_cast<double>(k), k - 1}};

    for (int gen = 2; gen <= n; ++gen) {
        std::vector<SpectrumEntry> next;
        next.reserve(2 * s.entries.size() + 1);
        next.push_back({0.0, 1});
        next.push_back({static_cast<double>(k),
                        ((k - 2) * ipow64(k, gen - 1) + k) / 2});
        next.push_back({static_cast<double>(k + 2),
                        (k - 2) * (ipow64(k, gen - 1) - 1) / 2});
        for (const auto& e : s.entries) {
            if (e.value <= 0.0) continue;
            next.push_back(
                {sierpinski_children(e.value, k).lower, e.multiplicity});
        }
        for (const auto& e : s.entries) {
            if (e.value <= 0.0) continue;
            next.push_back(
                {sierpinski_children(e.value, k).upper, e.multiplicity});
        }
        std::stable_sort(next.begin(), next.end(),
                         [](const SpectrumEntry& a, const SpectrumEntry& b) {
                             return a.value < b.value;
                         });
        s.entries = std::move(next);
    }
    return s;
}

SpectrumMultiset spectrum_of(const GraphSpec& spec, const Budgets& budgets) {
    return spec.family == Family::Hierarchical
               ? hierarchical_spectrum(spec.generation, spec.branching,
                                       budgets)
               : sierpinski_spectrum(spec.generation, spec.branching, budgets);
}

std::int64_t SpectrumMultiset::total_multiplicity() const {
    std::int64_t total = 0;
    for (const auto& e : entries) total += e.multiplicity;
    return total;
}

double SpectrumMultiset::trace() const {
    double t = 0.0;
    for (const auto& e : entries) t += e.value * e.multiplicity;
    return t;
}

double SpectrumMultiset::min_nonzero() const {
    for (const auto& e : entries) {
        if (e.value > 0.0) return e.value;
    }
    return std::numeric_limits<double>::quiet_NaN();
}

double SpectrumMultiset::max_value() const {
    return entries.empty() ? std::numeric_limits<double>::quiet_NaN()
                           : entries.back().value;
}

double SpectrumMultiset::reciprocal_sum() const {
    double sum = 0.0;
    for (auto it = entries.rbegin(); it != entries.rend(); ++it) {
        if (it->value > 0.0) sum += it->multiplicity / it->value;
    }
    return sum;
}

double SpectrumMultiset::reciprocal_square_sum() const {
    double sum = 0.0;
    for (auto it = entries.rbegin(); it != entries.rend(); ++it) {
        if (it->value > 0.0) {
            sum += it->multiplicity / (it->value * it->value);
        }
    }
    return sum;
}

std::vector<double> SpectrumMultiset::expand(const Budgets& budgets) const {
    const std::int64_t total = total_multiplicity();
    if (total > budgets.max_vertices) {
        throw BudgetError("expand: " + std::to_string(total) +
                          " eigenvalues exceeds budget of " +
                          std::to_string(budgets.max_vertices));
    }
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(total));
    for (const auto& e : entries) {
        out.insert(out.end(), static_cast<std::size_t>(e.multiplicity),
                   e.value);
    }
    return out;
}

SpectrumSummary spectrum_summary(const SpectrumMultiset& s) {
    return {s.min_nonzero(), s.max_value(), s.total_multiplicity(), s.trace()};
}

}  // namespace selfsim
