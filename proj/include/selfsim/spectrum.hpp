#pragma once

// Complete Laplacian spectra of both graph families by recursive decimation.
//
// Each generation maps every nonzero eigenvalue of the previous generation to
// the two roots of a quadratic and emits fresh eigenvalues with closed-form
// multiplicities, so the full multiset for k^n vertices is held in ~2^n
// entries without any matrix diagonalization.

#include <cstdint>
#include <vector>

#include "selfsim/graph.hpp"

namespace selfsim {

struct SpectrumEntry {
    double value = 0.0;
    std::int64_t multiplicity = 0;
};

/// Eigenvalue multiset, entries sorted ascending by value. Entries produced
/// by different parents are never merged even when numerically equal; ties
/// keep generation order (zero, emitted values, then lower-branch children in
/// parent order, then upper-branch children).
struct SpectrumMultiset {
    Family family = Family::Hierarchical;
    int generation = 1;
    int branching = 3;
    std::vector<SpectrumEntry> entries;

    std::int64_t total_multiplicity() const;
    double trace() const;        // multiplicity-weighted sum
    double min_nonzero() const;
    double max_value() const;
    /// Sum of multiplicity / value over nonzero entries.
    double reciprocal_sum() const;
    /// Sum of multiplicity / value^2 over nonzero entries.
    double reciprocal_square_sum() const;
    /// All k^n eigenvalues, ascending. Guarded by budgets.max_vertices.
    std::vector<double> expand(const Budgets& budgets = {}) const;
};

struct SpectrumSummary {
    double min_nonzero = 0.0;
    double max_value = 0.0;
    std::int64_t count = 0;
    double trace = 0.0;
};

/// Children of a nonzero hierarchical eigenvalue: the roots of
/// x^2 - (k + parent) x + parent = 0. Lower root is computed from the upper
/// one via the product identity to avoid cancellation for small parents.
/// lower < k-2 < upper always holds.
struct ChildPair {
    double lower = 0.0;
    double upper = 0.0;
};
ChildPair hierarchical_children(double parent, int k);

/// Children of a nonzero Sierpinski eigenvalue: the roots of
/// x^2 - (k+2) x + parent = 0. Throws std::logic_error if the discriminant
/// is negative (cannot happen while all eigenvalues stay <= k+2).
ChildPair sierpinski_children(double parent, int k);

/// Spectrum of the hierarchical graph: starts from {0, k x (k-1)}; each
/// generation n emits eigenvalue k with multiplicity (k-2)k^{n-1}+1, keeps 0,
/// and maps every nonzero parent to its two children.
SpectrumMultiset hierarchical_spectrum(int n, int k, const Budgets& budgets = {});

/// Spectrum of the Sierpinski graph: same base; each generation n >= 2 emits
/// eigenvalue k with multiplicity ((k-2)k^{n-1}+k)/2 and eigenvalue k+2 with
/// multiplicity (k-2)(k^{n-1}-1)/2, and maps nonzero parents to children.
SpectrumMultiset sierpinski_spectrum(int n, int k, const Budgets& budgets = {});

SpectrumMultiset spectrum_of(const GraphSpec& spec, const Budgets& budgets = {});

SpectrumSummary spectrum_summary(const SpectrumMultiset& s);

}  // namespace selfsim
