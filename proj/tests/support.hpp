#pragma once

// Shared test utilities. The quadrature oracle here is composite Simpson,
// deliberately independent of the adaptive Gauss-Legendre integrator inside
// the library, so cross-checks of quadrature-backed values mean something.

#include "superosc/precision.hpp"

#include <complex>
#include <random>
#include <vector>

namespace testutil {

using superosc::Complex;
using superosc::Real;

// Composite Simpson with n (even) panels, accumulating in the value type.
// Integrands must return materialized Real/Complex, same rule as the library
// integrator.
template <class F>
auto simpson(F&& f, const Real& a, const Real& b, int n) {
    using V = std::remove_cvref_t<decltype(f(a))>;
    static_assert(std::is_same_v<V, Real> || std::is_same_v<V, Complex>,
                  "integrand must return Real or Complex by value");
    if (n % 2 != 0) ++n;
    Real h = (b - a) / n;
    V acc = f(a) + f(b);
    for (int i = 1; i < n; ++i) {
        Real x = a + h * i;
        acc += f(x) * Real(i % 2 != 0 ? 4 : 2);
    }
    acc *= h / 3;
    return acc;
}

// Simpson with one Richardson refinement step; returns the refined value.
template <class F>
auto simpson_refined(F&& f, const Real& a, const Real& b, int n) {
    auto coarse = simpson(f, a, b, n);
    auto fine = simpson(f, a, b, 2 * n);
    return fine + (fine - coarse) / Real(15);
}

inline std::vector<double> random_sorted_nodes(std::mt19937& rng, int n, double lo, double hi,
                                               double min_gap) {
    std::uniform_real_distribution<double> dist(lo, hi);
    std::vector<double> nodes;
    int guard = 0;
    while (static_cast<int>(nodes.size()) < n && guard++ < 100000) {
        double x = dist(rng);
        bool ok = true;
        for (double y : nodes)
            if (std::abs(x - y) < min_gap) ok = false;
        if (ok) nodes.push_back(x);
    }
    std::sort(nodes.begin(), nodes.end());
    return nodes;
}

inline std::vector<std::complex<double>> random_targets(std::mt19937& rng, int n) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<std::complex<double>> a(static_cast<std::size_t>(n));
    for (auto& z : a) z = {dist(rng), dist(rng)};
    return a;
}

}  // namespace testutil
