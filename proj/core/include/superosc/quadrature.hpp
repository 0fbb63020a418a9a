#pragma once

#include "superosc/precision.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace superosc::quad {

/// Gauss-Legendre rule on [-1, 1], nodes/weights computed by Newton iteration
/// at a given decimal precision. Rules are cached per (order, digits).
struct GaussLegendre {
    std::vector<Real> x;
    std::vector<Real> w;
};

const GaussLegendre& gauss_legendre(int order, unsigned digits);

/// Panel order matched to the active precision: enough that bisection depth
/// stays shallow even at escalated digit counts.
inline int default_order(unsigned digits) {
    return std::clamp<int>(20 + static_cast<int>(digits), 24, 512);
}

struct Options {
    Real rel_tol{1e-12};  // relative to a first-pass estimate of |integral|
    Real abs_tol{0};      // absolute floor for the acceptance test
    int order = 0;        // 0 -> default_order(current_digits())
    int max_depth = 48;
};

namespace detail {

inline Real magnitude(const Real& v) { return abs(v); }
inline Real magnitude(const Complex& v) { return abs(v); }

// Integrands must hand back a materialized Real or Complex. A multiprecision
// expression template would hold references into the lambda's dead frame by
// the time the rule evaluates it.
template <class T>
inline constexpr bool is_quad_value_v =
    std::is_same_v<std::remove_cvref_t<T>, Real> ||
    std::is_same_v<std::remove_cvref_t<T>, Complex>;

template <class F, class V>
V panel_sum(F& f, const Real& a, const Real& b, const GaussLegendre& rule) {
    Real mid = (a + b) / 2;
    Real half = (b - a) / 2;
    V acc{};
    for (std::size_t i = 0; i < rule.x.size(); ++i) {
        acc += f(mid + half * rule.x[i]) * rule.w[i];
    }
    acc *= half;
    return acc;
}

template <class F, class V>
V refine(F& f, const Real& a, const Real& b, const V& whole, const Real& tol,
         const GaussLegendre& rule, int depth, int max_depth) {
    Real mid = (a + b) / 2;
    V left = panel_sum<F, V>(f, a, mid, rule);
    V right = panel_sum<F, V>(f, mid, b, rule);
    V both = left + right;
    if (magnitude(both - whole) <= tol || depth >= max_depth) {
        if (depth >= max_depth && magnitude(both - whole) > tol * 1e6) {
            throw std::runtime_error("adaptive quadrature: refinement stalled");
        }
        return both;
    }
    Real htol = tol / 2;
    return refine(f, a, mid, left, htol, rule, depth + 1, max_depth) +
           refine(f, mid, b, right, htol, rule, depth + 1, max_depth);
}

}  // namespace detail

/// Adaptive Gauss-Legendre with interval bisection over the sorted panel
/// boundaries `breaks` (first = lower limit, last = upper limit). The value
/// type follows the integrand: Real or Complex.
template <class F>
auto integrate_panels(F&& f, const std::vector<Real>& breaks, const Options& opt) {
    using V = std::remove_cvref_t<decltype(f(std::declval<const Real&>()))>;
    static_assert(detail::is_quad_value_v<V>,
                  "integrand must return Real or Complex by value (declare the lambda's "
                  "return type explicitly)");
    if (breaks.size() < 2) throw std::invalid_argument("integrate: need at least two breakpoints");
    int order = opt.order > 0 ? opt.order : default_order(current_digits());
    const GaussLegendre& rule = gauss_legendre(order, current_digits());

    std::vector<V> coarse(breaks.size() - 1);
    Real coarse_mag{0};
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        coarse[i] = detail::panel_sum<F, V>(f, breaks[i], breaks[i + 1], rule);
        coarse_mag += detail::magnitude(coarse[i]);
    }
    // Error budget: distribute across panels by width share.
    Real tol_total = opt.abs_tol;
    Real rel_part = opt.rel_tol * coarse_mag;
    if (rel_part > tol_total) tol_total = rel_part;
    Real span = breaks.back() - breaks.front();

    V total{};
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        Real share = tol_total * (breaks[i + 1] - breaks[i]) / span;
        total += detail::refine(f, breaks[i], breaks[i + 1], coarse[i], share, rule, 0,
                                opt.max_depth);
    }
    return total;
}

template <class F>
auto integrate(F&& f, const Real& a, const Real& b, const Options& opt) {
    std::vector<Real> breaks{a, b};
    return integrate_panels(std::forward<F>(f), breaks, opt);
}

/// Breakpoint helper: [a, b] plus any of `seams` lying strictly inside.
std::vector<Real> make_breaks(const Real& a, const Real& b, const std::vector<double>& seams);

}  // namespace superosc::quad
