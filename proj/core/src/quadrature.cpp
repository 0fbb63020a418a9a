#include "superosc/quadrature.hpp"

#include <map>
#include <memory>
#include <mutex>

namespace superosc::quad {

namespace {

// Legendre P_n and P_n' at x by the three-term recurrence.
void legendre(int n, const Real& x, Real& p, Real& dp) {
    Real p0 = 1, p1 = x;
    for (int k = 2; k <= n; ++k) {
        Real p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    p = p1;
    dp = n * (x * p1 - p0) / (x * x - 1);
}

GaussLegendre compute_rule(int order) {
    GaussLegendre rule;
    rule.x.resize(order);
    rule.w.resize(order);
    const Real pi = real_pi();
    const Real eps = pow10(-static_cast<int>(current_digits()) - 5);
    const int mid = (order + 1) / 2;
    for (int i = 0; i < mid; ++i) {
        // Chebyshev-like seed, then Newton.
        Real x = cos(pi * (i + Real(0.75)) / (order + Real(0.5)));
        Real p, dp;
        for (int it = 0; it < 200; ++it) {
            legendre(order, x, p, dp);
            Real dx = p / dp;
            x -= dx;
            if (abs(dx) < eps) break;
        }
        legendre(order, x, p, dp);
        Real w = 2 / ((1 - x * x) * dp * dp);
        rule.x[i] = -x;
        rule.w[i] = w;
        rule.x[order - 1 - i] = x;
        rule.w[order - 1 - i] = w;
    }
    return rule;
}

std::mutex cache_mutex;
std::map<std::pair<int, unsigned>, std::shared_ptr<const GaussLegendre>> cache;

}  // namespace

const GaussLegendre& gauss_legendre(int order, unsigned digits) {
    std::scoped_lock lock(cache_mutex);
    auto key = std::make_pair(order, digits);
    auto it = cache.find(key);
    if (it == cache.end()) {
        PrecisionScope scope(digits);
        it = cache.emplace(key, std::make_shared<GaussLegendre>(compute_rule(order))).first;
    }
    return *it->second;
}

std::vector<Real> make_breaks(const Real& a, const Real& b, const std::vector<double>& seams) {
    std::vector<Real> breaks;
    breaks.push_back(a);
    std::vector<double> inner(seams);
    std::sort(inner.begin(), inner.end());
    for (double s : inner) {
        Real rs(s);
        if (rs > a && rs < b && rs != breaks.back()) breaks.push_back(rs);
    }
    breaks.push_back(b);
    return breaks;
}

}  // namespace superosc::quad
