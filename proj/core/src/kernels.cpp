#include "superosc/kernels.hpp"

#include "superosc/quadrature.hpp"

#include <stdexcept>

namespace superosc {

namespace {

void check_index(const ConstraintSet& cs, int k) {
    if (k < 1 || k > cs.size()) throw std::out_of_range("constraint index out of range");
}

// sin(u + t*pi/2) without forming the shifted argument.
Real sin_shifted(const Real& u, int t) {
    switch (((t % 4) + 4) % 4) {
        case 0: return sin(u);
        case 1: return cos(u);
        case 2: return -sin(u);
        default: return -cos(u);
    }
}

// Taylor series of the m-th sinc derivative:
//   sinc^(m)(u) = sum_{2j >= m} (-1)^j u^(2j-m) / ((2j-m)! (2j+1)).
// Terms are added until they fall below the working epsilon relative to the
// largest term seen, which bounds the cancellation error at the scale the
// alternating sum actually cancels at.
Real sinc_series(int m, const Real& u) {
    const Real eps = pow10(-static_cast<int>(current_digits()) - 8);
    int j = (m + 1) / 2;
    // first term: (-1)^j u^(2j-m) / ((2j-m)! (2j+1))
    Real fact = 1;
    for (int t = 2; t <= 2 * j - m; ++t) fact *= t;
    Real term = pow(u, 2 * j - m) / (fact * (2 * j + 1));
    if (j % 2 != 0) term = -term;
    Real sum = term;
    Real peak = abs(term);
    const Real u2 = u * u;
    for (int guard = 0; guard < 100000; ++guard) {
        // t_{j+1}/t_j = -u^2 (2j+1) / ((2j+2-m)(2j+1-m)(2j+3))
        term *= -u2 * (2 * j + 1) / (Real(2 * j + 2 - m) * (2 * j + 1 - m) * (2 * j + 3));
        ++j;
        sum += term;
        Real mag = abs(term);
        if (mag > peak) peak = mag;
        if (mag <= eps * peak) return sum;  // <=: an identically-zero tail (u = 0) stops too
    }
    throw std::runtime_error("sinc_derivative: series failed to terminate");
}

Real band_momentum(const PhysicalConfig& cfg) { return Real(cfg.p_max); }

// interval half-width and centre for IntervalArea kernel k
void interval_geometry(const ConstraintSet& cs, int k, Real& half, Real& center) {
    Real lo(cs.nodes[static_cast<std::size_t>(k - 1)]);
    Real hi(cs.nodes[static_cast<std::size_t>(k)]);
    half = (hi - lo) / 2;
    center = (hi + lo) / 2;
}

}  // namespace

Real sinc(const Real& u) {
    if (u == 0) return Real(1);
    return sin(u) / u;
}

Real sinc_derivative(int m, const Real& u) {
    if (m < 0) throw std::invalid_argument("sinc_derivative: negative order");
    if (m == 0) return sinc(u);
    if (abs(u) <= m + 1) return sinc_series(m, u);
    // u sinc(u) = sin(u), differentiated m times:
    //   sinc^(m)(u) = (sin^(m)(u) - m sinc^(m-1)(u)) / u
    // stable here because each step divides by |u| > m >= step index.
    Real s = sinc(u);
    for (int t = 1; t <= m; ++t) s = (sin_shifted(u, t) - t * s) / u;
    return s;
}

Complex kernel_momentum(const PhysicalConfig& cfg, const ConstraintSet& cs, int k, const Real& p) {
    check_index(cs, k);
    const Real hbar(cfg.hbar);
    switch (cs.family) {
        case Family::PointAmplitude: {
            Real xk(cs.nodes[static_cast<std::size_t>(k - 1)]);
            return exp_i(-p * xk / hbar);
        }
        case Family::DerivativeAtPoint: {
            Real anchor(cs.nodes[0]);
            Real t = p / hbar;
            Complex phase = exp_i(-p * anchor / hbar);
            // (-i t)^(k-1)
            Real mag = pow(t, k - 1);
            switch ((k - 1) % 4) {
                case 0: return mag * phase;
                case 1: return Complex(Real(0), -mag) * phase;
                case 2: return Complex(-mag, Real(0)) * phase;
                default: return Complex(Real(0), mag) * phase;
            }
        }
        case Family::IntervalArea: {
            Real half, center;
            interval_geometry(cs, k, half, center);
            return (2 * half * sinc(p * half / hbar)) * exp_i(-p * center / hbar);
        }
    }
    throw std::logic_error("unreachable");
}

namespace {

// Derivative of order m of the position kernel, closed form for all families.
Real position_kernel_derivative(const PhysicalConfig& cfg, const ConstraintSet& cs, int k,
                                const Real& x, int m) {
    const Real hbar(cfg.hbar);
    const Real pmax = band_momentum(cfg);
    const Real rate = pmax / hbar;  // d(scaled argument)/dx
    const Real front = pmax * sqrt(2 / (real_pi() * hbar));
    switch (cs.family) {
        case Family::PointAmplitude: {
            Real u = rate * (x - Real(cs.nodes[static_cast<std::size_t>(k - 1)]));
            return front * pow(rate, m) * sinc_derivative(m, u);
        }
        case Family::DerivativeAtPoint: {
            // chi_k(x) = front * (-rate)^(k-1) sinc^(k-1)(rate (x - x0))
            Real u = rate * (x - Real(cs.nodes[0]));
            Real coeff = pow(rate, k - 1 + m);
            if ((k - 1) % 2 != 0) coeff = -coeff;
            return front * coeff * sinc_derivative(k - 1 + m, u);
        }
        case Family::IntervalArea: {
            Real ulo = rate * (x - Real(cs.nodes[static_cast<std::size_t>(k - 1)]));
            Real uhi = rate * (x - Real(cs.nodes[static_cast<std::size_t>(k)]));
            if (m == 0) {
                // integral of the sinc kernel across the interval
                quad::Options opt;
                opt.rel_tol = pow10(-std::max<int>(12, static_cast<int>(current_digits()) - 10));
                opt.abs_tol = opt.rel_tol * front * 2 * Real(cs.nodes[static_cast<std::size_t>(k)] -
                                                             cs.nodes[static_cast<std::size_t>(k - 1)]);
                Real a(cs.nodes[static_cast<std::size_t>(k - 1)]);
                Real b(cs.nodes[static_cast<std::size_t>(k)]);
                return quad::integrate(
                    [&](const Real& xp) -> Real { return front * sinc(rate * (x - xp)); }, a, b, opt);
            }
            // d/dx removes one integral: difference of (m-1)-th sinc derivatives
            return front * pow(rate, m - 1) *
                   (sinc_derivative(m - 1, ulo) - sinc_derivative(m - 1, uhi));
        }
    }
    throw std::logic_error("unreachable");
}

}  // namespace

Real kernel_position(const PhysicalConfig& cfg, const ConstraintSet& cs, int k, const Real& x) {
    check_index(cs, k);
    return position_kernel_derivative(cfg, cs, k, x, 0);
}

Real kernel_position_derivative(const PhysicalConfig& cfg, const ConstraintSet& cs, int k,
                                const Real& x) {
    check_index(cs, k);
    return position_kernel_derivative(cfg, cs, k, x, 1);
}

Complex gram_entry(const PhysicalConfig& cfg, const ConstraintSet& cs, int k, int r) {
    check_index(cs, k);
    check_index(cs, r);
    const Real hbar(cfg.hbar);
    const Real pmax = band_momentum(cfg);
    const Real pi = real_pi();
    switch (cs.family) {
        case Family::PointAmplitude: {
            Real dx = Real(cs.nodes[static_cast<std::size_t>(k - 1)]) -
                      Real(cs.nodes[static_cast<std::size_t>(r - 1)]);
            return Complex(pmax / (pi * hbar) * sinc(pmax * dx / hbar));
        }
        case Family::DerivativeAtPoint: {
            if ((k + r) % 2 != 0) return Complex(Real(0), Real(0));
            // (2 pi hbar)^-1 i^(k-1) (-i)^(r-1) hbar^(2-k-r) 2 pmax^(k+r-1) / (k+r-1)
            int e = (k - r) / 2;
            Real val = pow(pmax / hbar, k + r - 2) * pmax / (pi * hbar * (k + r - 1));
            if (((e % 2) + 2) % 2 != 0) val = -val;
            return Complex(val);
        }
        case Family::IntervalArea: {
            Real hk, ck, hr, cr;
            interval_geometry(cs, k, hk, ck);
            interval_geometry(cs, r, hr, cr);
            Real scale = 4 * hk * hr * 2 * pmax / (2 * pi * hbar);
            quad::Options opt;
            opt.rel_tol = pow10(-std::max<int>(14, static_cast<int>(current_digits()) - 8));
            opt.abs_tol = opt.rel_tol * scale;
            auto integrand = [&](const Real& p) {
                return conj(kernel_momentum(cfg, cs, k, p)) * kernel_momentum(cfg, cs, r, p) /
                       (2 * pi * hbar);
            };
            std::vector<Real> breaks{-pmax, Real(0), pmax};
            return quad::integrate_panels(integrand, breaks, opt);
        }
    }
    throw std::logic_error("unreachable");
}

}  // namespace superosc
