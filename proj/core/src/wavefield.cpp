#include "superosc/wavefield.hpp"

#include "superosc/kernels.hpp"
#include "superosc/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace superosc {

namespace {

Real front_factor(const PhysicalConfig& cfg) {
    return 1 / sqrt(2 * real_pi() * Real(cfg.hbar));
}

}  // namespace

Complex WaveField::position_hp(const Real& x) const {
    PrecisionScope scope(precision_digits);
    Complex acc{};
    for (int k = 1; k <= cs.size(); ++k)
        acc += lambdas[static_cast<std::size_t>(k - 1)] * kernel_position(cfg, cs, k, x);
    acc = acc * front_factor(cfg);
    if (normalization == Normalization::UnitNorm) acc /= sqrt(norm_sq_hp);
    return acc;
}

Complex WaveField::momentum_hp(const Real& p) const {
    PrecisionScope scope(precision_digits);
    if (abs(p) > Real(cfg.p_max)) return Complex{};
    Complex acc{};
    for (int k = 1; k <= cs.size(); ++k)
        acc += lambdas[static_cast<std::size_t>(k - 1)] * kernel_momentum(cfg, cs, k, p);
    acc = acc * front_factor(cfg);
    if (normalization == Normalization::UnitNorm) acc /= sqrt(norm_sq_hp);
    return acc;
}

Complex WaveField::position_derivative_hp(const Real& x) const {
    PrecisionScope scope(precision_digits);
    Complex acc{};
    for (int k = 1; k <= cs.size(); ++k)
        acc += lambdas[static_cast<std::size_t>(k - 1)] * kernel_position_derivative(cfg, cs, k, x);
    acc = acc * front_factor(cfg);
    if (normalization == Normalization::UnitNorm) acc /= sqrt(norm_sq_hp);
    return acc;
}

std::complex<double> WaveField::position(double x) const { return position_hp(Real(x)).to_std(); }
std::complex<double> WaveField::momentum(double p) const { return momentum_hp(Real(p)).to_std(); }

WaveField make_wavefield(const PhysicalConfig& cfg, const ConstraintSet& cs, const Solution& sol,
                         Normalization norm) {
    WaveField w;
    w.cfg = cfg;
    w.cs = cs;
    w.lambdas = sol.lambdas;
    w.precision_digits = sol.precision_digits_used;
    w.normalization = norm;
    w.norm_sq_hp = sol.norm_sq_hp;
    return w;
}

std::complex<double> eval_position(const WaveField& w, double x) { return w.position(x); }
std::complex<double> eval_momentum(const WaveField& w, double p) { return w.momentum(p); }

std::complex<double> derivative(const WaveField& w, double x, int n) {
    if (n < 0 || n > 30) throw std::invalid_argument("derivative: order must be in 0..30");
    PrecisionScope scope(w.precision_digits);
    const Real hbar(w.cfg.hbar);
    const Real pmax(w.cfg.p_max);
    const Real xr(x);
    // |d^n psi| <= (p_max/hbar)^n sqrt(p_max/(pi hbar)) ||psi|| sets the scale
    Real field_norm =
        w.normalization == Normalization::UnitNorm ? Real(1) : sqrt(w.norm_sq_hp);
    Real bound = pow(pmax / hbar, n) * sqrt(pmax / (real_pi() * hbar)) * field_norm;
    quad::Options opt;
    opt.rel_tol = Real(1e-10);
    opt.abs_tol = Real(1e-12) * bound;
    auto integrand = [&](const Real& p) {
        Complex ip_pow;  // (i p / hbar)^n
        Real mag = pow(p / hbar, n);
        switch (n % 4) {
            case 0: ip_pow = Complex(mag); break;
            case 1: ip_pow = Complex(Real(0), mag); break;
            case 2: ip_pow = Complex(-mag); break;
            default: ip_pow = Complex(Real(0), -mag); break;
        }
        return ip_pow * w.momentum_hp(p) * exp_i(p * xr / hbar);
    };
    std::vector<Real> breaks{-pmax, Real(0), pmax};
    Complex val = quad::integrate_panels(integrand, breaks, opt) * front_factor(w.cfg);
    return val.to_std();
}

namespace {

// Worst-case |psi(x)| the kernel sum can cancel down from; in-slit values
// below 10^-(digits) of this are evaluation noise, not signal.
Real cancellation_scale(const WaveField& w) {
    const Real hbar(w.cfg.hbar);
    const Real pmax(w.cfg.p_max);
    const Real front = front_factor(w.cfg) * pmax * sqrt(2 / (real_pi() * hbar));
    Real acc{0};
    for (int k = 1; k <= w.cs.size(); ++k) {
        Real bound = front;
        switch (w.cs.family) {
            case Family::PointAmplitude:
                break;
            case Family::DerivativeAtPoint:
                bound *= pow(pmax / hbar, k - 1) / k;  // |sinc^(m)| <= 1/(m+1)
                break;
            case Family::IntervalArea:
                bound *= Real(w.cs.nodes[static_cast<std::size_t>(k)] -
                              w.cs.nodes[static_cast<std::size_t>(k - 1)]);
                break;
        }
        acc += abs(w.lambdas[static_cast<std::size_t>(k - 1)]) * bound;
    }
    if (w.normalization == Normalization::UnitNorm && w.norm_sq_hp > 0)
        acc /= sqrt(w.norm_sq_hp);
    return acc;
}

}  // namespace

EmergingWave project_slit(const WaveField& w) {
    PrecisionScope scope(w.precision_digits);
    if (w.norm_sq_hp == 0)
        throw SolveError(SolveErrorKind::ZeroInSlit, "field is identically zero");
    const Real lo(w.cfg.slit_lo()), hi(w.cfg.slit_hi());

    Real sup{0};
    const int samples = 256;
    for (int i = 0; i <= samples; ++i) {
        Real a = abs(w.position_hp(lo + (hi - lo) * i / samples));
        if (a > sup) sup = a;
    }
    Real noise = pow10(8 - static_cast<int>(w.precision_digits)) * cancellation_scale(w);
    if (!(sup > noise))
        throw SolveError(SolveErrorKind::ZeroInSlit,
                         "slit values are below the cancellation noise floor");

    quad::Options opt;
    opt.rel_tol = Real(1e-10);
    opt.abs_tol = Real(1e-14) * sup * sup * (hi - lo);
    auto breaks = quad::make_breaks(lo, hi, w.cs.nodes);
    Real slit_sq = quad::integrate_panels(
        [&](const Real& x) -> Real { return norm_sq(w.position_hp(x)); }, breaks, opt);
    EmergingWave e;
    e.source = w;
    e.slit_norm_hp = sqrt(slit_sq);
    e.renorm_factor = to_double(1 / e.slit_norm_hp);
    return e;
}

Complex EmergingWave::value_hp(const Real& x) const {
    if (to_double(x) < source.cfg.slit_lo() || to_double(x) > source.cfg.slit_hi())
        return Complex{};
    return source.position_hp(x) / slit_norm_hp;
}

Complex EmergingWave::derivative_hp(const Real& x) const {
    return source.position_derivative_hp(x) / slit_norm_hp;
}

std::complex<double> EmergingWave::value(double x) const { return value_hp(Real(x)).to_std(); }

IdealTemplate ideal_template(const PhysicalConfig& cfg, double pbar) {
    cfg.validate();
    return {cfg, pbar};
}

Complex IdealTemplate::value_hp(const Real& x) const {
    double xd = to_double(x);
    if (xd < cfg.slit_lo() || xd > cfg.slit_hi()) return Complex{};
    const Real L(cfg.slit_width());
    const Real u = x - Real(cfg.slit_center);
    return sqrt(2 / L) * cos(real_pi() * u / L) * exp_i(u * Real(pbar) / Real(cfg.hbar));
}

Complex IdealTemplate::derivative_hp(const Real& x, int m) const {
    if (m < 0 || m > 30) throw std::invalid_argument("template derivative: order must be in 0..30");
    double xd = to_double(x);
    if (xd < cfg.slit_lo() || xd > cfg.slit_hi()) return Complex{};
    const Real L(cfg.slit_width());
    const Real u = x - Real(cfg.slit_center);
    const Real pi = real_pi();
    const Real kosc = pi / L;                 // cosine rate
    const Real kexp = Real(pbar) / Real(cfg.hbar);  // phase rate
    // product rule: sum_j C(m,j) (d^j cos)(d^(m-j) e^{i k x})
    Complex sum{};
    Real binom(1);
    for (int j = 0; j <= m; ++j) {
        // d^j cos(kosc u) = kosc^j cos(kosc u + j pi/2)
        Real cos_part = pow(kosc, j) * cos(kosc * u + j * pi / 2);
        Real mag = pow(kexp, m - j);
        Complex i_pow;
        switch ((m - j) % 4) {
            case 0: i_pow = Complex(mag); break;
            case 1: i_pow = Complex(Real(0), mag); break;
            case 2: i_pow = Complex(-mag); break;
            default: i_pow = Complex(Real(0), -mag); break;
        }
        sum += binom * cos_part * i_pow;
        binom = binom * (m - j) / (j + 1);
    }
    return sqrt(2 / L) * sum * exp_i(u * kexp);
}

std::complex<double> IdealTemplate::value(double x) const { return value_hp(Real(x)).to_std(); }
std::complex<double> IdealTemplate::derivative(double x, int m) const {
    return derivative_hp(Real(x), m).to_std();
}

double IdealTemplate::p_std_exact() const { return M_PI * cfg.hbar / cfg.slit_width(); }

double IdealTemplate::x_std_exact() const {
    return cfg.slit_width() * std::sqrt((M_PI * M_PI - 6.0) / (12.0 * M_PI * M_PI));
}

SlitFunction as_slit_function(const EmergingWave& e) {
    SlitFunction f;
    f.cfg = e.source.cfg;
    f.value = [e](const Real& x) { return e.value_hp(x); };
    f.derivative = [e](const Real& x) { return e.derivative_hp(x); };
    f.seams = e.source.cs.nodes;
    f.precision_digits = e.source.precision_digits;
    return f;
}

SlitFunction as_slit_function(const IdealTemplate& t) {
    SlitFunction f;
    f.cfg = t.cfg;
    f.value = [t](const Real& x) { return t.value_hp(x); };
    f.derivative = [t](const Real& x) { return t.derivative_hp(x, 1); };
    f.precision_digits = kBaseDigits;
    return f;
}

namespace {

Real slit_max_abs(const SlitFunction& f) {
    const int samples = 1024;
    Real best{0};
    double lo = f.cfg.slit_lo(), hi = f.cfg.slit_hi();
    for (int i = 0; i <= samples; ++i) {
        Real x = Real(lo) + Real(hi - lo) * i / samples;
        Real a = abs(f.value(x));
        if (a > best) best = a;
    }
    for (double s : f.seams) {
        Real a = abs(f.value(Real(s)));
        if (a > best) best = a;
    }
    return best;
}

// Truncated-band spectral estimate. Psi is tabulated once on a slit grid at
// full precision and the transform moments are then plain Simpson sums; a
// generic slit wave has a boundary jump, so |Psi_hat|^2 only decays like
// 1/p^2 and the truncation (recorded in the result) together with the grid
// resolution bound the accuracy.
MomentumStats spectral_stats(const SlitFunction& f) {
    const double hbar = f.cfg.hbar;
    const double pmax = f.cfg.p_max;
    const double lo = f.cfg.slit_lo(), hi = f.cfg.slit_hi();
    const double width = hi - lo;

    double trunc = 8 * pmax;
    const double trunc_cap = 64 * pmax;
    double mass = 0, m1 = 0, m2 = 0, n0 = 1;
    for (;;) {
        // slit grid fine enough for the fastest phase e^{-i trunc x / hbar}
        int m = std::max<int>(2048, static_cast<int>(trunc * width / (2 * M_PI * hbar) * 32));
        if (m % 2 != 0) ++m;
        std::vector<std::complex<double>> vals(static_cast<std::size_t>(m) + 1);
        std::vector<double> xw(static_cast<std::size_t>(m) + 1);
        double hx = width / m;
        for (int i = 0; i <= m; ++i) {
            double x = lo + width * i / m;
            vals[static_cast<std::size_t>(i)] = f.value(Real(x)).to_std();
            double wgt = (i == 0 || i == m) ? 1.0 : (i % 2 != 0 ? 4.0 : 2.0);
            xw[static_cast<std::size_t>(i)] = wgt * hx / 3;
        }
        n0 = 0;
        for (int i = 0; i <= m; ++i) n0 += xw[static_cast<std::size_t>(i)] * std::norm(vals[static_cast<std::size_t>(i)]);

        const double front = 1.0 / std::sqrt(2 * M_PI * hbar);
        auto transform = [&](double p) {
            std::complex<double> acc = 0;
            for (int i = 0; i <= m; ++i) {
                double x = lo + width * i / m;
                acc += xw[static_cast<std::size_t>(i)] * vals[static_cast<std::size_t>(i)] *
                       std::polar(1.0, -p * x / hbar);
            }
            return acc * front;
        };

        // p grid resolving the 2 pi hbar / width interference scale
        int np = std::max<int>(512, static_cast<int>(trunc * width / (M_PI * hbar) * 16));
        if (np % 2 != 0) ++np;
        double hp = 2 * trunc / np;
        mass = m1 = m2 = 0;
        for (int i = 0; i <= np; ++i) {
            double p = -trunc + hp * i;
            double wgt = (i == 0 || i == np) ? 1.0 : (i % 2 != 0 ? 4.0 : 2.0);
            double d = std::norm(transform(p)) * wgt * hp / 3;
            mass += d;
            m1 += d * p;
            m2 += d * p * p;
        }
        if (n0 - mass <= 1e-8 * n0 || trunc >= trunc_cap) break;
        trunc *= 2;
    }
    MomentumStats out;
    out.method = StatsMethod::SpectralQuadrature;
    out.truncation = trunc;
    double mean = m1 / mass;
    double var = m2 / mass - mean * mean;
    out.p_mean = mean;
    out.p_std = var > 0 ? std::sqrt(var) : 0.0;
    return out;
}

}  // namespace

MomentumStats momentum_stats(const SlitFunction& f, const StatsOptions& opts) {
    PrecisionScope scope(f.precision_digits);
    const Real hbar(f.cfg.hbar);
    const Real lo(f.cfg.slit_lo()), hi(f.cfg.slit_hi());

    Real peak = slit_max_abs(f);
    Real edge = abs(f.value(lo));
    Real other = abs(f.value(hi));
    if (other > edge) edge = other;
    if (!(edge < Real(opts.boundary_tol) * peak)) {
        if (!opts.allow_spectral_fallback)
            throw SolveError(SolveErrorKind::BoundaryJump,
                             "wave does not vanish at the slit edges");
        return spectral_stats(f);
    }

    auto breaks = quad::make_breaks(lo, hi, f.seams);
    quad::Options opt;
    opt.rel_tol = Real(1e-10);
    opt.abs_tol = Real(1e-24);
    Real n0 = quad::integrate_panels([&](const Real& x) -> Real { return norm_sq(f.value(x)); }, breaks,
                                     opt);
    const Real pscale(f.cfg.p_max);
    quad::Options opt1 = opt;
    opt1.abs_tol = Real(1e-12) * n0 * pscale;
    Real p1 = quad::integrate_panels(
        [&](const Real& x) -> Real { return (conj(f.value(x)) * f.derivative(x)).im; }, breaks,
        opt1);
    quad::Options opt2 = opt;
    opt2.abs_tol = Real(1e-12) * n0 * pscale * pscale;
    Real p2 = quad::integrate_panels(
        [&](const Real& x) -> Real { return norm_sq(f.derivative(x)); }, breaks, opt2);

    MomentumStats out;
    out.method = StatsMethod::PositionDerivative;
    Real mean = hbar * p1 / n0;
    Real msq = hbar * hbar * p2 / n0;
    Real var = msq - mean * mean;
    out.p_mean = to_double(mean);
    out.p_std = to_double(var > 0 ? sqrt(var) : Real(0));
    return out;
}

PositionStats position_stats(const SlitFunction& f) {
    PrecisionScope scope(f.precision_digits);
    auto breaks = quad::make_breaks(Real(f.cfg.slit_lo()), Real(f.cfg.slit_hi()), f.seams);
    quad::Options opt;
    opt.rel_tol = Real(1e-10);
    opt.abs_tol = Real(1e-24);
    Real n0 = quad::integrate_panels([&](const Real& x) -> Real { return norm_sq(f.value(x)); }, breaks,
                                     opt);
    Real x1 = quad::integrate_panels(
        [&](const Real& x) -> Real { return norm_sq(f.value(x)) * x; }, breaks, opt);
    Real x2 = quad::integrate_panels(
        [&](const Real& x) -> Real { return norm_sq(f.value(x)) * x * x; }, breaks, opt);
    PositionStats out;
    Real mean = x1 / n0;
    Real var = x2 / n0 - mean * mean;
    out.x_mean = to_double(mean);
    out.x_std = to_double(var > 0 ? sqrt(var) : Real(0));
    return out;
}

int zero_crossings(const std::function<double(double)>& f, double lo, double hi) {
    int prev_count = -1;
    for (int n = 1024; n <= (1 << 20); n *= 2) {
        int count = 0;
        int last_sign = 0;
        for (int i = 0; i <= n; ++i) {
            double v = f(lo + (hi - lo) * i / n);
            int s = v > 0.0 ? 1 : (v < 0.0 ? -1 : 0);
            if (s == 0) continue;
            if (last_sign != 0 && s != last_sign) ++count;
            last_sign = s;
        }
        if (count == prev_count) return count;
        prev_count = count;
    }
    return prev_count;
}

namespace {

// Crossings of one part of a complex-valued field, with values far below the
// field magnitude treated as zero so an exactly-real field does not count
// rounding noise in its imaginary part.
int part_crossings(const std::function<std::complex<double>(double)>& f, Part part, double lo,
                   double hi) {
    double scale = 0.0;
    const int samples = 1024;
    for (int i = 0; i <= samples; ++i)
        scale = std::max(scale, std::abs(f(lo + (hi - lo) * i / samples)));
    double floor = 1e-12 * scale;
    return zero_crossings(
        [&](double x) {
            auto v = f(x);
            double part_val = part == Part::Real ? v.real() : v.imag();
            return std::abs(part_val) <= floor ? 0.0 : part_val;
        },
        lo, hi);
}

}  // namespace

int zero_crossings(const WaveField& w, Part part, double lo, double hi) {
    return part_crossings([&](double x) { return w.position(x); }, part, lo, hi);
}

int zero_crossings(const EmergingWave& e, Part part, double lo, double hi) {
    return part_crossings([&](double x) { return e.value(x); }, part, lo, hi);
}

int interior_peak_count(const std::function<double(double)>& f, double lo, double hi) {
    int prev_count = -1;
    for (int n = 512; n <= (1 << 16); n *= 2) {
        std::vector<double> v(static_cast<std::size_t>(n) + 1);
        for (int i = 0; i <= n; ++i) v[static_cast<std::size_t>(i)] = f(lo + (hi - lo) * i / n);
        int count = 0;
        for (int i = 1; i < n; ++i)
            if (v[static_cast<std::size_t>(i)] > v[static_cast<std::size_t>(i - 1)] &&
                v[static_cast<std::size_t>(i)] > v[static_cast<std::size_t>(i + 1)])
                ++count;
        if (count == prev_count) return count;
        prev_count = count;
    }
    return prev_count;
}

}  // namespace superosc
