#include "superosc/solver.hpp"

#include "superosc/kernels.hpp"
#include "superosc/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

namespace superosc {

namespace {

std::vector<Complex> to_hp(const std::vector<std::complex<double>>& a) {
    std::vector<Complex> out;
    out.reserve(a.size());
    for (const auto& z : a) out.emplace_back(z);
    return out;
}

Real vec_norm(const std::vector<Complex>& v) {
    Real s{0};
    for (const auto& z : v) s += norm_sq(z);
    return sqrt(s);
}

Complex dot_conj(const std::vector<Complex>& a, const std::vector<Complex>& b) {
    Complex s{};
    for (std::size_t i = 0; i < a.size(); ++i) s += conj(a[i]) * b[i];
    return s;
}

Real frobenius(const GramMatrix& g) {
    Real s{0};
    for (const auto& z : g.entries) s += norm_sq(z);
    return sqrt(s);
}

unsigned next_digits(unsigned digits, unsigned max_digits) {
    return std::min(digits * 2, max_digits);
}

}  // namespace

Solution solve(const GramMatrix& gram, const std::vector<std::complex<double>>& a,
               const SolveOptions& opts) {
    if (static_cast<int>(a.size()) != gram.n)
        throw std::invalid_argument("solve: right-hand side size does not match the Gram matrix");
    double a_norm_sq = 0;
    for (const auto& z : a) a_norm_sq += std::norm(z);
    if (!(a_norm_sq > 0)) throw std::invalid_argument("solve: zero right-hand side");

    GramMatrix work = gram;
    unsigned digits = gram.precision_digits;
    for (;;) {
        bool at_cap = digits >= opts.max_digits;
        PrecisionScope scope(digits);
        LdlFactor factor;
        bool factored = false;
        try {
            factor = ldl_factor(work);
            factored = true;
        } catch (const SolveError& e) {
            // a positive-definite Gram can lose definiteness to rounding; more
            // digits restore it, so escalate before reporting
            if (at_cap) throw;
        }
        if (factored) {
            auto ah = to_hp(a);
            auto lambda = factor.solve(ah);
            auto t = multiply(work, lambda);
            Real rnum{0}, rden{0};
            for (std::size_t i = 0; i < ah.size(); ++i) {
                rnum += norm_sq(t[i] - ah[i]);
                rden += norm_sq(ah[i]);
            }
            Real rel = sqrt(rnum / rden);
            if (rel <= Real(opts.tol)) {
                Solution sol;
                sol.lambdas = std::move(lambda);
                Complex nh = dot_conj(ah, sol.lambdas);
                Real scale = sqrt(a_norm_sq) * vec_norm(sol.lambdas);
                if (abs(nh.im) > Real(opts.tol) * scale)
                    throw std::runtime_error(
                        "solve: norm a^dag lambda has a non-negligible imaginary part");
                sol.norm_sq_hp = nh.re;
                sol.norm_sq = to_double(nh.re);
                sol.residual = to_double(rel);
                sol.condition_estimate = factor.pivot_ratio();
                sol.precision_digits_used = digits;
                return sol;
            }
            if (at_cap) {
                char msg[128];
                std::snprintf(msg, sizeof msg, "residual %.3e > tol %.3e at %u digits",
                              to_double(rel), opts.tol, digits);
                throw SolveError(SolveErrorKind::PrecisionExhausted, msg);
            }
        }
        digits = next_digits(digits, opts.max_digits);
        work = assemble_gram(gram.cfg, gram.cs, digits);
    }
}

double norm_squared(const Solution& sol, const std::vector<std::complex<double>>& a) {
    if (a.size() != sol.lambdas.size())
        throw std::invalid_argument("norm_squared: dimension mismatch");
    PrecisionScope scope(sol.precision_digits_used);
    Complex nh = dot_conj(to_hp(a), sol.lambdas);
    Real scale = vec_norm(to_hp(a)) * vec_norm(sol.lambdas);
    if (scale > 0 && abs(nh.im) > Real(1e-8) * scale)
        throw std::runtime_error("norm_squared: imaginary part above tolerance");
    return to_double(nh.re);
}

std::complex<double> successive_constraint_value(const PhysicalConfig& cfg,
                                                 const ConstraintSet& cs, const Solution& sol,
                                                 double new_param) {
    ConstraintSet ext = appended(cfg, cs, new_param, {0.0, 0.0});
    const int n = cs.size();
    PrecisionScope scope(sol.precision_digits_used);
    Complex c{};
    for (int r = 1; r <= n; ++r)
        c += gram_entry(cfg, ext, n + 1, r) * sol.lambdas[static_cast<std::size_t>(r - 1)];
    return c.to_std();
}

namespace {

struct FactorAtPrecision {
    GramMatrix gram;
    LdlFactor factor;
    unsigned digits;
};

// Factor, escalating on lost definiteness exactly like solve().
FactorAtPrecision factor_with_escalation(const GramMatrix& gram, unsigned max_digits) {
    GramMatrix work = gram;
    unsigned digits = gram.precision_digits;
    for (;;) {
        PrecisionScope scope(digits);
        try {
            LdlFactor f = ldl_factor(work);
            return {std::move(work), std::move(f), digits};
        } catch (const SolveError&) {
            if (digits >= max_digits) throw;
        }
        digits = next_digits(digits, max_digits);
        work = assemble_gram(gram.cfg, gram.cs, digits);
    }
}

}  // namespace

ExtremeResult extreme_coefficients(const GramMatrix& gram, unsigned max_digits) {
    auto [work, factor, digits] = factor_with_escalation(gram, max_digits);
    PrecisionScope scope(digits);
    const int n = work.n;
    const Real fro = frobenius(work);
    const Real target = Real(1e-12) * fro;

    auto rayleigh_step = [&](std::vector<Complex>& v, const std::vector<Complex>* deflate)
        -> std::pair<Real, Real> {  // (eigenvalue, residual)
        std::vector<Complex> w = factor.solve(v);
        if (deflate) {
            Complex overlap = dot_conj(*deflate, w);
            for (std::size_t i = 0; i < w.size(); ++i) w[i] -= (*deflate)[i] * overlap;
        }
        Real nw = vec_norm(w);
        for (auto& z : w) z /= nw;
        v = std::move(w);
        auto tv = multiply(work, v);
        Real nu = dot_conj(v, tv).re;
        Real res{0};
        if (deflate) {
            Complex overlap = dot_conj(*deflate, tv);
            for (std::size_t i = 0; i < tv.size(); ++i) tv[i] -= (*deflate)[i] * overlap;
        }
        for (std::size_t i = 0; i < tv.size(); ++i) res += norm_sq(tv[i] - v[i] * nu);
        return {nu, sqrt(res)};
    };

    // fixed seed keeps the returned eigenvector deterministic
    std::vector<Complex> q(n, Complex{});
    q[0] = Complex(Real(1));
    Real nu{0};
    bool converged = false;
    for (int iter = 0; iter < 500; ++iter) {
        auto [val, res] = rayleigh_step(q, nullptr);
        nu = val;
        if (res <= target) {
            converged = true;
            break;
        }
    }
    if (!converged)
        throw SolveError(SolveErrorKind::NoConvergence,
                         "inverse iteration did not reach the residual target");

    ExtremeResult out;
    out.pair.eigenvalue_hp = nu;
    out.pair.eigenvalue = to_double(nu);
    out.pair.vector = q;

    if (n >= 2) {
        std::vector<Complex> v(n, Complex{});
        v[1] = Complex(Real(1));
        Complex overlap = dot_conj(q, v);
        for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] -= q[static_cast<std::size_t>(i)] * overlap;
        Real nv = vec_norm(v);
        if (nv > 0) {
            for (auto& z : v) z /= nv;
            Real nu2{0};
            for (int iter = 0; iter < 200; ++iter) {
                auto [val, res] = rayleigh_step(v, &q);
                nu2 = val;
                if (res <= target) break;
            }
            out.second_eigenvalue = to_double(nu2);
            if (abs(nu2 - nu) <= Real(1e-12) * std::max(abs(nu), abs(nu2)))
                out.degenerate = true;
        }
    }
    return out;
}

namespace {

// Dense real linear solve with partial pivoting, for the small Newton systems.
std::vector<double> solve_dense(std::vector<double> a, std::vector<double> b) {
    const int n = static_cast<int>(b.size());
    for (int j = 0; j < n; ++j) {
        int piv = j;
        for (int i = j + 1; i < n; ++i)
            if (std::abs(a[static_cast<std::size_t>(i) * n + j]) >
                std::abs(a[static_cast<std::size_t>(piv) * n + j]))
                piv = i;
        if (piv != j) {
            for (int t = 0; t < n; ++t)
                std::swap(a[static_cast<std::size_t>(j) * n + t], a[static_cast<std::size_t>(piv) * n + t]);
            std::swap(b[static_cast<std::size_t>(j)], b[static_cast<std::size_t>(piv)]);
        }
        double d = a[static_cast<std::size_t>(j) * n + j];
        if (d == 0.0)
            throw SolveError(SolveErrorKind::NoConvergence, "singular Newton system");
        for (int i = j + 1; i < n; ++i) {
            double m = a[static_cast<std::size_t>(i) * n + j] / d;
            if (m == 0.0) continue;
            for (int t = j; t < n; ++t)
                a[static_cast<std::size_t>(i) * n + t] -= m * a[static_cast<std::size_t>(j) * n + t];
            b[static_cast<std::size_t>(i)] -= m * b[static_cast<std::size_t>(j)];
        }
    }
    std::vector<double> x(static_cast<std::size_t>(n));
    for (int i = n - 1; i >= 0; --i) {
        double s = b[static_cast<std::size_t>(i)];
        for (int t = i + 1; t < n; ++t)
            s -= a[static_cast<std::size_t>(i) * n + t] * x[static_cast<std::size_t>(t)];
        x[static_cast<std::size_t>(i)] = s / a[static_cast<std::size_t>(i) * n + i];
    }
    return x;
}

}  // namespace

QuadraticProblem solve_quadratic(QuadraticProblem qp, const PhysicalConfig& cfg, double tol,
                                 int max_iter, const SolveOptions& linear_opts) {
    const int n = qp.linear.size();
    const int m = qp.quadratic.size();

    GramMatrix gram = assemble_gram(cfg, qp.linear, linear_opts.start_digits);
    Solution lin = solve(gram, qp.linear.values, linear_opts);

    if (m == 0) {
        qp.lambdas = lin.lambdas;
        qp.mus.clear();
        qp.norm_sq = lin.norm_sq;
        qp.residual = lin.residual;
        qp.precision_digits_used = lin.precision_digits_used;
        return qp;
    }

    const unsigned digits = std::max<unsigned>(kBaseDigits, lin.precision_digits_used);
    PrecisionScope scope(digits);
    const Real pmax(cfg.p_max);
    const Real hbar(cfg.hbar);
    const Real root = sqrt(2 * real_pi() * hbar);  // sqrt(2 pi hbar)

    const int dim = 2 * (n + m);
    std::vector<double> z(static_cast<std::size_t>(dim), 0.0);
    for (int k = 0; k < n; ++k) {
        z[static_cast<std::size_t>(2 * k)] = to_double(lin.lambdas[static_cast<std::size_t>(k)].re);
        z[static_cast<std::size_t>(2 * k + 1)] = to_double(lin.lambdas[static_cast<std::size_t>(k)].im);
    }

    double target_scale = 1.0;
    {
        double s = 0.0;
        for (const auto& a : qp.linear.values) s += std::norm(a);
        for (const auto& b : qp.quadratic.values) s += std::norm(b);
        target_scale = std::max(1.0, std::sqrt(s));
    }

    auto psi_hat = [&](const std::vector<double>& zz, const Real& p) {
        Complex num{};
        for (int k = 0; k < n; ++k) {
            Complex lk{Real(zz[static_cast<std::size_t>(2 * k)]), Real(zz[static_cast<std::size_t>(2 * k + 1)])};
            num += lk * kernel_momentum(cfg, qp.linear, k + 1, p);
        }
        Complex den(Real(1));
        for (int k = 0; k < m; ++k) {
            Complex mk{Real(zz[static_cast<std::size_t>(2 * (n + k))]),
                       Real(zz[static_cast<std::size_t>(2 * (n + k) + 1)])};
            den += mk * kernel_momentum(cfg, qp.quadratic, k + 1, p) / root;
        }
        return (num / root) / den;
    };

    // Smallest |denominator| over the band and where it happens. Iterates are
    // kept away from the pole: integrals degenerate long before it is reached.
    auto denominator_floor = [&](const std::vector<double>& zz, double& where) {
        const int samples = 2048;
        double best = std::numeric_limits<double>::infinity();
        for (int i = 0; i <= samples; ++i) {
            Real p = pmax * Real(2 * i - samples) / samples;
            Complex den(Real(1));
            for (int k = 0; k < m; ++k) {
                Complex mk{Real(zz[static_cast<std::size_t>(2 * (n + k))]),
                           Real(zz[static_cast<std::size_t>(2 * (n + k) + 1)])};
                den += mk * kernel_momentum(cfg, qp.quadratic, k + 1, p) / root;
            }
            double d = to_double(abs(den));
            if (d < best) {
                best = d;
                where = to_double(p);
            }
        }
        return best;
    };
    const double den_min_allowed = 0.02;
    auto check_denominator = [&](const std::vector<double>& zz) {
        double where = 0.0;
        if (denominator_floor(zz, where) < den_min_allowed)
            throw SolveError(SolveErrorKind::DenominatorVanishing,
                             "denominator vanishes near p = " + std::to_string(where));
    };

    quad::Options qopt;
    qopt.rel_tol = Real(1e-12);
    qopt.abs_tol = Real(1e-13) * Real(target_scale);
    std::vector<Real> breaks = quad::make_breaks(-pmax, pmax, {0.0});

    auto residual_map = [&](const std::vector<double>& zz) {
        check_denominator(zz);
        std::vector<double> f(static_cast<std::size_t>(dim));
        for (int k = 0; k < n; ++k) {
            Complex val = quad::integrate_panels(
                [&](const Real& p) {
                    return conj(kernel_momentum(cfg, qp.linear, k + 1, p)) * psi_hat(zz, p) / root;
                },
                breaks, qopt);
            std::complex<double> d = val.to_std() - qp.linear.values[static_cast<std::size_t>(k)];
            f[static_cast<std::size_t>(2 * k)] = d.real();
            f[static_cast<std::size_t>(2 * k + 1)] = d.imag();
        }
        for (int k = 0; k < m; ++k) {
            Complex val = quad::integrate_panels(
                [&](const Real& p) {
                    return norm_sq(psi_hat(zz, p)) *
                           conj(kernel_momentum(cfg, qp.quadratic, k + 1, p)) / root;
                },
                breaks, qopt);
            std::complex<double> d = val.to_std() - qp.quadratic.values[static_cast<std::size_t>(k)];
            f[static_cast<std::size_t>(2 * (n + k))] = d.real();
            f[static_cast<std::size_t>(2 * (n + k) + 1)] = d.imag();
        }
        return f;
    };

    auto norm_of = [](const std::vector<double>& v) {
        double s = 0.0;
        for (double x : v) s += x * x;
        return std::sqrt(s);
    };

    std::vector<double> f = residual_map(z);
    double fn = norm_of(f);
    int iter = 0;
    while (fn > tol * target_scale) {
        if (iter++ >= max_iter)
            throw SolveError(SolveErrorKind::NoConvergence,
                             "quadratic solver: residual " + std::to_string(fn) + " after " +
                                 std::to_string(max_iter) + " iterations");
        // numerical Jacobian, central differences
        std::vector<double> jac(static_cast<std::size_t>(dim) * dim);
        for (int j = 0; j < dim; ++j) {
            double h = 1e-6 * std::max(1.0, std::abs(z[static_cast<std::size_t>(j)]));
            std::vector<double> zp = z, zm = z;
            zp[static_cast<std::size_t>(j)] += h;
            zm[static_cast<std::size_t>(j)] -= h;
            std::vector<double> fp = residual_map(zp);
            std::vector<double> fm = residual_map(zm);
            for (int i = 0; i < dim; ++i)
                jac[static_cast<std::size_t>(i) * dim + j] =
                    (fp[static_cast<std::size_t>(i)] - fm[static_cast<std::size_t>(i)]) / (2 * h);
        }
        // Gauss-Newton step through the regularized normal equations; real
        // kernels leave structurally zero residual rows, so a plain solve of
        // J dz = -F can hit a singular system
        std::vector<double> jtj(static_cast<std::size_t>(dim) * dim, 0.0);
        std::vector<double> rhs(static_cast<std::size_t>(dim), 0.0);
        for (int i = 0; i < dim; ++i) {
            for (int j = 0; j < dim; ++j) {
                double s = 0;
                for (int t = 0; t < dim; ++t)
                    s += jac[static_cast<std::size_t>(t) * dim + i] *
                         jac[static_cast<std::size_t>(t) * dim + j];
                jtj[static_cast<std::size_t>(i) * dim + j] = s;
            }
            double r = 0;
            for (int t = 0; t < dim; ++t)
                r -= jac[static_cast<std::size_t>(t) * dim + i] * f[static_cast<std::size_t>(t)];
            rhs[static_cast<std::size_t>(i)] = r;
        }
        double trace = 0;
        for (int i = 0; i < dim; ++i) trace += jtj[static_cast<std::size_t>(i) * dim + i];
        double tau = 1e-12 * std::max(trace / dim, 1e-30);
        for (int i = 0; i < dim; ++i) jtj[static_cast<std::size_t>(i) * dim + i] += tau;
        std::vector<double> dz = solve_dense(std::move(jtj), std::move(rhs));

        double alpha = 1.0;
        bool accepted = false;
        bool pole_blocked = false;
        std::string pole_what;
        while (alpha > 1e-12) {
            std::vector<double> zt = z;
            for (int i = 0; i < dim; ++i)
                zt[static_cast<std::size_t>(i)] += alpha * dz[static_cast<std::size_t>(i)];
            // trials near the denominator pole (or whose integrals degenerate
            // there) are rejected like any non-decreasing step
            bool usable = true;
            std::vector<double> ft;
            try {
                ft = residual_map(zt);
            } catch (const SolveError& e) {
                usable = false;
                pole_blocked = true;
                pole_what = e.what();
            } catch (const std::runtime_error&) {
                usable = false;
            }
            if (usable) {
                double ftn = norm_of(ft);
                if (ftn < fn * (1.0 - 1e-4 * alpha)) {
                    z = std::move(zt);
                    f = std::move(ft);
                    fn = ftn;
                    accepted = true;
                    break;
                }
            }
            alpha /= 2;
        }
        if (!accepted) {
            if (pole_blocked)
                throw SolveError(SolveErrorKind::DenominatorVanishing,
                                 "progress blocked by the denominator pole (" + pole_what + ")");
            throw SolveError(SolveErrorKind::NoConvergence,
                             "quadratic solver: damping failed to reduce the residual");
        }
    }

    qp.lambdas.clear();
    qp.mus.clear();
    for (int k = 0; k < n; ++k)
        qp.lambdas.emplace_back(Real(z[static_cast<std::size_t>(2 * k)]),
                                Real(z[static_cast<std::size_t>(2 * k + 1)]));
    for (int k = 0; k < m; ++k)
        qp.mus.emplace_back(Real(z[static_cast<std::size_t>(2 * (n + k))]),
                            Real(z[static_cast<std::size_t>(2 * (n + k) + 1)]));
    Real nsq = quad::integrate_panels(
        [&](const Real& p) { return norm_sq(psi_hat(z, p)); }, breaks, qopt);
    qp.norm_sq = to_double(nsq);
    qp.residual = fn / target_scale;
    qp.precision_digits_used = digits;
    return qp;
}

}  // namespace superosc
