#pragma once

#include "superosc/precision.hpp"
#include "superosc/solver.hpp"
#include "superosc/types.hpp"

#include <complex>
#include <functional>
#include <vector>

namespace superosc {

enum class Normalization { Raw, UnitNorm };

/// Evaluable band-limited wave function psi(x) = (2 pi hbar)^{-1/2} *
/// sum_k lambda_k chi_k(x), with psi_hat supported on [-p_max, p_max].
/// Evaluation happens at the precision the multipliers were solved at.
struct WaveField {
    PhysicalConfig cfg;
    ConstraintSet cs;
    std::vector<Complex> lambdas;
    unsigned precision_digits = kBaseDigits;
    Normalization normalization = Normalization::Raw;
    Real norm_sq_hp{0};  // Gram-identity norm^2 of the raw field

    Complex position_hp(const Real& x) const;
    Complex momentum_hp(const Real& p) const;          // exactly 0 outside the band
    Complex position_derivative_hp(const Real& x) const;

    std::complex<double> position(double x) const;
    std::complex<double> momentum(double p) const;
};

WaveField make_wavefield(const PhysicalConfig& cfg, const ConstraintSet& cs,
                         const Solution& sol, Normalization norm = Normalization::Raw);

std::complex<double> eval_position(const WaveField& w, double x);
std::complex<double> eval_momentum(const WaveField& w, double p);

/// n-th derivative of psi at x via band quadrature of (ip/hbar)^n psi_hat
/// e^{ipx/hbar}; independent of the closed-form kernel derivatives. n <= 30.
std::complex<double> derivative(const WaveField& w, double x, int n);

/// Slit-truncated, renormalized wave Psi = P_s psi / ||P_s psi||.
struct EmergingWave {
    WaveField source;
    Real slit_norm_hp{0};     // ||P_s psi||
    double renorm_factor = 1.0;  // 1 / ||P_s psi||

    Complex value_hp(const Real& x) const;       // 0 outside the slit
    Complex derivative_hp(const Real& x) const;  // d/dx inside the slit
    std::complex<double> value(double x) const;
};

/// Throws SolveError{ZeroInSlit} when the slit norm is numerically zero.
EmergingWave project_slit(const WaveField& w);

/// Minimum-momentum-uncertainty profile on the slit for a chosen momentum
/// expectation pbar: Phi(x) = sqrt(2/L) cos(pi (x-c)/L) e^{i (x-c) pbar/hbar},
/// zero outside. Global phase fixed so Phi at the slit centre is real positive.
struct IdealTemplate {
    PhysicalConfig cfg;
    double pbar = 0.0;

    Complex value_hp(const Real& x) const;
    Complex derivative_hp(const Real& x, int m) const;  // closed form, m <= 30
    std::complex<double> value(double x) const;
    std::complex<double> derivative(double x, int m) const;

    /// Closed-form statistics.
    double p_mean_exact() const { return pbar; }
    double p_std_exact() const;
    double x_std_exact() const;
};

IdealTemplate ideal_template(const PhysicalConfig& cfg, double pbar);

/// A slit-supported wave presented to the statistics routines: values and
/// x-derivatives on the slit plus quadrature seams (constraint nodes).
struct SlitFunction {
    PhysicalConfig cfg;
    std::function<Complex(const Real&)> value;
    std::function<Complex(const Real&)> derivative;
    std::vector<double> seams;
    unsigned precision_digits = kBaseDigits;
};

SlitFunction as_slit_function(const EmergingWave& e);
SlitFunction as_slit_function(const IdealTemplate& t);

enum class StatsMethod { PositionDerivative, SpectralQuadrature };

struct MomentumStats {
    double p_mean = 0.0;
    double p_std = 0.0;
    StatsMethod method = StatsMethod::PositionDerivative;
    double truncation = 0.0;  // band used by the spectral fallback, 0 otherwise
};

struct StatsOptions {
    bool allow_spectral_fallback = true;
    double boundary_tol = 1e-6;  // |Psi(edge)| < tol * max|Psi| gates the derivative method
};

/// <p> = hbar Im at the slit of conj(Psi) Psi', <p^2> = hbar^2 |Psi'|^2 when the
/// wave vanishes at the slit edges; otherwise the spectral fallback computes a
/// truncated-band estimate from Psi_hat and records the truncation.
/// Throws SolveError{BoundaryJump} when the edge test fails and the fallback
/// is disabled.
MomentumStats momentum_stats(const SlitFunction& f, const StatsOptions& opts = {});

struct PositionStats {
    double x_mean = 0.0;
    double x_std = 0.0;
};

PositionStats position_stats(const SlitFunction& f);

enum class Part { Real, Imag };

/// Sign changes of the chosen part over [lo, hi], on a dense grid refined
/// until two successive refinements agree.
int zero_crossings(const std::function<double(double)>& f, double lo, double hi);
int zero_crossings(const WaveField& w, Part part, double lo, double hi);
int zero_crossings(const EmergingWave& e, Part part, double lo, double hi);

/// Strict local maxima of f on the open interval, grid-refined until stable.
int interior_peak_count(const std::function<double(double)>& f, double lo, double hi);

}  // namespace superosc
