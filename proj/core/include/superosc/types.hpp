#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace superosc {

/// Thrown when user-facing input (config file, constraint data) fails
/// validation. The message names the offending field.
class ValidationError : public std::invalid_argument {
public:
    ValidationError(std::string field, const std::string& what)
        : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

enum class SolveErrorKind {
    PrecisionExhausted,
    NotPositiveDefinite,
    NoConvergence,
    DenominatorVanishing,
    ZeroInSlit,
    BoundaryJump,
};

inline const char* name_of(SolveErrorKind k) {
    switch (k) {
        case SolveErrorKind::PrecisionExhausted: return "PrecisionExhausted";
        case SolveErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
        case SolveErrorKind::NoConvergence: return "NoConvergence";
        case SolveErrorKind::DenominatorVanishing: return "DenominatorVanishing";
        case SolveErrorKind::ZeroInSlit: return "ZeroInSlit";
        case SolveErrorKind::BoundaryJump: return "BoundaryJump";
    }
    return "Unknown";
}

/// Numerical failure with a machine-readable kind.
class SolveError : public std::runtime_error {
public:
    SolveError(SolveErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(name_of(kind)) + ": " + what), kind_(kind) {}
    SolveErrorKind kind() const { return kind_; }

private:
    SolveErrorKind kind_;
};

/// Units and geometry of the setup: hbar fixes the action scale, p_max the
/// momentum band, and the slit interval is [center - half_width, center + half_width].
struct PhysicalConfig {
    double hbar = 1.0;
    double p_max = 1.0;
    double slit_half_width = 1.0;
    double slit_center = 0.0;

    double slit_lo() const { return slit_center - slit_half_width; }
    double slit_hi() const { return slit_center + slit_half_width; }
    double slit_width() const { return 2.0 * slit_half_width; }

    /// Shortest wavelength of any band component, 2*pi*hbar/p_max.
    double lambda_min() const;

    void validate() const;
};

enum class Family {
    PointAmplitude,    // prescribe psi(x_k) = a_k
    DerivativeAtPoint, // prescribe psi^(k-1)(x0) = a_k
    IntervalArea,      // prescribe integral of psi over [x_k, x_{k+1}] = a_k
};

const char* name_of(Family f);
Family family_from_name(const std::string& name);

/// One family of linear constraints: node geometry plus target values a_k.
///
/// Node layout per family:
///   PointAmplitude    - N nodes, the points x_k
///   DerivativeAtPoint - 1 node, the anchor; orders 0..N-1 are implied
///   IntervalArea      - N+1 nodes, the partition endpoints
struct ConstraintSet {
    Family family = Family::PointAmplitude;
    std::vector<double> nodes;
    std::vector<std::complex<double>> values;

    int size() const { return static_cast<int>(values.size()); }

    /// Validated factories. Throw ValidationError on bad input.
    static ConstraintSet point_amplitudes(const PhysicalConfig& cfg,
                                          std::vector<double> nodes,
                                          std::vector<std::complex<double>> values);
    static ConstraintSet derivatives_at(const PhysicalConfig& cfg, double anchor,
                                        std::vector<std::complex<double>> values);
    static ConstraintSet interval_areas(const PhysicalConfig& cfg,
                                        std::vector<double> endpoints,
                                        std::vector<std::complex<double>> values);
};

/// Returns a copy of `cs` with one constraint appended as index N+1.
/// The parameter is the new node (PointAmplitude), ignored (DerivativeAtPoint,
/// the next derivative order is implied), or the new partition endpoint
/// (IntervalArea). The appended kernel keeps the last index even when its
/// node falls between existing ones, so node order is preserved as given.
ConstraintSet appended(const PhysicalConfig& cfg, const ConstraintSet& cs,
                       double param, std::complex<double> value);

}  // namespace superosc
