#pragma once

#include "superosc/precision.hpp"
#include "superosc/types.hpp"

namespace superosc {

/// sinc(u) = sin(u)/u, sinc(0) = 1 (no factor of pi).
Real sinc(const Real& u);

/// m-th derivative of sinc at u, evaluated to the active working precision.
/// Near the removable singularity the Taylor series of the defining integral
/// is summed until the relative increment drops below the working epsilon;
/// away from it a stable downward recurrence in m is used.
Real sinc_derivative(int m, const Real& u);

/// Momentum-space constraint kernel chi_k(p), 1-based k.
///   PointAmplitude    exp(-i p x_k / hbar)
///   DerivativeAtPoint (-i p / hbar)^(k-1) exp(-i p x0 / hbar)
///   IntervalArea      closed form (x_{k+1}-x_k) sinc(p h/hbar) e^{-i p c/hbar},
///                     h/c the half-width/centre of the interval; the p->0
///                     limit is the interval length.
Complex kernel_momentum(const PhysicalConfig& cfg, const ConstraintSet& cs, int k, const Real& p);

/// Position-space kernel chi_k(x) = (2 pi hbar)^{-1/2} * integral of
/// chi_k(p) e^{i p x / hbar} over the band. Real-valued for all three
/// families (the momentum kernels are Hermitian-symmetric).
Real kernel_position(const PhysicalConfig& cfg, const ConstraintSet& cs, int k, const Real& x);

/// First x-derivative of kernel_position, closed form (feeds momentum
/// statistics of projected waves).
Real kernel_position_derivative(const PhysicalConfig& cfg, const ConstraintSet& cs, int k,
                                const Real& x);

/// Gram entry T_kr = (2 pi hbar)^{-1} * integral over the band of
/// conj(chi_k) chi_r. Closed forms for PointAmplitude and DerivativeAtPoint;
/// adaptive quadrature for IntervalArea at the working precision.
Complex gram_entry(const PhysicalConfig& cfg, const ConstraintSet& cs, int k, int r);

}  // namespace superosc
