#pragma once

#include "superosc/gram.hpp"
#include "superosc/precision.hpp"
#include "superosc/types.hpp"

#include <complex>
#include <vector>

namespace superosc {

struct SolveOptions {
    double tol = 1e-10;          // relative residual demanded of the solve
    unsigned start_digits = kBaseDigits;
    unsigned max_digits = 4096;  // escalation cap
};

/// Lagrange multipliers for T lambda = a, plus diagnostics. The multipliers
/// are kept at the precision the solve finally ran at; downstream evaluation
/// of the wave function needs them at that precision because of the strong
/// cancellations in the kernel sums.
struct Solution {
    std::vector<Complex> lambdas;
    Real norm_sq_hp{0};              // a^dag lambda at full precision
    double norm_sq = 0.0;            // Re(a^dag lambda)
    double residual = 0.0;           // ||T lambda - a||_2 / ||a||_2
    double condition_estimate = 1.0; // pivot-ratio proxy
    unsigned precision_digits_used = kBaseDigits;
};

/// Solve T lambda = a under the precision-escalation contract: factor and
/// solve at the Gram's precision; while the relative residual exceeds `tol`,
/// re-assemble at doubled digit count up to `max_digits`.
/// Throws SolveError{PrecisionExhausted} if the cap is reached with the
/// residual still above tol, SolveError{NotPositiveDefinite} if a pivot
/// fails, std::invalid_argument for a zero right-hand side.
Solution solve(const GramMatrix& gram, const std::vector<std::complex<double>>& a,
               const SolveOptions& opts = {});

/// Re(a^dag lambda) = a^dag T^-1 a; checks the imaginary part is noise.
double norm_squared(const Solution& sol, const std::vector<std::complex<double>>& a);

/// Value c the (N+1)-st constraint functional takes on the solved N-constraint
/// wave: c = sum_r lambda_r * T_{N+1,r} over the extended kernel set.
/// Choosing a_{N+1} = c leaves the solution unchanged.
std::complex<double> successive_constraint_value(const PhysicalConfig& cfg,
                                                 const ConstraintSet& cs,
                                                 const Solution& sol,
                                                 double new_param);

struct EigenPair {
    double eigenvalue = 0.0;
    Real eigenvalue_hp{0};
    std::vector<Complex> vector;  // unit 2-norm
};

struct ExtremeResult {
    EigenPair pair;
    bool degenerate = false;       // two smallest eigenvalues within 1e-12 relative
    double second_eigenvalue = 0.0;
};

/// Smallest eigenvalue and eigenvector of T by inverse power iteration from
/// the fixed seed e_1, reusing the LDL^H factorization. Iterates until
/// ||T q - nu q|| <= 1e-12 ||T||_F. If the factorization fails at the Gram's
/// precision the matrix is re-assembled at doubled digits (same policy as
/// solve) before giving up.
ExtremeResult extreme_coefficients(const GramMatrix& gram, unsigned max_digits = 4096);

/// Minimum-norm problem with N linear and M quadratic constraints. The
/// quadratic kernels Xi_k reuse the constraint-family representation; their
/// target values b_k live in `quadratic.values`.
struct QuadraticProblem {
    ConstraintSet linear;
    ConstraintSet quadratic;            // M = quadratic.size(); may be empty
    std::vector<Complex> lambdas;       // filled by solve_quadratic
    std::vector<Complex> mus;           // filled by solve_quadratic
    double norm_sq = 0.0;               // integral of |psi_hat|^2 at the solution
    double residual = 0.0;              // final constraint residual
    unsigned precision_digits_used = kBaseDigits;
};

/// Damped Newton on the joint constraint residual, starting from the linear
/// solution with all mu = 0. With M = 0 this is exactly the linear solve.
/// Throws SolveError{NoConvergence} or SolveError{DenominatorVanishing}.
QuadraticProblem solve_quadratic(QuadraticProblem qp, const PhysicalConfig& cfg,
                                 double tol = 1e-8, int max_iter = 60,
                                 const SolveOptions& linear_opts = {});

}  // namespace superosc
