#pragma once

#include "superosc/precision.hpp"
#include "superosc/types.hpp"

#include <vector>

namespace superosc {

/// Hermitian positive-definite Gram matrix of the constraint kernels,
/// together with the precision it was assembled at and the problem it came
/// from (so a solve can re-assemble at higher precision).
struct GramMatrix {
    PhysicalConfig cfg;
    ConstraintSet cs;
    unsigned precision_digits = kBaseDigits;
    int n = 0;
    std::vector<Complex> entries;  // row-major n x n

    const Complex& at(int k, int r) const { return entries[static_cast<std::size_t>(k) * n + r]; }
    Complex& at(int k, int r) { return entries[static_cast<std::size_t>(k) * n + r]; }
};

/// Assemble the Gram matrix at the given working precision. The upper
/// triangle is computed and mirror-conjugated so Hermiticity holds by
/// construction; diagonals are forced real.
GramMatrix assemble_gram(const PhysicalConfig& cfg, const ConstraintSet& cs,
                         unsigned digits = kBaseDigits);

/// Pivoted LDL^H factorization of a Hermitian positive-definite matrix:
/// P A P^T = L D L^H with unit lower L and real positive pivots D.
/// Diagonal pivoting makes loss of positive definiteness show up as a
/// non-positive pivot.
struct LdlFactor {
    int n = 0;
    std::vector<Complex> lower;  // row-major; strictly lower part holds L
    std::vector<Real> d;         // pivots
    std::vector<int> perm;       // row/col permutation applied
    Real pivot_max{0};
    Real pivot_min{0};

    std::vector<Complex> solve(const std::vector<Complex>& rhs) const;
    double pivot_ratio() const { return to_double(pivot_max / pivot_min); }
};

/// Throws SolveError{NotPositiveDefinite} when a pivot is not strictly positive.
LdlFactor ldl_factor(const GramMatrix& g);

/// y = G x
std::vector<Complex> multiply(const GramMatrix& g, const std::vector<Complex>& x);

}  // namespace superosc
