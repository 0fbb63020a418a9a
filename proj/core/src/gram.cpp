#include "superosc/gram.hpp"

#include "superosc/kernels.hpp"

#include <utility>

namespace superosc {

GramMatrix assemble_gram(const PhysicalConfig& cfg, const ConstraintSet& cs, unsigned digits) {
    PrecisionScope scope(digits);
    GramMatrix g;
    g.cfg = cfg;
    g.cs = cs;
    g.precision_digits = digits;
    g.n = cs.size();
    g.entries.assign(static_cast<std::size_t>(g.n) * g.n, Complex{});
    for (int k = 0; k < g.n; ++k) {
        for (int r = k; r < g.n; ++r) {
            Complex v = gram_entry(cfg, cs, k + 1, r + 1);
            if (r == k) v.im = 0;  // diagonal of a Hermitian matrix
            g.at(k, r) = v;
            if (r != k) g.at(r, k) = conj(v);
        }
    }
    return g;
}

LdlFactor ldl_factor(const GramMatrix& g) {
    PrecisionScope scope(g.precision_digits);
    const int n = g.n;
    LdlFactor f;
    f.n = n;
    f.lower = g.entries;  // working copy; lower triangle is updated in place
    f.d.assign(n, Real(0));
    f.perm.resize(n);
    for (int i = 0; i < n; ++i) f.perm[i] = i;

    auto A = [&](int i, int j) -> Complex& {
        return f.lower[static_cast<std::size_t>(i) * n + j];
    };

    for (int j = 0; j < n; ++j) {
        // diagonal pivoting: bring the largest remaining diagonal up front
        int q = j;
        for (int i = j + 1; i < n; ++i)
            if (A(i, i).re > A(q, q).re) q = i;
        if (q != j) {
            std::swap(f.perm[j], f.perm[q]);
            for (int t = 0; t < n; ++t) std::swap(A(j, t), A(q, t));
            for (int t = 0; t < n; ++t) std::swap(A(t, j), A(t, q));
        }
        Real piv = A(j, j).re;
        if (!(piv > 0))
            throw SolveError(SolveErrorKind::NotPositiveDefinite,
                             "pivot " + std::to_string(j) + " is not positive (" +
                                 std::to_string(to_double(piv)) + ")");
        f.d[j] = piv;
        for (int i = j + 1; i < n; ++i) A(i, j) /= piv;
        // rank-1 update of the full active block keeps it Hermitian, which the
        // row/column pivot swaps above rely on
        for (int i = j + 1; i < n; ++i) {
            const Complex lij = A(i, j);
            for (int t = j + 1; t < n; ++t) A(i, t) -= lij * piv * conj(A(t, j));
        }
    }
    f.pivot_max = f.d[0];
    f.pivot_min = f.d[0];
    for (const Real& d : f.d) {
        if (d > f.pivot_max) f.pivot_max = d;
        if (d < f.pivot_min) f.pivot_min = d;
    }
    return f;
}

std::vector<Complex> LdlFactor::solve(const std::vector<Complex>& rhs) const {
    const int m = n;
    std::vector<Complex> y(m);
    for (int i = 0; i < m; ++i) y[i] = rhs[static_cast<std::size_t>(perm[i])];
    // L z = y (unit lower)
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < i; ++j)
            y[i] -= lower[static_cast<std::size_t>(i) * m + j] * y[j];
    }
    // D w = z
    for (int i = 0; i < m; ++i) y[i] /= d[i];
    // L^H x = w
    for (int i = m - 1; i >= 0; --i) {
        for (int j = i + 1; j < m; ++j)
            y[i] -= conj(lower[static_cast<std::size_t>(j) * m + i]) * y[j];
    }
    std::vector<Complex> x(m);
    for (int i = 0; i < m; ++i) x[static_cast<std::size_t>(perm[i])] = y[i];
    return x;
}

std::vector<Complex> multiply(const GramMatrix& g, const std::vector<Complex>& x) {
    std::vector<Complex> y(g.n);
    for (int i = 0; i < g.n; ++i) {
        Complex acc{};
        for (int j = 0; j < g.n; ++j) acc += g.at(i, j) * x[static_cast<std::size_t>(j)];
        y[static_cast<std::size_t>(i)] = acc;
    }
    return y;
}

}  // namespace superosc
