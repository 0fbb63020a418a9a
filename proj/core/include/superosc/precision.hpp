#pragma once

#include <boost/multiprecision/mpfr.hpp>
#include <boost/math/constants/constants.hpp>

#include <complex>
#include <utility>

namespace superosc {

/// Arbitrary-precision real. Precision (decimal digits) is a thread-local
/// property; fresh values pick up the active working precision, see
/// PrecisionScope below.
using Real = boost::multiprecision::mpfr_float;

/// Baseline working precision (decimal digits) the library starts from.
inline constexpr unsigned kBaseDigits = 34;

/// RAII guard that sets the active working precision for everything
/// constructed while it is alive. Scopes nest.
class PrecisionScope {
public:
    explicit PrecisionScope(unsigned digits10)
        : prev_(Real::default_precision()) {
        Real::default_precision(digits10);
    }
    ~PrecisionScope() { Real::default_precision(prev_); }

    PrecisionScope(const PrecisionScope&) = delete;
    PrecisionScope& operator=(const PrecisionScope&) = delete;

private:
    unsigned prev_;
};

inline unsigned current_digits() { return Real::default_precision(); }

/// pi at the active working precision.
inline Real real_pi() { return boost::math::constants::pi<Real>(); }

/// 10^-(digits) as a Real; handy for tolerances tied to the working precision.
inline Real pow10(int exponent) {
    return pow(Real(10), exponent);
}

inline double to_double(const Real& x) { return x.convert_to<double>(); }

/// Complex value over Real. std::complex is only specified for the builtin
/// floating types, so we carry our own minimal arithmetic.
struct Complex {
    Real re{0};
    Real im{0};

    Complex() = default;
    Complex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}
    explicit Complex(Real r) : re(std::move(r)), im(0) {}
    explicit Complex(double r) : re(r), im(0) {}
    explicit Complex(const std::complex<double>& z) : re(z.real()), im(z.imag()) {}

    std::complex<double> to_std() const { return {to_double(re), to_double(im)}; }

    Complex& operator+=(const Complex& o) { re += o.re; im += o.im; return *this; }
    Complex& operator-=(const Complex& o) { re -= o.re; im -= o.im; return *this; }
    Complex& operator*=(const Real& s) { re *= s; im *= s; return *this; }
    Complex& operator/=(const Real& s) { re /= s; im /= s; return *this; }
};

inline Complex operator+(const Complex& a, const Complex& b) { return {a.re + b.re, a.im + b.im}; }
inline Complex operator-(const Complex& a, const Complex& b) { return {a.re - b.re, a.im - b.im}; }
inline Complex operator-(const Complex& a) { return {-a.re, -a.im}; }

inline Complex operator*(const Complex& a, const Complex& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
inline Complex operator*(const Real& s, const Complex& a) { return {s * a.re, s * a.im}; }
inline Complex operator*(const Complex& a, const Real& s) { return s * a; }

inline Complex conj(const Complex& a) { return {a.re, -a.im}; }

inline Real norm_sq(const Complex& a) { return a.re * a.re + a.im * a.im; }
inline Real abs(const Complex& a) { return sqrt(norm_sq(a)); }

inline Complex operator/(const Complex& a, const Real& s) { return {a.re / s, a.im / s}; }

inline Complex operator/(const Complex& a, const Complex& b) {
    // Smith's formula; avoids overflow for wildly scaled parts.
    if (abs(b.re) >= abs(b.im)) {
        Real r = b.im / b.re;
        Real den = b.re + b.im * r;
        return {(a.re + a.im * r) / den, (a.im - a.re * r) / den};
    }
    Real r = b.re / b.im;
    Real den = b.re * r + b.im;
    return {(a.re * r + a.im) / den, (a.im * r - a.re) / den};
}

/// e^{i theta}
inline Complex exp_i(const Real& theta) {
    Real s, c;
    // one mpfr call for both would be nicer; boost exposes sin/cos separately
    s = sin(theta);
    c = cos(theta);
    return {c, s};
}

}  // namespace superosc
