#pragma once

// Abstract real-field scalars. All series recurrences are written against a
// generic scalar type so the same kernels run in double, long double and in
// the quad-precision mode used by the reference oracle.

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include <quadmath.h>

namespace liejet {

// Thin value wrapper around __float128 so quadmath behaves like a normal
// scalar type with ADL-found math functions.
struct Quad {
    __float128 v;

    constexpr Quad() : v(0) {}
    constexpr Quad(double d) : v(d) {}
    constexpr Quad(int i) : v(i) {}
    explicit constexpr Quad(__float128 x) : v(x) {}

    explicit operator double() const { return static_cast<double>(v); }
    explicit operator long double() const { return static_cast<long double>(v); }

    Quad operator-() const { return Quad(-v); }
    Quad& operator+=(Quad o) { v += o.v; return *this; }
    Quad& operator-=(Quad o) { v -= o.v; return *this; }
    Quad& operator*=(Quad o) { v *= o.v; return *this; }
    Quad& operator/=(Quad o) { v /= o.v; return *this; }

    friend Quad operator+(Quad a, Quad b) { return Quad(a.v + b.v); }
    friend Quad operator-(Quad a, Quad b) { return Quad(a.v - b.v); }
    friend Quad operator*(Quad a, Quad b) { return Quad(a.v * b.v); }
    friend Quad operator/(Quad a, Quad b) { return Quad(a.v / b.v); }
    friend bool operator==(Quad a, Quad b) { return a.v == b.v; }
    friend bool operator!=(Quad a, Quad b) { return a.v != b.v; }
    friend bool operator<(Quad a, Quad b) { return a.v < b.v; }
    friend bool operator>(Quad a, Quad b) { return a.v > b.v; }
    friend bool operator<=(Quad a, Quad b) { return a.v <= b.v; }
    friend bool operator>=(Quad a, Quad b) { return a.v >= b.v; }
};

inline Quad exp(Quad x) { return Quad(expq(x.v)); }
inline Quad log(Quad x) { return Quad(logq(x.v)); }
inline Quad sqrt(Quad x) { return Quad(sqrtq(x.v)); }
inline Quad cbrt(Quad x) { return Quad(cbrtq(x.v)); }
inline Quad pow(Quad x, Quad y) { return Quad(powq(x.v, y.v)); }
inline Quad pow(Quad x, double y) { return Quad(powq(x.v, (__float128)y)); }
inline Quad expm1(Quad x) { return Quad(expm1q(x.v)); }
inline Quad log1p(Quad x) { return Quad(log1pq(x.v)); }
inline Quad sin(Quad x) { return Quad(sinq(x.v)); }
inline Quad cos(Quad x) { return Quad(cosq(x.v)); }
inline Quad tan(Quad x) { return Quad(tanq(x.v)); }
inline Quad asin(Quad x) { return Quad(asinq(x.v)); }
inline Quad acos(Quad x) { return Quad(acosq(x.v)); }
inline Quad atan(Quad x) { return Quad(atanq(x.v)); }
inline Quad atan2(Quad y, Quad x) { return Quad(atan2q(y.v, x.v)); }
inline Quad sinh(Quad x) { return Quad(sinhq(x.v)); }
inline Quad cosh(Quad x) { return Quad(coshq(x.v)); }
inline Quad tanh(Quad x) { return Quad(tanhq(x.v)); }
inline Quad asinh(Quad x) { return Quad(asinhq(x.v)); }
inline Quad acosh(Quad x) { return Quad(acoshq(x.v)); }
inline Quad atanh(Quad x) { return Quad(atanhq(x.v)); }
inline Quad fabs(Quad x) { return Quad(fabsq(x.v)); }
inline bool isfinite(Quad x) { return !isnanq(x.v) && !isinfq(x.v); }

inline std::string to_string(Quad x, int digits = 34) {
    char buf[128];
    quadmath_snprintf(buf, sizeof buf, ("%." + std::to_string(digits) + "Qg").c_str(), x.v);
    return buf;
}

// --- scalar traits -------------------------------------------------------

template <class S>
struct RealTraits {
    static constexpr S epsilon() { return std::numeric_limits<S>::epsilon(); }
    static double value(S x) { return static_cast<double>(x); }
    static bool finite(S x) { using std::isfinite; return isfinite(x); }
};

template <>
struct RealTraits<Quad> {
    static Quad epsilon() { Quad e; e.v = scalbnq(1.0, -112); return e; }
    static double value(Quad x) { return static_cast<double>(x); }
    static bool finite(Quad x) { return isfinite(x); }
};

// Double value of a scalar, used for domain checks and reporting.
template <class S>
double value_of(const S& x) { return RealTraits<S>::value(x); }

template <class S>
bool finite_value(const S& x) { return RealTraits<S>::finite(x); }

// Real n-th root: for odd n defined on all of R, otherwise requires x >= 0.
template <class S>
S nthroot(S x, int n) {
    using std::pow;
    const S e = S(1) / S(n);
    if (n % 2 != 0 && x < S(0)) return -pow(-x, e);
    return pow(x, e);
}

} // namespace liejet
