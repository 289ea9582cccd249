#pragma once

// First-order forward-mode scalar carrying a dense gradient. Running the
// series recurrences with Dual coefficients is exactly the gradient-augmented
// form of the recurrences: the product rule applied to every coefficient.
//
// An empty gradient vector means "identically zero gradient"; constants never
// allocate gradient storage.

#include <cmath>
#include <utility>
#include <vector>

#include "real.hpp"

namespace liejet {

template <class S>
struct Dual {
    S v{};
    std::vector<S> g; // empty == zero

    Dual() = default;
    Dual(S val) : v(std::move(val)) {}
    Dual(S val, std::vector<S> grad) : v(std::move(val)), g(std::move(grad)) {}

    static Dual seeded(S val, std::size_t n, std::size_t direction) {
        Dual d(std::move(val));
        d.g.assign(n, S(0));
        d.g[direction] = S(1);
        return d;
    }

    friend bool operator==(const Dual& a, const Dual& b) { return a.v == b.v; }
    friend bool operator!=(const Dual& a, const Dual& b) { return a.v != b.v; }
    friend bool operator<(const Dual& a, const Dual& b) { return a.v < b.v; }
    friend bool operator>(const Dual& a, const Dual& b) { return a.v > b.v; }
    friend bool operator<=(const Dual& a, const Dual& b) { return a.v <= b.v; }
    friend bool operator>=(const Dual& a, const Dual& b) { return a.v >= b.v; }
};

namespace detail {

template <class S>
void axpy_into(std::vector<S>& out, const S& a, const std::vector<S>& x) {
    if (x.empty()) return;
    if (out.empty()) out.assign(x.size(), S(0));
    for (std::size_t i = 0; i < x.size(); ++i) out[i] += a * x[i];
}

} // namespace detail

template <class S>
Dual<S> operator-(const Dual<S>& a) {
    Dual<S> r(-a.v);
    r.g.reserve(a.g.size());
    for (const S& x : a.g) r.g.push_back(-x);
    return r;
}

template <class S>
Dual<S> operator+(const Dual<S>& a, const Dual<S>& b) {
    Dual<S> r(a.v + b.v);
    r.g = a.g;
    detail::axpy_into(r.g, S(1), b.g);
    return r;
}

template <class S>
Dual<S> operator-(const Dual<S>& a, const Dual<S>& b) {
    Dual<S> r(a.v - b.v);
    r.g = a.g;
    detail::axpy_into(r.g, S(-1), b.g);
    return r;
}

template <class S>
Dual<S> operator*(const Dual<S>& a, const Dual<S>& b) {
    Dual<S> r(a.v * b.v);
    detail::axpy_into(r.g, b.v, a.g);
    detail::axpy_into(r.g, a.v, b.g);
    return r;
}

template <class S>
Dual<S> operator/(const Dual<S>& a, const Dual<S>& b) {
    Dual<S> r(a.v / b.v);
    detail::axpy_into(r.g, S(1) / b.v, a.g);
    detail::axpy_into(r.g, -r.v / b.v, b.g);
    return r;
}

template <class S> Dual<S>& operator+=(Dual<S>& a, const Dual<S>& b) { a = a + b; return a; }
template <class S> Dual<S>& operator-=(Dual<S>& a, const Dual<S>& b) { a = a - b; return a; }
template <class S> Dual<S>& operator*=(Dual<S>& a, const Dual<S>& b) { a = a * b; return a; }
template <class S> Dual<S>& operator/=(Dual<S>& a, const Dual<S>& b) { a = a / b; return a; }

// value f(x.v) with derivative fp, chained onto x's gradient
template <class S>
Dual<S> chain(const Dual<S>& x, S f, S fp) {
    Dual<S> r(std::move(f));
    detail::axpy_into(r.g, fp, x.g);
    return r;
}

template <class S> Dual<S> exp(const Dual<S>& x) {
    using std::exp; S e = exp(x.v); return chain(x, e, e);
}
template <class S> Dual<S> log(const Dual<S>& x) {
    using std::log; return chain(x, log(x.v), S(1) / x.v);
}
template <class S> Dual<S> sqrt(const Dual<S>& x) {
    using std::sqrt; S s = sqrt(x.v); return chain(x, s, S(1) / (S(2) * s));
}
template <class S> Dual<S> pow(const Dual<S>& x, double c) {
    using std::pow; return chain(x, pow(x.v, S(c)), S(c) * pow(x.v, S(c - 1)));
}
template <class S> Dual<S> nthroot(const Dual<S>& x, int n) {
    S r = nthroot(x.v, n);
    return chain(x, r, r / (S(n) * x.v));
}
template <class S> Dual<S> expm1(const Dual<S>& x) {
    using std::expm1; using std::exp; return chain(x, expm1(x.v), exp(x.v));
}
template <class S> Dual<S> log1p(const Dual<S>& x) {
    using std::log1p; return chain(x, log1p(x.v), S(1) / (S(1) + x.v));
}
template <class S> Dual<S> sin(const Dual<S>& x) {
    using std::sin; using std::cos; return chain(x, sin(x.v), cos(x.v));
}
template <class S> Dual<S> cos(const Dual<S>& x) {
    using std::sin; using std::cos; return chain(x, cos(x.v), -sin(x.v));
}
template <class S> Dual<S> tan(const Dual<S>& x) {
    using std::tan; S t = tan(x.v); return chain(x, t, S(1) + t * t);
}
template <class S> Dual<S> asin(const Dual<S>& x) {
    using std::asin; using std::sqrt; return chain(x, asin(x.v), S(1) / sqrt(S(1) - x.v * x.v));
}
template <class S> Dual<S> acos(const Dual<S>& x) {
    using std::acos; using std::sqrt; return chain(x, acos(x.v), S(-1) / sqrt(S(1) - x.v * x.v));
}
template <class S> Dual<S> atan(const Dual<S>& x) {
    using std::atan; return chain(x, atan(x.v), S(1) / (S(1) + x.v * x.v));
}
template <class S> Dual<S> atan2(const Dual<S>& y, const Dual<S>& x) {
    using std::atan2;
    S s = x.v * x.v + y.v * y.v;
    Dual<S> r(atan2(y.v, x.v));
    detail::axpy_into(r.g, x.v / s, y.g);
    detail::axpy_into(r.g, -y.v / s, x.g);
    return r;
}
template <class S> Dual<S> sinh(const Dual<S>& x) {
    using std::sinh; using std::cosh; return chain(x, sinh(x.v), cosh(x.v));
}
template <class S> Dual<S> cosh(const Dual<S>& x) {
    using std::sinh; using std::cosh; return chain(x, cosh(x.v), sinh(x.v));
}
template <class S> Dual<S> tanh(const Dual<S>& x) {
    using std::tanh; S t = tanh(x.v); return chain(x, t, S(1) - t * t);
}
template <class S> Dual<S> asinh(const Dual<S>& x) {
    using std::asinh; using std::sqrt; return chain(x, asinh(x.v), S(1) / sqrt(S(1) + x.v * x.v));
}
template <class S> Dual<S> acosh(const Dual<S>& x) {
    using std::acosh; using std::sqrt; return chain(x, acosh(x.v), S(1) / sqrt(x.v * x.v - S(1)));
}
template <class S> Dual<S> atanh(const Dual<S>& x) {
    using std::atanh; return chain(x, atanh(x.v), S(1) / (S(1) - x.v * x.v));
}

template <class S>
struct RealTraits<Dual<S>> {
    static Dual<S> epsilon() { return Dual<S>(RealTraits<S>::epsilon()); }
    static double value(const Dual<S>& x) { return RealTraits<S>::value(x.v); }
    static bool finite(const Dual<S>& x) {
        if (!RealTraits<S>::finite(x.v)) return false;
        for (const S& d : x.g)
            if (!RealTraits<S>::finite(d)) return false;
        return true;
    }
};

} // namespace liejet
