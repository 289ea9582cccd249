#pragma once

// Built-in benchmark systems. The gantry crane: a cart of mass M carrying a
// load of mass m on a cable of length ell under gravity G, with state
// x = (z, phi, zdot, phidot). f is the drift field, g the control-affine
// input field, h the Cartesian load position.

#include <vector>

#include "array.hpp"
#include "tape.hpp"

namespace liejet {

struct GantryParams {
    double M = 1.0;    // cart mass
    double m = 1.0;    // load mass
    double ell = 1.0;  // cable length
    double G = 9.81;   // gravity

    void validate() const {
        if (!(M > 0) || !(m >= 0) || !(ell > 0))
            throw ConfigError("gantry requires M > 0, m >= 0, ell > 0");
    }
};

// The same expressions serve every scalar-like type: plain numbers for
// direct evaluation, tracers for taping, series for evaluation along x(t).
template <class V>
std::vector<V> gantry_f(const std::vector<V>& x, const GantryParams& P) {
    using std::sin; using std::cos;
    const V s = sin(x[1]);
    const V c = cos(x[1]);
    const V den = P.m * (s * s) + P.M;
    const V w2 = x[3] * x[3];
    const V f3 = (P.m * P.ell * (w2 * s) + P.m * P.G * (s * c)) / den;
    const V f4 = -(P.m * P.ell * (w2 * (s * c)) + (P.m + P.M) * P.G * s) / (P.ell * den);
    return {x[2], x[3], f3, f4};
}

template <class V>
std::vector<V> gantry_g(const std::vector<V>& x, const GantryParams& P) {
    using std::sin; using std::cos;
    const V s = sin(x[1]);
    const V den = P.m * (s * s) + P.M;
    return {V(0), V(0), V(1) / den, -cos(x[1]) / (P.ell * den)};
}

template <class V>
std::vector<V> gantry_h(const std::vector<V>& x, const GantryParams& P) {
    using std::sin; using std::cos;
    return {P.ell * sin(x[1]) + x[0], P.ell * cos(x[1])};
}

// row gradients of h's components (the covector family dh)
template <class V>
std::vector<V> gantry_dh(const std::vector<V>& x, const GantryParams& P) {
    using std::sin; using std::cos;
    return {V(1), P.ell * cos(x[1]), V(0), V(0),
            V(0), -P.ell * sin(x[1]), V(0), V(0)};
}

inline CodeList gantry_tape(const GantryParams& P) {
    P.validate();
    return record(4, [&](const std::vector<Tracer>& x) { return gantry_f(x, P); });
}

namespace detail {

// lift a mix of order-0 constants and order-p series to a uniform order
template <class S>
std::vector<TaylorSeries<S>> lift_all(std::vector<TaylorSeries<S>> v, int p) {
    for (auto& s : v)
        if (s.order() != p) s = s + TaylorSeries<S>::zero(p);
    return v;
}

template <class S>
std::vector<TaylorSeries<S>> array_elems(const TaylorArray<S>& x) {
    return x.elements();
}

} // namespace detail

// evaluators over series arrays, in the shapes the Lie paths expect
template <class S>
TaylorArray<S> gantry_h_eval(const TaylorArray<S>& x, const GantryParams& P) {
    auto v = detail::lift_all(gantry_h(detail::array_elems(x), P), x.order());
    return TaylorArray<S>::from_elements({2, 1}, std::move(v));
}

template <class S>
TaylorArray<S> gantry_g_eval(const TaylorArray<S>& x, const GantryParams& P) {
    auto v = detail::lift_all(gantry_g(detail::array_elems(x), P), x.order());
    return TaylorArray<S>::from_elements({4, 1}, std::move(v));
}

template <class S>
TaylorArray<S> gantry_f_eval(const TaylorArray<S>& x, const GantryParams& P) {
    auto v = detail::lift_all(gantry_f(detail::array_elems(x), P), x.order());
    return TaylorArray<S>::from_elements({4, 1}, std::move(v));
}

template <class S>
TaylorArray<S> gantry_dh_eval(const TaylorArray<S>& x, const GantryParams& P) {
    auto v = detail::lift_all(gantry_dh(detail::array_elems(x), P), x.order());
    return TaylorArray<S>::from_elements({2, 4}, std::move(v));
}

inline std::vector<double> gantry_x0() { return {1.0, 0.2, -0.5, -0.4}; }

// --- linear test systems -------------------------------------------------

// f(x) = A x; with constant g = b the brackets have the closed form
// ad^k g = (-A)^k b, and a constant covector c gives L^k w = c A^k.
inline CodeList linear_tape(const Mat<double>& a) {
    const int n = int(a.rows());
    return record(n, [&](const std::vector<Tracer>& x) {
        std::vector<Tracer> y;
        for (int i = 0; i < n; ++i) {
            Tracer s(0.0);
            for (int j = 0; j < n; ++j) s = s + a(std::size_t(i), std::size_t(j)) * x[std::size_t(j)];
            y.push_back(s);
        }
        return y;
    });
}

inline Mat<double> nilpotent2_matrix() {
    Mat<double> a(2, 2);
    a(0, 1) = 1.0;
    return a;
}

template <class S>
TaylorArray<S> constant_column_eval(const std::vector<double>& b, int order) {
    std::vector<TaylorSeries<S>> v;
    for (double bi : b) v.push_back(TaylorSeries<S>::constant(order, S(bi)));
    return TaylorArray<S>::from_elements({b.size(), 1}, std::move(v));
}

template <class S>
TaylorArray<S> constant_row_eval(const std::vector<double>& c, int order) {
    std::vector<TaylorSeries<S>> v;
    for (double ci : c) v.push_back(TaylorSeries<S>::constant(order, S(ci)));
    return TaylorArray<S>::from_elements({1, c.size()}, std::move(v));
}

} // namespace liejet
