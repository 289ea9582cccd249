#pragma once

// Independent verification machinery. Nothing here shares code with the
// series/tape kernels it checks: the nested oracle iterates the textbook
// definition L^k h = (L^{k-1} h)' f with central finite differences, and the
// reference path reruns the identical Lie algorithms at a higher precision
// to expose double-width rounding growth.

#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "lie.hpp"
#include "real.hpp"

namespace liejet {

struct OracleEntry {
    int k = 0;
    double abs_err = 0;  // ||computed_k - reference_k||_inf
    double rel_err = 0;  // abs_err / max(1, ||reference_k||_inf)
};

struct OracleReport {
    std::vector<OracleEntry> entries;  // one per compared order, no gaps
    double tol = 0;
    double max_rel = 0;
    bool pass = true;

    void add(int k, double abs_err, double rel_err) {
        entries.push_back({k, abs_err, rel_err});
        if (rel_err > max_rel) max_rel = rel_err;
        if (rel_err > tol) pass = false;
    }
};

// --- nested finite-difference oracle -------------------------------------

using ScalarFieldFn = std::function<double(const std::vector<double>&)>;
using VectorFieldFn = std::function<std::vector<double>(const std::vector<double>&)>;

namespace detail {

// one application of L_f by central differences; the step shrinks with the
// nesting level k since the outer field already carries FD noise
inline ScalarFieldFn fd_lie_step(const VectorFieldFn& f, ScalarFieldFn h, int k) {
    const double eps = std::numeric_limits<double>::epsilon();
    const double h0 = std::pow(eps, 1.0 / double(2 + k));
    return [f, h = std::move(h), h0](const std::vector<double>& x) {
        const std::vector<double> fx = f(x);
        double acc = 0;
        for (std::size_t j = 0; j < x.size(); ++j) {
            const double step = h0 * (1.0 + std::fabs(x[j]));
            std::vector<double> xp = x, xm = x;
            xp[j] += step;
            xm[j] -= step;
            acc += (h(xp) - h(xm)) / (2.0 * step) * fx[j];
        }
        return acc;
    };
}

} // namespace detail

// L_f^k h(x0) for k = 0..kmax by literally nesting the definition. Cost is
// (2n)^k evaluations of h, so kmax is capped small.
inline std::vector<double> lie_scalar_nested_oracle(const VectorFieldFn& f,
                                                    const ScalarFieldFn& h,
                                                    const std::vector<double>& x0,
                                                    int kmax) {
    if (kmax < 0 || kmax > 4) throw ConfigError("nested oracle supports 0 <= kmax <= 4");
    std::vector<double> out;
    ScalarFieldFn cur = h;
    out.push_back(cur(x0));
    for (int k = 1; k <= kmax; ++k) {
        cur = detail::fd_lie_step(f, std::move(cur), k);
        out.push_back(cur(x0));
    }
    return out;
}

// all components of a stacked scalar family at once
inline std::vector<std::vector<double>> lie_family_nested_oracle(
    const VectorFieldFn& f, const std::vector<ScalarFieldFn>& hs,
    const std::vector<double>& x0, int kmax) {
    std::vector<std::vector<double>> out;
    for (const auto& h : hs) out.push_back(lie_scalar_nested_oracle(f, h, x0, kmax));
    return out;
}

// --- extended-precision reference ----------------------------------------

// The Lie paths are templated on the scalar, so the reference is just the
// same computation instantiated at Quad (roughly 34 significant digits).
template <class S>
std::vector<S> widen(const std::vector<double>& x) {
    return std::vector<S>(x.begin(), x.end());
}

// per-order errors of a double-width result against a wider-scalar result
// with the same shape; differences accumulate in the wide type
template <class W>
OracleReport compare_to_reference(const TaylorArray<double>& got,
                                  const TaylorArray<W>& ref, double tol) {
    using std::fabs;
    if (got.shape() != ref.shape()) throw ShapeMismatch("compare_to_reference");
    OracleReport rep;
    rep.tol = tol;
    const int p = std::min(got.order(), ref.order());
    for (int k = 0; k <= p; ++k) {
        W amax(0), rmax(0);
        for (std::size_t i = 0; i < got.size(); ++i) {
            const W d = fabs(W(got.at(i).tc(k)) - ref.at(i).tc(k));
            const W r = fabs(ref.at(i).tc(k));
            if (d > amax) amax = d;
            if (r > rmax) rmax = r;
        }
        const double a = value_of(amax);
        rep.add(k, a, a / std::max(1.0, value_of(rmax)));
    }
    return rep;
}

} // namespace liejet
