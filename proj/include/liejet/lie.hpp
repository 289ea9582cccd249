#pragma once

// Lie coefficients (1/k!) L_f^k X(x0) for scalar, vector, and covector
// fields X, and for stacked families of them. The main paths evaluate
//
//   scalar:    h(x(t))
//   vector:    J^{-1}(t) g(x(t))      (power-series linear solve)
//   covector:  w(x(t)) J(t)           (series matrix product)
//
// whose k-th Taylor coefficients are the Lie coefficients. The alternative
// recurrence paths build Z(t) = J^{-1}(t) and J(t) directly from the
// coefficients A_i of f'(x(t)) and serve as an internal cross-check.

#include <functional>
#include <vector>

#include "array.hpp"
#include "errors.hpp"
#include "tape.hpp"

namespace liejet {

enum class FieldKind { Scalar, Vector, Covector };

template <class S>
S factorial_as(int k) {
    S f(1);
    for (int i = 2; i <= k; ++i) f *= S(double(i));
    return f;
}

template <class S>
struct LieResult {
    FieldKind kind;
    int order;
    TaylorArray<S> coeffs;  // element shape = field shape; k-th TC = (1/k!) L^k X(x0)

    std::vector<S> get_tc(int k) const { return coeffs.get_tc(k); }
    Mat<S> get_tc_mat(int k) const { return coeffs.get_tc_mat(k); }

    // the actual iterated derivative L^k X(x0) = k! * (k-th Lie coefficient)
    std::vector<S> get_derivative(int k) const {
        std::vector<S> v = coeffs.get_tc(k);
        const S f = factorial_as<S>(k);
        for (S& x : v) x *= f;
        return v;
    }
};

template <class S, class FH>
LieResult<S> lie_scalar(const CodeList& f, FH&& h, const std::vector<S>& x0, int p) {
    auto graded = taylcoeffs(f, x0, p);
    TaylorArray<S> L = h(graded.state_series());
    return {FieldKind::Scalar, p, std::move(L)};
}

template <class S, class FG>
LieResult<S> lie_vector(const CodeList& f, FG&& g, const std::vector<S>& x0, int p) {
    const std::size_t n = x0.size();
    auto graded = taylcoeffs(f, x0, p, true);
    TaylorArray<S> G = g(graded.state_series());
    if (G.ndim() != 2 || G.rows() != n)
        throw ShapeMismatch("vector field must evaluate to " + std::to_string(n) + " rows");
    try {
        return {FieldKind::Vector, p, solve(graded.jacobian_series(), G)};
    } catch (const SingularConstantTerm&) {
        // J(0) = I, so this cannot happen for a well-formed propagation
        throw std::logic_error("variational matrix with singular constant term");
    }
}

template <class S, class FW>
LieResult<S> lie_covector(const CodeList& f, FW&& w, const std::vector<S>& x0, int p) {
    const std::size_t n = x0.size();
    auto graded = taylcoeffs(f, x0, p, true);
    TaylorArray<S> W = w(graded.state_series());
    if (W.ndim() != 2 || W.cols() != n)
        throw ShapeMismatch("covector field must evaluate to " + std::to_string(n) + " columns");
    return {FieldKind::Covector, p, matmul(W, graded.jacobian_series())};
}

// --- recurrence (cross-check) paths --------------------------------------

// Z_0 = I,  Z_{k+1} = -(1/(k+1)) sum_{i=0..k} Z_i A_{k-i}; Z(t) = J^{-1}(t)
template <class S>
std::vector<Mat<S>> z_recurrence(const std::vector<Mat<S>>& a) {
    const std::size_t n = a[0].rows();
    std::vector<Mat<S>> z{Mat<S>::identity(n)};
    for (std::size_t k = 0; k + 1 < a.size(); ++k) {
        Mat<S> s(n, n);
        for (std::size_t i = 0; i <= k; ++i) s = s + z[i] * a[k - i];
        z.push_back((S(-1) / S(double(k + 1))) * s);
    }
    return z;
}

// J_0 = I,  J_{k+1} = (1/(k+1)) sum_{i=0..k} A_{k-i} J_i
template <class S>
std::vector<Mat<S>> j_recurrence(const std::vector<Mat<S>>& a) {
    const std::size_t n = a[0].rows();
    std::vector<Mat<S>> j{Mat<S>::identity(n)};
    for (std::size_t k = 0; k + 1 < a.size(); ++k) {
        Mat<S> s(n, n);
        for (std::size_t i = 0; i <= k; ++i) s = s + a[k - i] * j[i];
        j.push_back((S(1) / S(double(k + 1))) * s);
    }
    return j;
}

template <class S, class FG>
LieResult<S> lie_vector_zrec(const CodeList& f, FG&& g, const std::vector<S>& x0, int p) {
    const std::size_t n = x0.size();
    auto graded = taylcoeffs(f, x0, p);
    TaylorArray<S> x = graded.state_series();
    std::vector<Mat<S>> a = field_jacobian_coeffs(f, x);
    std::vector<Mat<S>> z = z_recurrence(a);
    TaylorArray<S> G = g(x);
    if (G.ndim() != 2 || G.rows() != n)
        throw ShapeMismatch("vector field must evaluate to " + std::to_string(n) + " rows");
    std::vector<Mat<S>> lk;
    for (int k = 0; k <= p; ++k) {
        Mat<S> s(n, G.cols());
        for (int i = 0; i <= k; ++i) s = s + z[std::size_t(i)] * G.get_tc_mat(k - i);
        lk.push_back(std::move(s));
    }
    return {FieldKind::Vector, p, TaylorArray<S>::assemble(lk)};
}

template <class S, class FW>
LieResult<S> lie_covector_jrec(const CodeList& f, FW&& w, const std::vector<S>& x0, int p) {
    const std::size_t n = x0.size();
    auto graded = taylcoeffs(f, x0, p);
    TaylorArray<S> x = graded.state_series();
    std::vector<Mat<S>> a = field_jacobian_coeffs(f, x);
    std::vector<Mat<S>> j = j_recurrence(a);
    TaylorArray<S> W = w(x);
    if (W.ndim() != 2 || W.cols() != n)
        throw ShapeMismatch("covector field must evaluate to " + std::to_string(n) + " columns");
    std::vector<Mat<S>> lk;
    for (int k = 0; k <= p; ++k) {
        Mat<S> s(W.rows(), n);
        for (int i = 0; i <= k; ++i) s = s + W.get_tc_mat(i) * j[std::size_t(k - i)];
        lk.push_back(std::move(s));
    }
    return {FieldKind::Covector, p, TaylorArray<S>::assemble(lk)};
}

// --- error metrics -------------------------------------------------------

template <class S>
double norm_inf(const std::vector<S>& v) {
    using std::fabs;
    S m(0);
    for (const S& x : v)
        if (fabs(x) > m) m = fabs(x);
    return value_of(m);
}

// normwise relative discrepancy per coefficient order:
// ||a_k - b_k||_inf / max(1, ||b_k||_inf)
template <class S>
std::vector<double> normwise_rel_errors(const TaylorArray<S>& a, const TaylorArray<S>& b) {
    if (a.shape() != b.shape()) throw ShapeMismatch("normwise_rel_errors");
    const int p = std::min(a.order(), b.order());
    std::vector<double> errs;
    for (int k = 0; k <= p; ++k) {
        std::vector<S> ak = a.get_tc(k), bk = b.get_tc(k);
        std::vector<S> d(ak.size());
        for (std::size_t i = 0; i < ak.size(); ++i) d[i] = ak[i] - bk[i];
        errs.push_back(norm_inf(d) / std::max(1.0, norm_inf(bk)));
    }
    return errs;
}

} // namespace liejet
