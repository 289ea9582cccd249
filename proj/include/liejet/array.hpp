#pragma once

// N-dimensional arrays of Taylor series sharing one order: elementwise
// arithmetic, structure operations, the matrix Cauchy product, and the
// power-series linear solve A(t) X(t) = B(t).

#include <cstddef>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "mat.hpp"
#include "series.hpp"

namespace liejet {

using Shape = std::vector<std::size_t>;

inline std::size_t shape_count(const Shape& s) {
    std::size_t n = 1;
    for (std::size_t e : s) n *= e;
    return n;
}

inline std::string shape_str(const Shape& s) {
    std::string r = "[";
    for (std::size_t i = 0; i < s.size(); ++i) r += (i ? "x" : "") + std::to_string(s[i]);
    return r + "]";
}

template <class T>
class TaylorArray {
public:
    TaylorArray() : shape_{0}, order_(0) {}

    TaylorArray(Shape shape, int order)
        : shape_(std::move(shape)), order_(order),
          data_(shape_count(shape_), TaylorSeries<T>::zero(order)) {}

    static TaylorArray from_elements(Shape shape, std::vector<TaylorSeries<T>> elems) {
        if (shape_count(shape) != elems.size())
            throw ShapeMismatch("element count " + std::to_string(elems.size()) +
                                " vs shape " + shape_str(shape));
        if (elems.empty()) throw ShapeMismatch("empty array");
        const int p = elems[0].order();
        for (const auto& e : elems)
            if (e.order() != p) throw OrderMismatch(p, e.order());
        TaylorArray a;
        a.shape_ = std::move(shape);
        a.order_ = p;
        a.data_ = std::move(elems);
        return a;
    }

    // 2-D array assembled from its per-order coefficient matrices
    static TaylorArray assemble(const std::vector<Mat<T>>& coeff) {
        const int p = int(coeff.size()) - 1;
        const std::size_t r = coeff[0].rows(), c = coeff[0].cols();
        std::vector<TaylorSeries<T>> elems;
        elems.reserve(r * c);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < c; ++j) {
                SeriesBuilder<T> b(p);
                for (int k = 0; k <= p; ++k) b[k] = coeff[std::size_t(k)](i, j);
                elems.push_back(b.build());
            }
        return from_elements({r, c}, std::move(elems));
    }

    const Shape& shape() const { return shape_; }
    int order() const { return order_; }
    std::size_t size() const { return data_.size(); }
    std::size_t ndim() const { return shape_.size(); }

    std::size_t rows() const { require2d(); return shape_[0]; }
    std::size_t cols() const { require2d(); return shape_[1]; }

    const TaylorSeries<T>& at(std::size_t flat) const {
        if (flat >= data_.size()) throw IndexOutOfBounds("flat " + std::to_string(flat));
        return data_[flat];
    }
    const TaylorSeries<T>& at(std::size_t i, std::size_t j) const {
        require2d();
        if (i >= shape_[0] || j >= shape_[1])
            throw IndexOutOfBounds("(" + std::to_string(i) + "," + std::to_string(j) + ")");
        return data_[i * shape_[1] + j];
    }
    const std::vector<TaylorSeries<T>>& elements() const { return data_; }

    // order-k coefficient of every element, in linear layout; O(size)
    std::vector<T> get_tc(int k) const {
        std::vector<T> out;
        out.reserve(data_.size());
        for (const auto& s : data_) out.push_back(s.tc(k));
        return out;
    }

    Mat<T> get_tc_mat(int k) const {
        require2d();
        Mat<T> m(shape_[0], shape_[1]);
        for (std::size_t i = 0; i < shape_[0]; ++i)
            for (std::size_t j = 0; j < shape_[1]; ++j) m(i, j) = data_[i * shape_[1] + j].tc(k);
        return m;
    }

private:
    void require2d() const {
        if (shape_.size() != 2) throw ShapeMismatch("expected 2-D array, got " + shape_str(shape_));
    }

    Shape shape_;
    int order_;
    std::vector<TaylorSeries<T>> data_;
};

// --- elementwise ---------------------------------------------------------

namespace detail {

template <class T, class F>
TaylorArray<T> zip(const TaylorArray<T>& a, const TaylorArray<T>& b, F&& f) {
    // equal shapes, or a one-element operand broadcast against the other
    const TaylorArray<T>* big = &a;
    const TaylorArray<T>* small = nullptr;
    bool small_first = false;
    if (a.shape() != b.shape()) {
        if (b.size() == 1) { small = &b; }
        else if (a.size() == 1) { big = &b; small = &a; small_first = true; }
        else throw ShapeMismatch(shape_str(a.shape()) + " vs " + shape_str(b.shape()));
    }
    std::vector<TaylorSeries<T>> out;
    out.reserve(big->size());
    for (std::size_t i = 0; i < big->size(); ++i) {
        if (!small) out.push_back(f(a.at(i), b.at(i)));
        else if (small_first) out.push_back(f(small->at(0), big->at(i)));
        else out.push_back(f(big->at(i), small->at(0)));
    }
    return TaylorArray<T>::from_elements(big->shape(), std::move(out));
}

} // namespace detail

template <class T, class F>
TaylorArray<T> map(const TaylorArray<T>& a, F&& f) {
    std::vector<TaylorSeries<T>> out;
    out.reserve(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out.push_back(f(a.at(i)));
    return TaylorArray<T>::from_elements(a.shape(), std::move(out));
}

template <class T>
TaylorArray<T> operator+(const TaylorArray<T>& a, const TaylorArray<T>& b) {
    return detail::zip(a, b, [](const auto& x, const auto& y) { return x + y; });
}
template <class T>
TaylorArray<T> operator-(const TaylorArray<T>& a, const TaylorArray<T>& b) {
    return detail::zip(a, b, [](const auto& x, const auto& y) { return x - y; });
}
template <class T>
TaylorArray<T> emul(const TaylorArray<T>& a, const TaylorArray<T>& b) {
    return detail::zip(a, b, [](const auto& x, const auto& y) { return x * y; });
}
template <class T>
TaylorArray<T> ediv(const TaylorArray<T>& a, const TaylorArray<T>& b) {
    return detail::zip(a, b, [](const auto& x, const auto& y) { return x / y; });
}
template <class T>
TaylorArray<T> operator-(const TaylorArray<T>& a) {
    return map(a, [](const auto& x) { return -x; });
}

template <class T, class U>
    requires std::is_convertible_v<U, T>
TaylorArray<T> operator*(const U& c, const TaylorArray<T>& a) {
    return map(a, [&](const auto& x) { return T(c) * x; });
}
template <class T, class U>
    requires std::is_convertible_v<U, T>
TaylorArray<T> operator*(const TaylorArray<T>& a, const U& c) { return c * a; }
template <class T, class U>
    requires std::is_convertible_v<U, T>
TaylorArray<T> operator+(const TaylorArray<T>& a, const U& c) {
    return map(a, [&](const auto& x) { return x + T(c); });
}
template <class T, class U>
    requires std::is_convertible_v<U, T>
TaylorArray<T> operator-(const TaylorArray<T>& a, const U& c) {
    return map(a, [&](const auto& x) { return x - T(c); });
}

// --- matrix product and linear solve -------------------------------------

// truncated Taylor expansion of A(t) B(t); coefficient-k is the matrix
// Cauchy product sum_i A_i B_{k-i}, realized through series arithmetic
template <class T>
TaylorArray<T> matmul(const TaylorArray<T>& a, const TaylorArray<T>& b) {
    if (a.ndim() != 2 || b.ndim() != 2) throw ShapeMismatch("matmul needs 2-D operands");
    if (a.cols() != b.rows())
        throw ShapeMismatch("matmul inner dims " + std::to_string(a.cols()) + " vs " +
                            std::to_string(b.rows()));
    const int p = combined_order(a.order(), b.order());
    std::vector<TaylorSeries<T>> out;
    out.reserve(a.rows() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) {
            TaylorSeries<T> s = TaylorSeries<T>::zero(p);
            for (std::size_t r = 0; r < a.cols(); ++r) s = s + a.at(i, r) * b.at(r, j);
            out.push_back(std::move(s));
        }
    return TaylorArray<T>::from_elements({a.rows(), b.cols()}, std::move(out));
}

// X(t) with trunc_p(A X) = trunc_p(B): factorize A_0 once, then
// X_k = A_0^{-1} (B_k - sum_{i=1..k} A_i X_{k-i})
template <class T>
TaylorArray<T> solve(const TaylorArray<T>& a, const TaylorArray<T>& b) {
    if (a.ndim() != 2 || b.ndim() != 2) throw ShapeMismatch("solve needs 2-D operands");
    if (a.rows() != a.cols()) throw ShapeMismatch("solve needs square A");
    if (a.rows() != b.rows()) throw ShapeMismatch("solve row mismatch");
    const int p = combined_order(a.order(), b.order());

    std::vector<Mat<T>> ak, bk;
    for (int k = 0; k <= p; ++k) {
        ak.push_back(k <= a.order() ? a.get_tc_mat(k) : Mat<T>(a.rows(), a.cols()));
        bk.push_back(k <= b.order() ? b.get_tc_mat(k) : Mat<T>(b.rows(), b.cols()));
    }
    LuFactor<T> lu(ak[0]);
    std::vector<Mat<T>> xk;
    xk.reserve(std::size_t(p) + 1);
    for (int k = 0; k <= p; ++k) {
        Mat<T> rhs = bk[std::size_t(k)];
        for (int i = 1; i <= k; ++i) rhs = rhs - ak[std::size_t(i)] * xk[std::size_t(k - i)];
        xk.push_back(lu.solve(rhs));
    }
    return TaylorArray<T>::assemble(xk);
}

template <class T>
TaylorArray<T> identity_series(std::size_t n, int order) {
    TaylorArray<T> a({n, n}, order);
    std::vector<TaylorSeries<T>> elems;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            elems.push_back(TaylorSeries<T>::constant(order, i == j ? T(1) : T(0)));
    return TaylorArray<T>::from_elements({n, n}, std::move(elems));
}

// --- structure operations (pure rearrangement, coefficients untouched) ---

template <class T>
TaylorArray<T> reshape(const TaylorArray<T>& a, Shape shape) {
    if (shape_count(shape) != a.size())
        throw ShapeMismatch("reshape to " + shape_str(shape));
    return TaylorArray<T>::from_elements(std::move(shape), a.elements());
}

template <class T>
TaylorArray<T> transpose(const TaylorArray<T>& a) {
    if (a.ndim() != 2) throw ShapeMismatch("transpose needs 2-D");
    std::vector<TaylorSeries<T>> out;
    out.reserve(a.size());
    for (std::size_t j = 0; j < a.cols(); ++j)
        for (std::size_t i = 0; i < a.rows(); ++i) out.push_back(a.at(i, j));
    return TaylorArray<T>::from_elements({a.cols(), a.rows()}, std::move(out));
}

template <class T>
TaylorArray<T> concat(const TaylorArray<T>& a, const TaylorArray<T>& b, std::size_t axis) {
    if (a.ndim() != 2 || b.ndim() != 2) throw ShapeMismatch("concat needs 2-D");
    if (axis > 1) throw ShapeMismatch("concat axis " + std::to_string(axis));
    std::vector<TaylorSeries<T>> out;
    if (axis == 0) {
        if (a.cols() != b.cols()) throw ShapeMismatch("concat cols differ");
        out = a.elements();
        out.insert(out.end(), b.elements().begin(), b.elements().end());
        return TaylorArray<T>::from_elements({a.rows() + b.rows(), a.cols()}, std::move(out));
    }
    if (a.rows() != b.rows()) throw ShapeMismatch("concat rows differ");
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) out.push_back(a.at(i, j));
        for (std::size_t j = 0; j < b.cols(); ++j) out.push_back(b.at(i, j));
    }
    return TaylorArray<T>::from_elements({a.rows(), a.cols() + b.cols()}, std::move(out));
}

// half-open slice along one axis of a 2-D array
template <class T>
TaylorArray<T> slice(const TaylorArray<T>& a, std::size_t axis, std::size_t lo, std::size_t hi) {
    if (a.ndim() != 2) throw ShapeMismatch("slice needs 2-D");
    const std::size_t extent = axis == 0 ? a.rows() : a.cols();
    if (axis > 1 || lo > hi || hi > extent)
        throw IndexOutOfBounds("slice [" + std::to_string(lo) + "," + std::to_string(hi) + ")");
    std::vector<TaylorSeries<T>> out;
    if (axis == 0)
        for (std::size_t i = lo; i < hi; ++i)
            for (std::size_t j = 0; j < a.cols(); ++j) out.push_back(a.at(i, j));
    else
        for (std::size_t i = 0; i < a.rows(); ++i)
            for (std::size_t j = lo; j < hi; ++j) out.push_back(a.at(i, j));
    const std::size_t nr = axis == 0 ? hi - lo : a.rows();
    const std::size_t nc = axis == 0 ? a.cols() : hi - lo;
    return TaylorArray<T>::from_elements({nr, nc}, std::move(out));
}

// 1-D state vector helpers used throughout the Lie paths
template <class T>
TaylorArray<T> state_vector(std::vector<TaylorSeries<T>> comps) {
    const std::size_t n = comps.size();
    return TaylorArray<T>::from_elements({n}, std::move(comps));
}

} // namespace liejet
