#pragma once

// Minimal dense matrix over an abstract scalar, plus LU with partial
// pivoting. Sized for the small state dimensions this library works at.

#include <cstddef>
#include <vector>

#include "errors.hpp"
#include "real.hpp"

namespace liejet {

template <class T>
class Mat {
public:
    Mat() : r_(0), c_(0) {}
    Mat(std::size_t rows, std::size_t cols, T fill = T(0))
        : r_(rows), c_(cols), d_(rows * cols, fill) {}

    static Mat identity(std::size_t n) {
        Mat m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }

    std::size_t rows() const { return r_; }
    std::size_t cols() const { return c_; }
    T& operator()(std::size_t i, std::size_t j) { return d_[i * c_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return d_[i * c_ + j]; }
    const std::vector<T>& data() const { return d_; }
    std::vector<T>& data() { return d_; }

    friend Mat operator+(const Mat& a, const Mat& b) {
        Mat r(a.r_, a.c_);
        for (std::size_t i = 0; i < a.d_.size(); ++i) r.d_[i] = a.d_[i] + b.d_[i];
        return r;
    }
    friend Mat operator-(const Mat& a, const Mat& b) {
        Mat r(a.r_, a.c_);
        for (std::size_t i = 0; i < a.d_.size(); ++i) r.d_[i] = a.d_[i] - b.d_[i];
        return r;
    }
    friend Mat operator*(const Mat& a, const Mat& b) {
        if (a.c_ != b.r_) throw ShapeMismatch("matrix product");
        Mat r(a.r_, b.c_);
        for (std::size_t i = 0; i < a.r_; ++i)
            for (std::size_t k = 0; k < a.c_; ++k) {
                const T aik = a(i, k);
                for (std::size_t j = 0; j < b.c_; ++j) r(i, j) += aik * b(k, j);
            }
        return r;
    }
    friend Mat operator*(const T& s, const Mat& a) {
        Mat r(a.r_, a.c_);
        for (std::size_t i = 0; i < a.d_.size(); ++i) r.d_[i] = s * a.d_[i];
        return r;
    }
    friend Mat operator-(const Mat& a) { return T(-1) * a; }

private:
    std::size_t r_, c_;
    std::vector<T> d_;
};

template <class T>
std::vector<T> matvec(const Mat<T>& a, const std::vector<T>& x) {
    std::vector<T> y(a.rows(), T(0));
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) y[i] += a(i, j) * x[j];
    return y;
}

// LU with partial pivoting. Singularity: a pivot whose magnitude falls at or
// below n * eps * max|A| is reported rather than divided by.
template <class T>
class LuFactor {
public:
    explicit LuFactor(Mat<T> a) : lu_(std::move(a)), piv_(lu_.rows()) {
        using std::fabs;
        const std::size_t n = lu_.rows();
        if (n != lu_.cols()) throw ShapeMismatch("LU of non-square matrix");
        T amax(0);
        for (const T& x : lu_.data())
            if (fabs(x) > amax) amax = fabs(x);
        const T tol = T(double(n)) * RealTraits<T>::epsilon() * amax;
        for (std::size_t k = 0; k < n; ++k) {
            std::size_t p = k;
            for (std::size_t i = k + 1; i < n; ++i)
                if (fabs(lu_(i, k)) > fabs(lu_(p, k))) p = i;
            if (!(fabs(lu_(p, k)) > tol)) throw SingularConstantTerm();
            piv_[k] = p;
            if (p != k)
                for (std::size_t j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(p, j));
            for (std::size_t i = k + 1; i < n; ++i) {
                lu_(i, k) = lu_(i, k) / lu_(k, k);
                const T lik = lu_(i, k);
                for (std::size_t j = k + 1; j < n; ++j) lu_(i, j) -= lik * lu_(k, j);
            }
        }
    }

    std::vector<T> solve(std::vector<T> b) const {
        const std::size_t n = lu_.rows();
        for (std::size_t k = 0; k < n; ++k)
            if (piv_[k] != k) std::swap(b[k], b[piv_[k]]);
        for (std::size_t i = 1; i < n; ++i)
            for (std::size_t j = 0; j < i; ++j) b[i] -= lu_(i, j) * b[j];
        for (std::size_t i = n; i-- > 0;) {
            for (std::size_t j = i + 1; j < n; ++j) b[i] -= lu_(i, j) * b[j];
            b[i] = b[i] / lu_(i, i);
        }
        return b;
    }

    Mat<T> solve(const Mat<T>& b) const {
        Mat<T> x(b.rows(), b.cols());
        std::vector<T> col(b.rows());
        for (std::size_t j = 0; j < b.cols(); ++j) {
            for (std::size_t i = 0; i < b.rows(); ++i) col[i] = b(i, j);
            col = solve(std::move(col));
            for (std::size_t i = 0; i < b.rows(); ++i) x(i, j) = col[i];
        }
        return x;
    }

private:
    Mat<T> lu_;
    std::vector<std::size_t> piv_;
};

} // namespace liejet
