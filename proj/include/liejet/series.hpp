#pragma once

// Truncated univariate Taylor-series arithmetic over an abstract real scalar.
//
// A series of order p stores coefficients u_0..u_p with u_k = u^(k)(t0)/k!.
// The four basic arithmetic operations use the classical convolution
// recurrences; every standard function is realized through one universal
// sub-ODE recurrence: if v = psi(u) satisfies  dv = phi(u,v) du  with phi
// built from basic arithmetic only, then
//
//   v_0 = psi(u_0),   v_k = (1/k) * sum_{i=1..k} i * u_i * phi_{k-i}.
//
// phi_j consumes only v_0..v_j, so the coefficients can be generated in one
// forward sweep. Some functions are produced jointly as a pair (v,w), e.g.
// sin/cos, or asin together with sqrt(1-u^2).

#include <cmath>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "dual.hpp"
#include "errors.hpp"
#include "real.hpp"

namespace liejet {

template <class T>
class TaylorSeries {
public:
    TaylorSeries() : c_(1, T(0)) {}

    // order-0 constant series; any scalar convertible to T works, so generic
    // model code can write V(0), V(1), ...
    template <class U>
        requires std::is_convertible_v<U, T>
    explicit TaylorSeries(const U& c) : c_(1, T(c)) {
        if (!finite_value(c_[0])) throw NonFiniteCoefficient("series constructor");
    }

    static TaylorSeries zero(int order) { return constant(order, T(0)); }

    static TaylorSeries constant(int order, T c) {
        if (order < 0) throw Error("negative series order");
        if (!finite_value(c)) throw NonFiniteCoefficient("series constructor");
        TaylorSeries s;
        s.c_.assign(std::size_t(order) + 1, T(0));
        s.c_[0] = std::move(c);
        return s;
    }

    static TaylorSeries from_coeffs(std::vector<T> coeffs) {
        if (coeffs.empty()) throw Error("series needs at least one coefficient");
        for (const T& x : coeffs)
            if (!finite_value(x)) throw NonFiniteCoefficient("from_coeffs");
        return TaylorSeries(std::move(coeffs), raw_tag{});
    }

    // c + t, the usual expansion seed for an independent variable
    static TaylorSeries variable(int order, T c) {
        TaylorSeries s = constant(order, std::move(c));
        if (order >= 1) s.c_[1] = T(1);
        return s;
    }

    int order() const { return int(c_.size()) - 1; }
    const T& tc(int k) const {
        if (k < 0 || k > order()) throw IndexOutOfBounds("tc(" + std::to_string(k) + ")");
        return c_[std::size_t(k)];
    }
    const std::vector<T>& coeffs() const { return c_; }

    // coefficient with order-0 broadcast: missing high coefficients read as 0
    T bc(int k) const { return k <= order() ? c_[std::size_t(k)] : T(0); }

    TaylorSeries truncated(int q) const {
        if (q < 0 || q > order()) throw IndexOutOfBounds("truncated(" + std::to_string(q) + ")");
        return TaylorSeries(std::vector<T>(c_.begin(), c_.begin() + q + 1), raw_tag{});
    }

private:
    struct raw_tag {};
    TaylorSeries(std::vector<T> coeffs, raw_tag) : c_(std::move(coeffs)) {}
    std::vector<T> c_;

    template <class U> friend class SeriesBuilder;
};

// Internal mutable builder; the public series type is immutable.
template <class T>
class SeriesBuilder {
public:
    explicit SeriesBuilder(int order) : c_(std::size_t(order) + 1, T(0)) {}
    T& operator[](int k) { return c_[std::size_t(k)]; }
    const T& operator[](int k) const { return c_[std::size_t(k)]; }
    int order() const { return int(c_.size()) - 1; }
    TaylorSeries<T> build() {
        return TaylorSeries<T>(std::move(c_), typename TaylorSeries<T>::raw_tag{});
    }

private:
    std::vector<T> c_;
};

// Only equal orders, or one order-0 operand (broadcast as a constant), mix.
inline int combined_order(int pu, int pv) {
    if (pu == pv || pv == 0) return pu;
    if (pu == 0) return pv;
    throw OrderMismatch(pu, pv);
}

// --- basic arithmetic ----------------------------------------------------

template <class T>
TaylorSeries<T> operator+(const TaylorSeries<T>& u, const TaylorSeries<T>& v) {
    const int p = combined_order(u.order(), v.order());
    SeriesBuilder<T> w(p);
    for (int k = 0; k <= p; ++k) w[k] = u.bc(k) + v.bc(k);
    return w.build();
}

template <class T>
TaylorSeries<T> operator-(const TaylorSeries<T>& u, const TaylorSeries<T>& v) {
    const int p = combined_order(u.order(), v.order());
    SeriesBuilder<T> w(p);
    for (int k = 0; k <= p; ++k) w[k] = u.bc(k) - v.bc(k);
    return w.build();
}

template <class T>
TaylorSeries<T> operator-(const TaylorSeries<T>& u) {
    SeriesBuilder<T> w(u.order());
    for (int k = 0; k <= u.order(); ++k) w[k] = -u.tc(k);
    return w.build();
}

template <class T>
TaylorSeries<T> operator*(const TaylorSeries<T>& u, const TaylorSeries<T>& v) {
    const int p = combined_order(u.order(), v.order());
    SeriesBuilder<T> w(p);
    for (int k = 0; k <= p; ++k) {
        T s(0);
        for (int i = 0; i <= k; ++i) s += u.bc(i) * v.bc(k - i);
        w[k] = s;
    }
    return w.build();
}

template <class T>
TaylorSeries<T> operator/(const TaylorSeries<T>& u, const TaylorSeries<T>& v) {
    const int p = combined_order(u.order(), v.order());
    const T v0 = v.tc(0);
    if (v0 == T(0)) throw DivisionByZeroConstantTerm();
    SeriesBuilder<T> w(p);
    for (int k = 0; k <= p; ++k) {
        T s = u.bc(k);
        for (int i = 0; i < k; ++i) s -= v.bc(k - i) * w[i];
        w[k] = s / v0;
    }
    return w.build();
}

template <class T> TaylorSeries<T> add(const TaylorSeries<T>& u, const TaylorSeries<T>& v) { return u + v; }
template <class T> TaylorSeries<T> sub(const TaylorSeries<T>& u, const TaylorSeries<T>& v) { return u - v; }
template <class T> TaylorSeries<T> mul(const TaylorSeries<T>& u, const TaylorSeries<T>& v) { return u * v; }
template <class T> TaylorSeries<T> div(const TaylorSeries<T>& u, const TaylorSeries<T>& v) { return u / v; }

// scalar operands act as order-0 constant series
template <class T, class U>
    requires std::is_convertible_v<U, T>
TaylorSeries<T> operator+(const TaylorSeries<T>& u, const U& c) { return u + TaylorSeries<T>(T(c)); }
template <class T, class U>
    requires std::is_convertible_v<U, T>
TaylorSeries<T> operator+(const U& c, const TaylorSeries<T>& u) { return TaylorSeries<T>(T(c)) + u; }
template <class T, class U>
    requires std::is_convertible_v<U, T>
TaylorSeries<T> operator-(const TaylorSeries<T>& u, const U& c) { return u - TaylorSeries<T>(T(c)); }
template <class T, class U>
    requires std::is_convertible_v<U, T>
TaylorSeries<T> operator-(const U& c, const TaylorSeries<T>& u) { return TaylorSeries<T>(T(c)) - u; }
template <class T, class U>
    requires std::is_convertible_v<U, T>
TaylorSeries<T> operator*(const TaylorSeries<T>& u, const U& c) { return u * TaylorSeries<T>(T(c)); }
template <class T, class U>
    requires std::is_convertible_v<U, T>
TaylorSeries<T> operator*(const U& c, const TaylorSeries<T>& u) { return TaylorSeries<T>(T(c)) * u; }
template <class T, class U>
    requires std::is_convertible_v<U, T>
TaylorSeries<T> operator/(const TaylorSeries<T>& u, const U& c) { return u / TaylorSeries<T>(T(c)); }
template <class T, class U>
    requires std::is_convertible_v<U, T>
TaylorSeries<T> operator/(const U& c, const TaylorSeries<T>& u) { return TaylorSeries<T>(T(c)) / u; }

// --- sub-ODE machinery ---------------------------------------------------

// phi(u,v) is a tiny straight-line program over basic arithmetic only.
enum class PhiOp : std::uint8_t { U, U2, DU, DU2, V, V2, Const, Add, Sub, Mul, Div, Neg };

struct PhiNode {
    PhiOp op;
    int a = -1;
    int b = -1;
    double c = 0;
};

struct PhiProgram {
    std::vector<PhiNode> nodes;
    int out = -1;                  // phi driving the primary output
    int out2 = -1;                 // phi driving the paired output
    bool direct_integral = false;  // v_k = out_{k-1}/k (two-argument forms)
};

// Incremental evaluator for a PhiProgram: one coefficient per advance() call.
// phi_j may read u,v (and the pair partner) only up to index j, except DU
// which reads index j+1 of its input; callers guarantee availability.
template <class T>
class SubOdeState {
public:
    SubOdeState() = default;
    explicit SubOdeState(const PhiProgram& prog) : buf_(prog.nodes.size()) {}

    void advance(const PhiProgram& prog, int j, const std::vector<T>& u,
                 const std::vector<T>* u2, const std::vector<T>& v,
                 const std::vector<T>* v2) {
        const auto& nodes = prog.nodes;
        for (std::size_t n = 0; n < nodes.size(); ++n) {
            const PhiNode& nd = nodes[n];
            std::vector<T>& out = buf_[n];
            T val(0);
            switch (nd.op) {
                case PhiOp::U: val = u[std::size_t(j)]; break;
                case PhiOp::U2: val = (*u2)[std::size_t(j)]; break;
                case PhiOp::DU: val = T(double(j + 1)) * u[std::size_t(j) + 1]; break;
                case PhiOp::DU2: val = T(double(j + 1)) * (*u2)[std::size_t(j) + 1]; break;
                case PhiOp::V: val = v[std::size_t(j)]; break;
                case PhiOp::V2: val = (*v2)[std::size_t(j)]; break;
                case PhiOp::Const: val = j == 0 ? T(nd.c) : T(0); break;
                case PhiOp::Add: val = buf_[nd.a][j] + buf_[nd.b][j]; break;
                case PhiOp::Sub: val = buf_[nd.a][j] - buf_[nd.b][j]; break;
                case PhiOp::Neg: val = -buf_[nd.a][j]; break;
                case PhiOp::Mul: {
                    const auto& x = buf_[nd.a];
                    const auto& y = buf_[nd.b];
                    for (int i = 0; i <= j; ++i) val += x[i] * y[j - i];
                    break;
                }
                case PhiOp::Div: {
                    const auto& x = buf_[nd.a];
                    const auto& y = buf_[nd.b];
                    if (y[0] == T(0)) throw DivisionByZeroConstantTerm();
                    T s = x[std::size_t(j)];
                    for (int i = 0; i < j; ++i) s -= y[j - i] * out[i];
                    val = s / y[0];
                    break;
                }
            }
            out.push_back(std::move(val));
        }
    }

    const std::vector<T>& node(int i) const { return buf_[std::size_t(i)]; }

private:
    std::vector<std::vector<T>> buf_;
};

// the ⊙ combination: v_k = (1/k) sum_{i=1..k} i u_i phi_{k-i}
template <class T>
T omega_combine(int k, const std::vector<T>& u, const std::vector<T>& phi) {
    T s(0);
    for (int i = 1; i <= k; ++i) s += T(double(i)) * u[std::size_t(i)] * phi[std::size_t(k - i)];
    return s / T(double(k));
}

// --- standard function catalog -------------------------------------------

enum class ElemOp : std::uint8_t {
    Exp, Log, PowC, Sqrt, NthRoot, Expm1, Log1p,
    Sin, Cos, Tan, Asin, Acos, Atan, Atan2,
    Sinh, Cosh, Tanh, Asinh, Acosh, Atanh
};

inline const char* elem_name(ElemOp op) {
    switch (op) {
        case ElemOp::Exp: return "exp";
        case ElemOp::Log: return "log";
        case ElemOp::PowC: return "pow";
        case ElemOp::Sqrt: return "sqrt";
        case ElemOp::NthRoot: return "nthroot";
        case ElemOp::Expm1: return "expm1";
        case ElemOp::Log1p: return "log1p";
        case ElemOp::Sin: return "sin";
        case ElemOp::Cos: return "cos";
        case ElemOp::Tan: return "tan";
        case ElemOp::Asin: return "asin";
        case ElemOp::Acos: return "acos";
        case ElemOp::Atan: return "atan";
        case ElemOp::Atan2: return "atan2";
        case ElemOp::Sinh: return "sinh";
        case ElemOp::Cosh: return "cosh";
        case ElemOp::Tanh: return "tanh";
        case ElemOp::Asinh: return "asinh";
        case ElemOp::Acosh: return "acosh";
        case ElemOp::Atanh: return "atanh";
    }
    return "?";
}

inline bool elem_is_pair(ElemOp op) {
    switch (op) {
        case ElemOp::Sin: case ElemOp::Cos:
        case ElemOp::Sinh: case ElemOp::Cosh:
        case ElemOp::Asin: case ElemOp::Acos:
        case ElemOp::Asinh: case ElemOp::Acosh:
            return true;
        default:
            return false;
    }
}

inline bool elem_is_two_arg(ElemOp op) { return op == ElemOp::Atan2; }

namespace detail {

struct PhiBuilder {
    PhiProgram p;
    int push(PhiNode n) { p.nodes.push_back(n); return int(p.nodes.size()) - 1; }
    int u() { return push({PhiOp::U}); }
    int u2() { return push({PhiOp::U2}); }
    int du() { return push({PhiOp::DU}); }
    int du2() { return push({PhiOp::DU2}); }
    int v() { return push({PhiOp::V}); }
    int v2() { return push({PhiOp::V2}); }
    int cst(double c) { return push({PhiOp::Const, -1, -1, c}); }
    int add(int a, int b) { return push({PhiOp::Add, a, b}); }
    int sub(int a, int b) { return push({PhiOp::Sub, a, b}); }
    int mul(int a, int b) { return push({PhiOp::Mul, a, b}); }
    int div(int a, int b) { return push({PhiOp::Div, a, b}); }
    int neg(int a) { return push({PhiOp::Neg, a}); }
};

} // namespace detail

inline PhiProgram make_phi(ElemOp op, double param = 0, int iparam = 0) {
    detail::PhiBuilder b;
    switch (op) {
        case ElemOp::Exp:
            b.p.out = b.v();
            break;
        case ElemOp::Log:
            b.p.out = b.div(b.cst(1), b.u());
            break;
        case ElemOp::PowC:
            b.p.out = b.div(b.mul(b.cst(param), b.v()), b.u());
            break;
        case ElemOp::Sqrt:
            b.p.out = b.div(b.cst(0.5), b.v());
            break;
        case ElemOp::NthRoot:
            // phi = v / (n u); n stays an exact integer constant
            b.p.out = b.div(b.v(), b.mul(b.cst(double(iparam)), b.u()));
            break;
        case ElemOp::Expm1:
            b.p.out = b.add(b.v(), b.cst(1));
            break;
        case ElemOp::Log1p:
            b.p.out = b.div(b.cst(1), b.add(b.cst(1), b.u()));
            break;
        case ElemOp::Sin:  // pair (sin, cos)
            b.p.out = b.v2();
            b.p.out2 = b.neg(b.v());
            break;
        case ElemOp::Cos:  // pair (cos, sin)
            b.p.out = b.neg(b.v2());
            b.p.out2 = b.v();
            break;
        case ElemOp::Tan:
            b.p.out = b.add(b.cst(1), b.mul(b.v(), b.v()));
            break;
        case ElemOp::Asin: {  // pair (asin u, sqrt(1-u^2))
            int w = b.v2();
            b.p.out = b.div(b.cst(1), w);
            b.p.out2 = b.neg(b.div(b.u(), w));
            break;
        }
        case ElemOp::Acos: {  // pair (acos u, sqrt(1-u^2))
            int w = b.v2();
            b.p.out = b.neg(b.div(b.cst(1), w));
            b.p.out2 = b.neg(b.div(b.u(), w));
            break;
        }
        case ElemOp::Atan:
            b.p.out = b.div(b.cst(1), b.add(b.cst(1), b.mul(b.u(), b.u())));
            break;
        case ElemOp::Atan2: {
            // d atan2(y,x) = (x dy - y dx) / (x^2 + y^2); u = y, u2 = x
            int num = b.sub(b.mul(b.u2(), b.du()), b.mul(b.u(), b.du2()));
            int den = b.add(b.mul(b.u2(), b.u2()), b.mul(b.u(), b.u()));
            b.p.out = b.div(num, den);
            b.p.direct_integral = true;
            break;
        }
        case ElemOp::Sinh:  // pair (sinh, cosh)
        case ElemOp::Cosh:  // pair (cosh, sinh)
            b.p.out = b.v2();
            b.p.out2 = b.v();
            break;
        case ElemOp::Tanh:
            b.p.out = b.sub(b.cst(1), b.mul(b.v(), b.v()));
            break;
        case ElemOp::Asinh: {  // pair (asinh u, sqrt(1+u^2))
            int w = b.v2();
            b.p.out = b.div(b.cst(1), w);
            b.p.out2 = b.div(b.u(), w);
            break;
        }
        case ElemOp::Acosh: {  // pair (acosh u, sqrt(u^2-1))
            int w = b.v2();
            b.p.out = b.div(b.cst(1), w);
            b.p.out2 = b.div(b.u(), w);
            break;
        }
        case ElemOp::Atanh:
            b.p.out = b.div(b.cst(1), b.sub(b.cst(1), b.mul(b.u(), b.u())));
            break;
    }
    return std::move(b.p);
}

inline void elem_check_domain(ElemOp op, double u0, double x0, int iparam, int instr = -1) {
    auto fail = [&] { throw DomainError(elem_name(op), u0, instr); };
    switch (op) {
        case ElemOp::Log: if (!(u0 > 0)) fail(); break;
        case ElemOp::PowC: if (!(u0 > 0)) fail(); break;  // non-integer exponent path
        case ElemOp::Sqrt: if (!(u0 > 0)) fail(); break;
        case ElemOp::NthRoot:
            if (u0 == 0 || (u0 < 0 && iparam % 2 == 0)) fail();
            break;
        case ElemOp::Log1p: if (!(u0 > -1)) fail(); break;
        case ElemOp::Asin: case ElemOp::Acos:
            if (!(u0 > -1 && u0 < 1)) fail();
            break;
        case ElemOp::Acosh: if (!(u0 > 1)) fail(); break;
        case ElemOp::Atanh: if (!(u0 > -1 && u0 < 1)) fail(); break;
        case ElemOp::Atan2: if (u0 == 0 && x0 == 0) fail(); break;
        default: break;
    }
}

template <class T>
T elem_seed(ElemOp op, const T& u0, const T& x0, double param, int iparam) {
    using std::exp; using std::log; using std::sqrt; using std::pow;
    using std::expm1; using std::log1p;
    using std::sin; using std::cos; using std::tan;
    using std::asin; using std::acos; using std::atan; using std::atan2;
    using std::sinh; using std::cosh; using std::tanh;
    using std::asinh; using std::acosh; using std::atanh;
    switch (op) {
        case ElemOp::Exp: return exp(u0);
        case ElemOp::Log: return log(u0);
        case ElemOp::PowC: return pow(u0, param);
        case ElemOp::Sqrt: return sqrt(u0);
        case ElemOp::NthRoot: return nthroot(u0, iparam);
        case ElemOp::Expm1: return expm1(u0);
        case ElemOp::Log1p: return log1p(u0);
        case ElemOp::Sin: return sin(u0);
        case ElemOp::Cos: return cos(u0);
        case ElemOp::Tan: return tan(u0);
        case ElemOp::Asin: return asin(u0);
        case ElemOp::Acos: return acos(u0);
        case ElemOp::Atan: return atan(u0);
        case ElemOp::Atan2: return atan2(u0, x0);
        case ElemOp::Sinh: return sinh(u0);
        case ElemOp::Cosh: return cosh(u0);
        case ElemOp::Tanh: return tanh(u0);
        case ElemOp::Asinh: return asinh(u0);
        case ElemOp::Acosh: return acosh(u0);
        case ElemOp::Atanh: return atanh(u0);
    }
    return T(0);
}

// seed of the hidden pair partner
template <class T>
T elem_seed2(ElemOp op, const T& u0) {
    using std::sin; using std::cos; using std::sinh; using std::cosh; using std::sqrt;
    switch (op) {
        case ElemOp::Sin: return cos(u0);
        case ElemOp::Cos: return sin(u0);
        case ElemOp::Sinh: return cosh(u0);
        case ElemOp::Cosh: return sinh(u0);
        case ElemOp::Asin: case ElemOp::Acos: return sqrt(T(1) - u0 * u0);
        case ElemOp::Asinh: return sqrt(T(1) + u0 * u0);
        case ElemOp::Acosh: return sqrt(u0 * u0 - T(1));
        default: return T(0);
    }
}

// One standard-function evaluation advanced coefficient by coefficient.
// Used directly by the series-level catalog and by the tape interpreter,
// which keeps one ElemEval per recorded standard-function instruction.
template <class T>
class ElemEval {
public:
    ElemEval(ElemOp op, double param = 0, int iparam = 0, int instr = -1)
        : op_(op), param_(param), iparam_(iparam), instr_(instr),
          prog_(make_phi(op, param, iparam)), state_(prog_),
          pair_(elem_is_pair(op)) {}

    // stores coefficient k into v[k] (v is pre-sized by the caller); u (and
    // u2) must hold coefficients through k
    void step(int k, const std::vector<T>& u, const std::vector<T>* u2, std::vector<T>& v) {
        if (k == 0) {
            elem_check_domain(op_, value_of(u[0]), u2 ? value_of((*u2)[0]) : 0.0, iparam_, instr_);
            v[0] = elem_seed(op_, u[0], u2 ? (*u2)[0] : T(0), param_, iparam_);
            if (pair_) aux_.push_back(elem_seed2(op_, u[0]));
            return;
        }
        state_.advance(prog_, k - 1, u, u2, v, pair_ ? &aux_ : nullptr);
        if (prog_.direct_integral) {
            v[std::size_t(k)] = state_.node(prog_.out)[std::size_t(k - 1)] / T(double(k));
        } else {
            v[std::size_t(k)] = omega_combine(k, u, state_.node(prog_.out));
            if (pair_) aux_.push_back(omega_combine(k, u, state_.node(prog_.out2)));
        }
    }

    const std::vector<T>& aux() const { return aux_; }

private:
    ElemOp op_;
    double param_;
    int iparam_;
    int instr_;
    PhiProgram prog_;
    SubOdeState<T> state_;
    std::vector<T> aux_;
    bool pair_;
};

namespace detail {

template <class T>
std::vector<T> padded_coeffs(const TaylorSeries<T>& s, int p) {
    std::vector<T> c = s.coeffs();
    c.resize(std::size_t(p) + 1, T(0));
    return c;
}

} // namespace detail

template <class T>
TaylorSeries<T> apply_elem(ElemOp op, const TaylorSeries<T>& u, double param = 0,
                           int iparam = 0, const TaylorSeries<T>* u2 = nullptr,
                           TaylorSeries<T>* pair_out = nullptr) {
    const int p = u2 ? combined_order(u.order(), u2->order()) : u.order();
    std::vector<T> ub = detail::padded_coeffs(u, p);
    std::vector<T> u2b;
    if (u2) u2b = detail::padded_coeffs(*u2, p);
    ElemEval<T> ev(op, param, iparam);
    std::vector<T> v(std::size_t(p) + 1, T(0));
    for (int k = 0; k <= p; ++k) ev.step(k, ub, u2 ? &u2b : nullptr, v);
    if (pair_out) *pair_out = TaylorSeries<T>::from_coeffs(ev.aux());
    return TaylorSeries<T>::from_coeffs(std::move(v));
}

// --- user-supplied sub-ODEs ----------------------------------------------

// A standard function given by its seed psi and a BAO-only phi program.
template <class T>
struct SubOde {
    PhiProgram phi;
    std::function<T(const T&)> seed;
    std::function<T(const T&)> seed2;  // required when phi.out2 >= 0
};

template <class T>
TaylorSeries<T> sub_ode_apply(const SubOde<T>& so, const TaylorSeries<T>& u,
                              TaylorSeries<T>* second = nullptr) {
    const int p = u.order();
    const bool pair = so.phi.out2 >= 0;
    std::vector<T> ub = detail::padded_coeffs(u, p);
    SubOdeState<T> st(so.phi);
    std::vector<T> v, w;
    v.push_back(so.seed(ub[0]));
    if (pair) w.push_back(so.seed2(ub[0]));
    for (int k = 1; k <= p; ++k) {
        st.advance(so.phi, k - 1, ub, nullptr, v, pair ? &w : nullptr);
        if (so.phi.direct_integral) {
            v.push_back(st.node(so.phi.out)[std::size_t(k - 1)] / T(double(k)));
        } else {
            v.push_back(omega_combine(k, ub, st.node(so.phi.out)));
            if (pair) w.push_back(omega_combine(k, ub, st.node(so.phi.out2)));
        }
    }
    if (second && pair) *second = TaylorSeries<T>::from_coeffs(std::move(w));
    return TaylorSeries<T>::from_coeffs(std::move(v));
}

// --- catalog entry points ------------------------------------------------

template <class T> TaylorSeries<T> exp(const TaylorSeries<T>& u) { return apply_elem(ElemOp::Exp, u); }
template <class T> TaylorSeries<T> log(const TaylorSeries<T>& u) { return apply_elem(ElemOp::Log, u); }
template <class T> TaylorSeries<T> sqrt(const TaylorSeries<T>& u) { return apply_elem(ElemOp::Sqrt, u); }
template <class T> TaylorSeries<T> nthroot(const TaylorSeries<T>& u, int n) {
    if (n == 0) throw DomainError("nthroot", value_of(u.tc(0)));
    return apply_elem(ElemOp::NthRoot, u, 0, n);
}
template <class T> TaylorSeries<T> expm1(const TaylorSeries<T>& u) { return apply_elem(ElemOp::Expm1, u); }
template <class T> TaylorSeries<T> log1p(const TaylorSeries<T>& u) { return apply_elem(ElemOp::Log1p, u); }
template <class T> TaylorSeries<T> sin(const TaylorSeries<T>& u) { return apply_elem(ElemOp::Sin, u); }
template <class T> TaylorSeries<T> cos(const TaylorSeries<T>& u) { return apply_elem(ElemOp::Cos, u); }
template <class T>
std::pair<TaylorSeries<T>, TaylorSeries<T>> sincos(const TaylorSeries<T>& u) {
    TaylorSeries<T> c;
    TaylorSeries<T> s = apply_elem(ElemOp::Sin, u, 0, 0, (const TaylorSeries<T>*)nullptr, &c);
    return {std::move(s), std::move(c)};
}
template <class T> TaylorSeries<T> tan(const TaylorSeries<T>& u) { return apply_elem(ElemOp::Tan, u); }
template <class T> TaylorSeries<T> asin(const TaylorSeries<T>& u) { return apply_elem(ElemOp::Asin, u); }
template <class T> TaylorSeries<T> acos(const TaylorSeries<T>& u) { return apply_elem(ElemOp::Acos, u); }
template <class T> TaylorSeries<T> atan(const TaylorSeries<T>& u) { return apply_elem(ElemOp::Atan, u); }
template <class T>
TaylorSeries<T> atan2(const TaylorSeries<T>& y, const TaylorSeries<T>& x) {
    return apply_elem(ElemOp::Atan2, y, 0, 0, &x);
}
template <class T> TaylorSeries<T> sinh(const TaylorSeries<T>& u) { return apply_elem(ElemOp::Sinh, u); }
template <class T> TaylorSeries<T> cosh(const TaylorSeries<T>& u) { return apply_elem(ElemOp::Cosh, u); }
template <class T> TaylorSeries<T> tanh(const TaylorSeries<T>& u) { return apply_elem(ElemOp::Tanh, u); }
template <class T> TaylorSeries<T> asinh(const TaylorSeries<T>& u) { return apply_elem(ElemOp::Asinh, u); }
template <class T> TaylorSeries<T> acosh(const TaylorSeries<T>& u) { return apply_elem(ElemOp::Acosh, u); }
template <class T> TaylorSeries<T> atanh(const TaylorSeries<T>& u) { return apply_elem(ElemOp::Atanh, u); }

namespace detail {

template <class T>
TaylorSeries<T> pow_uint(const TaylorSeries<T>& u, unsigned long long e) {
    TaylorSeries<T> result = TaylorSeries<T>::constant(u.order(), T(1));
    TaylorSeries<T> base = u;
    while (e > 0) {
        if (e & 1ULL) result = result * base;
        e >>= 1;
        if (e) base = base * base;
    }
    return result;
}

inline bool integer_exponent(double c, long long& out) {
    if (!(c > -1e15 && c < 1e15)) return false;
    long long i = (long long)std::llround(c);
    if (double(i) != c) return false;
    out = i;
    return true;
}

} // namespace detail

// pow with constant exponent: integer exponents reduce to repeated
// multiplication (and division for negative ones, requiring u0 != 0);
// everything else goes through the c*v/u sub-ODE and requires u0 > 0.
template <class T>
TaylorSeries<T> pow(const TaylorSeries<T>& u, double c) {
    long long e;
    if (detail::integer_exponent(c, e)) {
        if (e >= 0) return detail::pow_uint(u, (unsigned long long)e);
        return TaylorSeries<T>(T(1)) / detail::pow_uint(u, (unsigned long long)(-e));
    }
    return apply_elem(ElemOp::PowC, u, c);
}

} // namespace liejet
