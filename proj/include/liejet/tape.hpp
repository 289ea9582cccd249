#pragma once

// Straight-line code list for a vector field f, recorded once by operator
// overloading and interpreted once per Taylor order. Interpreting with Dual
// coefficients is the gradient-augmented form of every recurrence, which is
// how the coefficients of J(t) = dx(t)/dx0 are propagated.

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "array.hpp"
#include "dual.hpp"
#include "errors.hpp"
#include "series.hpp"

namespace liejet {

enum class Op : std::uint8_t { Input, Const, Add, Sub, Mul, Div, Neg, Elem };

struct Instr {
    Op op;
    int a = -1;       // operand slot (or constant-pool index for Const)
    int b = -1;       // second operand slot
    ElemOp elem{};    // valid when op == Elem
    double param = 0; // pow exponent
    int iparam = 0;   // nthroot degree
};

class CodeList {
public:
    int n_inputs() const { return n_inputs_; }
    const std::vector<double>& constants() const { return constants_; }
    const std::vector<Instr>& instrs() const { return instrs_; }
    const std::vector<int>& outputs() const { return outputs_; }
    int n_slots() const { return n_inputs_ + int(instrs_.size()); }

    std::string dump() const {
        std::ostringstream os;
        for (int i = 0; i < n_inputs_; ++i)
            os << "  %" << i << " = input " << i << "\n";
        for (std::size_t k = 0; k < instrs_.size(); ++k) {
            const Instr& in = instrs_[k];
            os << "  %" << n_inputs_ + int(k) << " = ";
            switch (in.op) {
                case Op::Const: os << "const " << constants_[std::size_t(in.a)]; break;
                case Op::Add: os << "add %" << in.a << " %" << in.b; break;
                case Op::Sub: os << "sub %" << in.a << " %" << in.b; break;
                case Op::Mul: os << "mul %" << in.a << " %" << in.b; break;
                case Op::Div: os << "div %" << in.a << " %" << in.b; break;
                case Op::Neg: os << "neg %" << in.a; break;
                case Op::Elem:
                    os << elem_name(in.elem) << " %" << in.a;
                    if (in.b >= 0) os << " %" << in.b;
                    if (in.elem == ElemOp::PowC) os << " c=" << in.param;
                    if (in.elem == ElemOp::NthRoot) os << " n=" << in.iparam;
                    break;
                case Op::Input: break;
            }
            os << "\n";
        }
        os << "  outputs:";
        for (int o : outputs_) os << " %" << o;
        os << "\n";
        return os.str();
    }

private:
    int n_inputs_ = 0;
    std::vector<double> constants_;
    std::vector<Instr> instrs_;
    std::vector<int> outputs_;

    friend class Recorder;
};

class Recorder;

// Tracing scalar. A Tracer either refers to a recorded slot or holds a plain
// constant not yet attached to the tape; constants fold at record time and
// are pooled when they finally enter an instruction.
class Tracer {
public:
    Tracer() : rec_(nullptr), slot_(-1), cval_(0) {}
    Tracer(double c) : rec_(nullptr), slot_(-1), cval_(c) {}

    bool attached() const { return rec_ != nullptr; }
    double constant_value() const { return cval_; }

private:
    Tracer(Recorder* rec, int slot) : rec_(rec), slot_(slot), cval_(0) {}

    Recorder* rec_;
    int slot_;
    double cval_;

    friend class Recorder;
    friend Tracer trace_binary(Op op, const Tracer& a, const Tracer& b);
    friend Tracer trace_unary(Op op, const Tracer& a);
    friend Tracer trace_elem(ElemOp op, const Tracer& a, const Tracer* b, double param, int iparam);
};

class Recorder {
public:
    explicit Recorder(int n_inputs) { cl_.n_inputs_ = n_inputs; }

    Tracer input(int i) { return Tracer(this, i); }

    int constant_slot(double c) {
        auto it = const_slots_.find(c);
        if (it != const_slots_.end()) return it->second;
        int pool = int(cl_.constants_.size());
        cl_.constants_.push_back(c);
        int slot = emit({Op::Const, pool, -1});
        const_slots_.emplace(c, slot);
        return slot;
    }

    int emit(Instr in) {
        cl_.instrs_.push_back(in);
        return cl_.n_inputs_ + int(cl_.instrs_.size()) - 1;
    }

    Tracer make(int slot) { return Tracer(this, slot); }

    int slot_of(const Tracer& t) {
        if (t.attached()) {
            if (t.rec_ != this) throw Error("tracer belongs to a different recording");
            return t.slot_;
        }
        return constant_slot(t.cval_);
    }

    CodeList finish(const std::vector<Tracer>& outputs) {
        for (const Tracer& t : outputs) cl_.outputs_.push_back(slot_of(t));
        return std::move(cl_);
    }

private:
    CodeList cl_;
    std::map<double, int> const_slots_;
};

namespace detail {

inline double fold_binary(Op op, double a, double b) {
    switch (op) {
        case Op::Add: return a + b;
        case Op::Sub: return a - b;
        case Op::Mul: return a * b;
        case Op::Div: return a / b;
        default: throw Error("fold_binary");
    }
}

} // namespace detail

inline Tracer trace_binary(Op op, const Tracer& a, const Tracer& b) {
    Recorder* rec = a.attached() ? a.rec_ : b.rec_;
    if (!rec) return Tracer(detail::fold_binary(op, a.cval_, b.cval_));
    int sa = rec->slot_of(a), sb = rec->slot_of(b);
    return rec->make(rec->emit({op, sa, sb}));
}

inline Tracer trace_unary(Op op, const Tracer& a) {
    if (!a.attached()) return Tracer(op == Op::Neg ? -a.cval_ : a.cval_);
    Recorder* rec = a.rec_;
    return rec->make(rec->emit({op, a.slot_, -1}));
}

inline Tracer trace_elem(ElemOp op, const Tracer& a, const Tracer* b, double param, int iparam) {
    Recorder* rec = a.attached() ? a.rec_ : (b && b->attached() ? b->rec_ : nullptr);
    if (!rec) {
        // pure constant: evaluate now
        elem_check_domain(op, a.cval_, b ? b->cval_ : 0.0, iparam);
        return Tracer(elem_seed(op, a.cval_, b ? b->cval_ : 0.0, param, iparam));
    }
    Instr in{Op::Elem, rec->slot_of(a), b ? rec->slot_of(*b) : -1, op, param, iparam};
    return rec->make(rec->emit(in));
}

inline Tracer operator+(const Tracer& a, const Tracer& b) { return trace_binary(Op::Add, a, b); }
inline Tracer operator-(const Tracer& a, const Tracer& b) { return trace_binary(Op::Sub, a, b); }
inline Tracer operator*(const Tracer& a, const Tracer& b) { return trace_binary(Op::Mul, a, b); }
inline Tracer operator/(const Tracer& a, const Tracer& b) { return trace_binary(Op::Div, a, b); }
inline Tracer operator-(const Tracer& a) { return trace_unary(Op::Neg, a); }
inline Tracer operator+(const Tracer& a) { return a; }
inline Tracer& operator+=(Tracer& a, const Tracer& b) { a = a + b; return a; }
inline Tracer& operator-=(Tracer& a, const Tracer& b) { a = a - b; return a; }
inline Tracer& operator*=(Tracer& a, const Tracer& b) { a = a * b; return a; }
inline Tracer& operator/=(Tracer& a, const Tracer& b) { a = a / b; return a; }

inline Tracer exp(const Tracer& u) { return trace_elem(ElemOp::Exp, u, nullptr, 0, 0); }
inline Tracer log(const Tracer& u) { return trace_elem(ElemOp::Log, u, nullptr, 0, 0); }
inline Tracer sqrt(const Tracer& u) { return trace_elem(ElemOp::Sqrt, u, nullptr, 0, 0); }
inline Tracer nthroot(const Tracer& u, int n) { return trace_elem(ElemOp::NthRoot, u, nullptr, 0, n); }
inline Tracer expm1(const Tracer& u) { return trace_elem(ElemOp::Expm1, u, nullptr, 0, 0); }
inline Tracer log1p(const Tracer& u) { return trace_elem(ElemOp::Log1p, u, nullptr, 0, 0); }
inline Tracer sin(const Tracer& u) { return trace_elem(ElemOp::Sin, u, nullptr, 0, 0); }
inline Tracer cos(const Tracer& u) { return trace_elem(ElemOp::Cos, u, nullptr, 0, 0); }
inline Tracer tan(const Tracer& u) { return trace_elem(ElemOp::Tan, u, nullptr, 0, 0); }
inline Tracer asin(const Tracer& u) { return trace_elem(ElemOp::Asin, u, nullptr, 0, 0); }
inline Tracer acos(const Tracer& u) { return trace_elem(ElemOp::Acos, u, nullptr, 0, 0); }
inline Tracer atan(const Tracer& u) { return trace_elem(ElemOp::Atan, u, nullptr, 0, 0); }
inline Tracer atan2(const Tracer& y, const Tracer& x) { return trace_elem(ElemOp::Atan2, y, &x, 0, 0); }
inline Tracer sinh(const Tracer& u) { return trace_elem(ElemOp::Sinh, u, nullptr, 0, 0); }
inline Tracer cosh(const Tracer& u) { return trace_elem(ElemOp::Cosh, u, nullptr, 0, 0); }
inline Tracer tanh(const Tracer& u) { return trace_elem(ElemOp::Tanh, u, nullptr, 0, 0); }
inline Tracer asinh(const Tracer& u) { return trace_elem(ElemOp::Asinh, u, nullptr, 0, 0); }
inline Tracer acosh(const Tracer& u) { return trace_elem(ElemOp::Acosh, u, nullptr, 0, 0); }
inline Tracer atanh(const Tracer& u) { return trace_elem(ElemOp::Atanh, u, nullptr, 0, 0); }

inline Tracer pow(const Tracer& u, double c) {
    long long e;
    if (detail::integer_exponent(c, e)) {
        // integer exponents become repeated multiplication at record time
        unsigned long long m = (unsigned long long)(e < 0 ? -e : e);
        Tracer result(1.0), base = u;
        while (m > 0) {
            if (m & 1ULL) result = result * base;
            m >>= 1;
            if (m) base = base * base;
        }
        return e < 0 ? Tracer(1.0) / result : result;
    }
    return trace_elem(ElemOp::PowC, u, nullptr, c, 0);
}

// branching and non-differentiable functions are rejected on traced values
inline bool operator<(const Tracer&, const Tracer&) { throw UnsupportedOperation("operator<"); }
inline bool operator>(const Tracer&, const Tracer&) { throw UnsupportedOperation("operator>"); }
inline bool operator<=(const Tracer&, const Tracer&) { throw UnsupportedOperation("operator<="); }
inline bool operator>=(const Tracer&, const Tracer&) { throw UnsupportedOperation("operator>="); }
inline bool operator==(const Tracer&, const Tracer&) { throw UnsupportedOperation("operator=="); }
inline bool operator!=(const Tracer&, const Tracer&) { throw UnsupportedOperation("operator!="); }
inline Tracer abs(const Tracer&) { throw UnsupportedOperation("abs"); }
inline Tracer fabs(const Tracer&) { throw UnsupportedOperation("fabs"); }
inline Tracer min(const Tracer&, const Tracer&) { throw UnsupportedOperation("min"); }
inline Tracer max(const Tracer&, const Tracer&) { throw UnsupportedOperation("max"); }

// Record the evaluation of an n-vector field built from supported operations.
inline CodeList record(int n, const std::function<std::vector<Tracer>(const std::vector<Tracer>&)>& f) {
    Recorder rec(n);
    std::vector<Tracer> xs;
    xs.reserve(std::size_t(n));
    for (int i = 0; i < n; ++i) xs.push_back(rec.input(i));
    std::vector<Tracer> ys = f(xs);
    return rec.finish(ys);
}

// --- interpretation ------------------------------------------------------

// Walks the tape once per order; all coefficient state for lower orders is
// retained, so pass k does O(k) work per convolution-type instruction.
template <class T>
class Interpreter {
public:
    explicit Interpreter(const CodeList& cl) : cl_(&cl), buf_(std::size_t(cl.n_slots())) {
        for (std::size_t i = 0; i < cl.instrs().size(); ++i) {
            const Instr& in = cl.instrs()[i];
            if (in.op == Op::Elem) {
                elem_index_.push_back(int(elems_.size()));
                elems_.emplace_back(in.elem, in.param, in.iparam, cl.n_inputs() + int(i));
            } else {
                elem_index_.push_back(-1);
            }
        }
    }

    void push_input_coeff(int i, T val) {
        buf_[std::size_t(i)][std::size_t(in_pos_[std::size_t(i)]++)] = std::move(val);
    }

    // size every coefficient buffer for the target order; coefficients are
    // then written in place, with no per-step growth on the hot path
    void reserve(int p) {
        p_ = p;
        for (auto& b : buf_) b.assign(std::size_t(p) + 1, T(0));
        in_pos_.assign(std::size_t(cl_->n_inputs()), 0);
    }

    int computed_order() const { return k_; }

    // compute coefficient k_+1 of every derived slot
    void step() {
        const int k = k_ + 1;
        const int n = cl_->n_inputs();
        if (k > p_) throw Error("stepping past the reserved order " + std::to_string(p_));
        for (int i = 0; i < n; ++i)
            if (in_pos_[std::size_t(i)] != k + 1)
                throw Error("input coefficients not provided through order " + std::to_string(k));
        for (std::size_t ii = 0; ii < cl_->instrs().size(); ++ii) {
            const Instr& in = cl_->instrs()[ii];
            const int self = n + int(ii);
            std::vector<T>& out = buf_[std::size_t(self)];
            switch (in.op) {
                case Op::Const:
                    if (k == 0) out[0] = T(cl_->constants()[std::size_t(in.a)]);
                    break;
                case Op::Add:
                    out[k] = buf_[std::size_t(in.a)][k] + buf_[std::size_t(in.b)][k];
                    break;
                case Op::Sub:
                    out[k] = buf_[std::size_t(in.a)][k] - buf_[std::size_t(in.b)][k];
                    break;
                case Op::Neg:
                    out[k] = -buf_[std::size_t(in.a)][k];
                    break;
                case Op::Mul: {
                    const auto& ua = buf_[std::size_t(in.a)];
                    const auto& ub = buf_[std::size_t(in.b)];
                    T s(0);
                    for (int i = 0; i <= k; ++i) s += ua[i] * ub[k - i];
                    out[k] = std::move(s);
                    break;
                }
                case Op::Div: {
                    const auto& ua = buf_[std::size_t(in.a)];
                    const auto& ub = buf_[std::size_t(in.b)];
                    if (ub[0] == T(0)) throw DivisionByZeroConstantTerm();
                    T s = ua[k];
                    for (int i = 0; i < k; ++i) s -= ub[k - i] * out[i];
                    out[k] = s / ub[0];
                    break;
                }
                case Op::Elem:
                    elems_[std::size_t(elem_index_[ii])].step(
                        k, buf_[std::size_t(in.a)],
                        in.b >= 0 ? &buf_[std::size_t(in.b)] : nullptr, out);
                    break;
                case Op::Input:
                    break;
            }
        }
        k_ = k;
    }

    const std::vector<T>& slot_coeffs(int slot) const { return buf_[std::size_t(slot)]; }

    std::vector<T> output_coeff(int k) const {
        std::vector<T> f;
        f.reserve(cl_->outputs().size());
        for (int o : cl_->outputs()) f.push_back(buf_[std::size_t(o)][k]);
        return f;
    }

private:
    const CodeList* cl_;
    std::vector<std::vector<T>> buf_;
    std::vector<int> in_pos_;  // next write index per input slot
    std::vector<ElemEval<T>> elems_;
    std::vector<int> elem_index_;
    int k_ = -1;
    int p_ = -1;
};

// single-pass algebraic evaluation: all input coefficients given up front
template <class T>
std::vector<std::vector<T>> interpret(const CodeList& cl, const std::vector<std::vector<T>>& inputs) {
    if (int(inputs.size()) != cl.n_inputs()) throw ShapeMismatch("interpret input count");
    const int p = int(inputs[0].size()) - 1;
    Interpreter<T> it(cl);
    it.reserve(p);
    for (int k = 0; k <= p; ++k) {
        for (int i = 0; i < cl.n_inputs(); ++i) it.push_input_coeff(i, inputs[std::size_t(i)][k]);
        it.step();
    }
    std::vector<std::vector<T>> out;
    for (int o : cl.outputs()) out.push_back(it.slot_coeffs(o));
    return out;
}

inline std::vector<double> eval(const CodeList& cl, const std::vector<double>& x) {
    std::vector<std::vector<double>> in;
    for (double xi : x) in.push_back({xi});
    auto out = interpret(cl, in);
    std::vector<double> y;
    for (auto& o : out) y.push_back(o[0]);
    return y;
}

// --- solution coefficients and their Jacobians ---------------------------

template <class S>
struct GradedCoefficients {
    int order = 0;
    std::vector<std::vector<S>> x;  // x[k] is the n-vector coefficient x_k
    std::vector<Mat<S>> grads;      // dx_k/dx0, present when requested

    bool has_grads() const { return !grads.empty(); }
    std::size_t dim() const { return x.empty() ? 0 : x[0].size(); }

    TaylorArray<S> state_series() const {
        const std::size_t n = dim();
        std::vector<TaylorSeries<S>> comps;
        for (std::size_t i = 0; i < n; ++i) {
            SeriesBuilder<S> b(order);
            for (int k = 0; k <= order; ++k) b[k] = x[std::size_t(k)][i];
            comps.push_back(b.build());
        }
        return state_vector(std::move(comps));
    }

    TaylorArray<S> jacobian_series() const {
        if (!has_grads()) throw Error("jacobian not propagated");
        return TaylorArray<S>::assemble(grads);
    }
};

// Taylor coefficients of the solution of x' = f(x), x(0) = x0, through order
// p: one interpretation pass per order and x_{k+1} = f_k / (k+1). When
// want_jacobian, every recurrence runs over Dual coefficients seeded with
// unit vectors, so dx_k/dx0 comes out alongside x_k and J(0) = I exactly.
template <class S>
GradedCoefficients<S> taylcoeffs(const CodeList& cl, const std::vector<S>& x0, int p,
                                 bool want_jacobian = false) {
    const std::size_t n = std::size_t(cl.n_inputs());
    if (x0.size() != n) throw ShapeMismatch("x0 length vs field dimension");
    if (int(cl.outputs().size()) != int(n)) throw ShapeMismatch("field output count");
    if (p < 0) throw Error("negative order");
    for (const S& v : x0)
        if (!finite_value(v)) throw NonFiniteCoefficient("x0");

    GradedCoefficients<S> out;
    out.order = p;

    const std::vector<int>& outs = cl.outputs();
    auto run = [&](auto&& seed_input, auto&& store_coeff) {
        using T = std::decay_t<decltype(seed_input(0))>;
        Interpreter<T> it(cl);
        it.reserve(p);
        for (std::size_t i = 0; i < n; ++i) it.push_input_coeff(int(i), seed_input(i));
        std::vector<T> cur(n);
        for (std::size_t i = 0; i < n; ++i) cur[i] = it.slot_coeffs(int(i))[0];
        store_coeff(0, cur);
        for (int k = 0; k < p; ++k) {
            it.step();
            for (std::size_t i = 0; i < n; ++i) {
                T xk1 = it.slot_coeffs(outs[i])[k] / T(double(k + 1));
                if (!RealTraits<T>::finite(xk1))
                    throw NonFiniteCoefficient("x_" + std::to_string(k + 1));
                it.push_input_coeff(int(i), xk1);
                cur[i] = std::move(xk1);
            }
            store_coeff(k + 1, cur);
        }
    };

    if (!want_jacobian) {
        out.x.assign(std::size_t(p) + 1, {});
        run([&](std::size_t i) { return x0[i]; },
            [&](int k, const std::vector<S>& c) { out.x[std::size_t(k)] = c; });
    } else {
        out.x.assign(std::size_t(p) + 1, {});
        out.grads.assign(std::size_t(p) + 1, Mat<S>(n, n));
        run([&](std::size_t i) { return Dual<S>::seeded(x0[i], n, i); },
            [&](int k, const std::vector<Dual<S>>& c) {
                out.x[std::size_t(k)].resize(n);
                for (std::size_t i = 0; i < n; ++i) {
                    out.x[std::size_t(k)][i] = c[i].v;
                    for (std::size_t j = 0; j < n; ++j)
                        out.grads[std::size_t(k)](i, j) = c[i].g.empty() ? S(0) : c[i].g[j];
                }
            });
    }
    return out;
}

// Taylor coefficients A_k of the Jacobian f'(x(t)) along a given state
// series, by forward-mode duals seeded on the constant term.
template <class S>
std::vector<Mat<S>> field_jacobian_coeffs(const CodeList& cl, const TaylorArray<S>& x) {
    const std::size_t n = std::size_t(cl.n_inputs());
    if (x.size() != n) throw ShapeMismatch("state dimension");
    const int p = x.order();
    std::vector<std::vector<Dual<S>>> in(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (int k = 0; k <= p; ++k) {
            const S& v = x.at(i).tc(k);
            in[i].push_back(k == 0 ? Dual<S>::seeded(v, n, i) : Dual<S>(v));
        }
    }
    auto out = interpret(cl, in);
    std::vector<Mat<S>> ak;
    for (int k = 0; k <= p; ++k) {
        Mat<S> m(out.size(), n);
        for (std::size_t i = 0; i < out.size(); ++i)
            for (std::size_t j = 0; j < n; ++j)
                m(i, j) = out[i][std::size_t(k)].g.empty() ? S(0) : out[i][std::size_t(k)].g[j];
        ak.push_back(std::move(m));
    }
    return ak;
}

// --- finite-difference validation of the propagated Jacobians ------------

struct FdEntry {
    int k, i, j;
    double ad, fd, rel;
};

struct FdJacobianReport {
    double max_rel = 0;
    std::vector<FdEntry> entries;  // every compared (k,i,j)
};

inline FdJacobianReport finite_difference_jacobian_check(const CodeList& cl,
                                                         const std::vector<double>& x0, int p) {
    const std::size_t n = x0.size();
    auto graded = taylcoeffs(cl, x0, p, true);
    FdJacobianReport rep;
    const double h0 = std::cbrt(std::numeric_limits<double>::epsilon());
    for (std::size_t j = 0; j < n; ++j) {
        const double h = h0 * (1.0 + std::fabs(x0[j]));
        std::vector<double> xp = x0, xm = x0;
        xp[j] += h;
        xm[j] -= h;
        auto gp = taylcoeffs(cl, xp, p, false);
        auto gm = taylcoeffs(cl, xm, p, false);
        for (int k = 0; k <= p; ++k)
            for (std::size_t i = 0; i < n; ++i) {
                const double fd = (gp.x[std::size_t(k)][i] - gm.x[std::size_t(k)][i]) / (2 * h);
                const double ad = graded.grads[std::size_t(k)](i, j);
                const double rel = std::fabs(fd - ad) / std::max(1.0, std::fabs(ad));
                rep.entries.push_back({k, int(i), int(j), ad, fd, rel});
                rep.max_rel = std::max(rep.max_rel, rel);
            }
    }
    return rep;
}

} // namespace liejet
