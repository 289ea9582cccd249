#pragma once

#include <stdexcept>
#include <string>

namespace liejet {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct OrderMismatch : Error {
    OrderMismatch(int a, int b)
        : Error("order mismatch: " + std::to_string(a) + " vs " + std::to_string(b)) {}
};

struct ShapeMismatch : Error {
    explicit ShapeMismatch(const std::string& msg) : Error("shape mismatch: " + msg) {}
};

struct IndexOutOfBounds : Error {
    explicit IndexOutOfBounds(const std::string& msg) : Error("index out of bounds: " + msg) {}
};

struct DivisionByZeroConstantTerm : Error {
    DivisionByZeroConstantTerm() : Error("division by series with zero constant term") {}
};

// A standard-function seed psi(u0) is undefined at the given constant term.
struct DomainError : Error {
    std::string function;
    double argument;
    int instruction = -1;
    DomainError(std::string fn, double u0, int instr = -1)
        : Error("domain error in " + fn + " at constant term " + std::to_string(u0) +
                (instr >= 0 ? " (instruction " + std::to_string(instr) + ")" : "")),
          function(std::move(fn)), argument(u0), instruction(instr) {}
};

struct SingularConstantTerm : Error {
    SingularConstantTerm() : Error("constant-term matrix is singular") {}
};

struct UnsupportedOperation : Error {
    explicit UnsupportedOperation(const std::string& name)
        : Error("unsupported operation on traced value: " + name) {}
};

struct NonFiniteCoefficient : Error {
    explicit NonFiniteCoefficient(const std::string& where)
        : Error("non-finite coefficient: " + where) {}
};

struct ConfigError : Error {
    explicit ConfigError(const std::string& msg) : Error("config error: " + msg) {}
};

struct CheckFailed : Error {
    explicit CheckFailed(const std::string& msg) : Error("check failed: " + msg) {}
};

} // namespace liejet
