#pragma once

#include "samweb/expr.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace samweb::expr {

// Numeric bindings for symbols that have no closed form. Keys are the
// printed symbol names: "f", "f_x", "w", "w'", "sigma[12]" and so on.
using Bindings = std::map<std::string, double>;

struct EvalOptions {
    // When set, records the largest |value| seen at any subexpression; the
    // zero test uses it to scale its tolerance.
    bool track_magnitude = false;
    // When set, unbound symbols evaluate to a deterministic pseudo-random
    // value derived from (symbol name, auto_seed) instead of throwing.
    bool auto_bind = false;
    std::uint64_t auto_seed = 0;
};

struct EvalResult {
    double value = 0.0;
    double max_magnitude = 0.0;
};

// IEEE double evaluation at a point. Throws UnboundSymbol for symbols without
// bindings (unless auto_bind) and DomainViolation for log/sqrt outside their
// domain, fractional powers of negative bases, or divisors within 1e-12 of
// zero.
EvalResult eval_at(const ExprPtr& e, double px, double py, const Bindings& bindings = {},
                   const EvalOptions& options = {});

inline double eval_value(const ExprPtr& e, double px, double py, const Bindings& b = {}) {
    return eval_at(e, px, py, b).value;
}

// Flat postfix program for tight numeric loops (grid quadrature, tracing,
// finite differences). Unlike eval_at it does not police small divisors; the
// caller checks the result is finite. Unbound symbols are a compile error.
class CompiledExpr {
public:
    CompiledExpr() = default;
    static CompiledExpr compile(const ExprPtr& e, const Bindings& bindings = {});

    double operator()(double px, double py) const;

private:
    enum class Op : std::uint8_t {
        PushConst, PushX, PushY, Add, Sub, Mul, Div, Neg,
        PowInt, PowReal, Log, Exp, Sqrt, Sin, Cos
    };
    struct Instr {
        Op op;
        double a = 0.0;
        int k = 0;
    };
    std::vector<Instr> code_;
    int max_stack_ = 0;
};

} // namespace samweb::expr
