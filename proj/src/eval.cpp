#include "samweb/eval.hpp"

#include <cmath>
#include <functional>

namespace samweb::expr {

namespace {

constexpr double kDivTol = 1e-12;

std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

double auto_value(const std::string& name, std::uint64_t seed) {
    std::uint64_t h = splitmix64(seed ^ std::hash<std::string>()(name));
    // in [0.5, 1.5), away from zero
    return 0.5 + static_cast<double>(h >> 11) * 0x1.0p-53;
}

struct Ctx {
    double px, py;
    const Bindings* bindings;
    const EvalOptions* opts;
    double max_mag = 0.0;

    double note(double v) {
        double a = std::fabs(v);
        if (a > max_mag) max_mag = a;
        return v;
    }
};

double eval_node(const ExprPtr& e, Ctx& ctx);

double eval_symbol(const ExprPtr& e, Ctx& ctx) {
    std::string key = to_string(e);
    auto it = ctx.bindings->find(key);
    if (it != ctx.bindings->end()) return it->second;
    if (ctx.opts->auto_bind) return auto_value(key, ctx.opts->auto_seed);
    fail(ErrorKind::UnboundSymbol, "no binding for symbol '" + key + "'");
}

double eval_pow(double base, const Rational& exp, Ctx& ctx) {
    if (exp < 0 && std::fabs(base) < kDivTol)
        fail(ErrorKind::DomainViolation, "division by value within 1e-12 of zero");
    if (is_integer(exp)) {
        long long k = numerator(exp).convert_to<long long>();
        bool inv = k < 0;
        unsigned long long n = inv ? static_cast<unsigned long long>(-k)
                                   : static_cast<unsigned long long>(k);
        double acc = 1.0, b = base;
        while (n) {
            if (n & 1ull) acc *= b;
            b *= b;
            n >>= 1;
        }
        return inv ? 1.0 / acc : acc;
    }
    if (base < 0)
        fail(ErrorKind::DomainViolation, "fractional power of a negative base");
    return std::pow(base, to_double(exp));
}

double eval_node(const ExprPtr& e, Ctx& ctx) {
    switch (e->node().index()) {
        case 0:
            return ctx.note(to_double(e->as<ConstNode>()->value));
        case 1:
            return ctx.note(e->as<CoordNode>()->axis == Axis::X ? ctx.px : ctx.py);
        case 2: {
            double s = 0.0;
            for (const auto& t : e->as<SumNode>()->terms) s += eval_node(t, ctx);
            return ctx.note(s);
        }
        case 3: {
            double p = 1.0;
            for (const auto& f : e->as<ProdNode>()->factors) p *= eval_node(f, ctx);
            return ctx.note(p);
        }
        case 4: {
            const auto* p = e->as<PowNode>();
            return ctx.note(eval_pow(eval_node(p->base, ctx), p->exponent, ctx));
        }
        case 5: {
            const auto* el = e->as<ElemNode>();
            double a = eval_node(el->arg, ctx);
            switch (el->kind) {
                case ElemKind::Log:
                    if (a <= 0.0)
                        fail(ErrorKind::DomainViolation, "log of a nonpositive value");
                    return ctx.note(std::log(a));
                case ElemKind::Exp:
                    return ctx.note(std::exp(a));
                case ElemKind::Sqrt:
                    if (a < 0.0) fail(ErrorKind::DomainViolation, "sqrt of a negative value");
                    return ctx.note(std::sqrt(a));
                case ElemKind::Sin:
                    return ctx.note(std::sin(a));
                case ElemKind::Cos:
                    return ctx.note(std::cos(a));
            }
            break;
        }
        case 6:
        case 7:
        case 8:
            return ctx.note(eval_symbol(e, ctx));
    }
    fail(ErrorKind::InvalidArgument, "unknown expression node");
}

} // namespace

EvalResult eval_at(const ExprPtr& e, double px, double py, const Bindings& bindings,
                   const EvalOptions& options) {
    Ctx ctx{px, py, &bindings, &options};
    double v = eval_node(e, ctx);
    return EvalResult{v, ctx.max_mag};
}

// ---- compiled form -----------------------------------------------------------

CompiledExpr CompiledExpr::compile(const ExprPtr& e, const Bindings& bindings) {
    CompiledExpr out;
    int depth = 0;
    // Emission tracks stack depth to size the evaluation stack exactly.
    auto emit = [&](Instr in, int delta) {
        out.code_.push_back(in);
        depth += delta;
        if (depth > out.max_stack_) out.max_stack_ = depth;
    };
    std::function<void(const ExprPtr&)> gen = [&](const ExprPtr& node) {
        switch (node->node().index()) {
            case 0:
                emit({Op::PushConst, to_double(node->as<ConstNode>()->value), 0}, 1);
                return;
            case 1:
                emit({node->as<CoordNode>()->axis == Axis::X ? Op::PushX : Op::PushY, 0, 0}, 1);
                return;
            case 2: {
                const auto& terms = node->as<SumNode>()->terms;
                gen(terms[0]);
                for (std::size_t i = 1; i < terms.size(); ++i) {
                    gen(terms[i]);
                    emit({Op::Add, 0, 0}, -1);
                }
                return;
            }
            case 3: {
                const auto& fs = node->as<ProdNode>()->factors;
                gen(fs[0]);
                for (std::size_t i = 1; i < fs.size(); ++i) {
                    gen(fs[i]);
                    emit({Op::Mul, 0, 0}, -1);
                }
                return;
            }
            case 4: {
                const auto* p = node->as<PowNode>();
                gen(p->base);
                if (is_integer(p->exponent) &&
                    boost::multiprecision::abs(numerator(p->exponent)) <= 1024) {
                    emit({Op::PowInt, 0,
                          static_cast<int>(numerator(p->exponent).convert_to<long long>())},
                         0);
                } else {
                    emit({Op::PowReal, to_double(p->exponent), 0}, 0);
                }
                return;
            }
            case 5: {
                const auto* el = node->as<ElemNode>();
                gen(el->arg);
                switch (el->kind) {
                    case ElemKind::Log: emit({Op::Log, 0, 0}, 0); return;
                    case ElemKind::Exp: emit({Op::Exp, 0, 0}, 0); return;
                    case ElemKind::Sqrt: emit({Op::Sqrt, 0, 0}, 0); return;
                    case ElemKind::Sin: emit({Op::Sin, 0, 0}, 0); return;
                    case ElemKind::Cos: emit({Op::Cos, 0, 0}, 0); return;
                }
                return;
            }
            case 6:
            case 7:
            case 8: {
                std::string key = to_string(node);
                auto it = bindings.find(key);
                if (it == bindings.end())
                    fail(ErrorKind::UnboundSymbol,
                         "no binding for symbol '" + key + "' in compiled expression");
                emit({Op::PushConst, it->second, 0}, 1);
                return;
            }
        }
        fail(ErrorKind::InvalidArgument, "unknown expression node");
    };
    gen(e);
    if (out.max_stack_ > 64)
        fail(ErrorKind::InvalidArgument, "expression too deep for the compiled evaluator");
    return out;
}

double CompiledExpr::operator()(double px, double py) const {
    double stack[64];
    double* sp = stack;
    for (const Instr& in : code_) {
        switch (in.op) {
            case Op::PushConst: *sp++ = in.a; break;
            case Op::PushX: *sp++ = px; break;
            case Op::PushY: *sp++ = py; break;
            case Op::Add: sp[-2] += sp[-1]; --sp; break;
            case Op::Sub: sp[-2] -= sp[-1]; --sp; break;
            case Op::Mul: sp[-2] *= sp[-1]; --sp; break;
            case Op::Div: sp[-2] /= sp[-1]; --sp; break;
            case Op::Neg: sp[-1] = -sp[-1]; break;
            case Op::PowInt: {
                double b = sp[-1];
                int k = in.k;
                bool inv = k < 0;
                unsigned n = inv ? static_cast<unsigned>(-k) : static_cast<unsigned>(k);
                double acc = 1.0;
                while (n) {
                    if (n & 1u) acc *= b;
                    b *= b;
                    n >>= 1;
                }
                sp[-1] = inv ? 1.0 / acc : acc;
                break;
            }
            case Op::PowReal: sp[-1] = std::pow(sp[-1], in.a); break;
            case Op::Log: sp[-1] = std::log(sp[-1]); break;
            case Op::Exp: sp[-1] = std::exp(sp[-1]); break;
            case Op::Sqrt: sp[-1] = std::sqrt(sp[-1]); break;
            case Op::Sin: sp[-1] = std::sin(sp[-1]); break;
            case Op::Cos: sp[-1] = std::cos(sp[-1]); break;
        }
    }
    return sp[-1];
}

} // namespace samweb::expr
