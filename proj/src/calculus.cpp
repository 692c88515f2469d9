#include "samweb/expr.hpp"
#include "samweb/normalize.hpp"

#include <map>

namespace samweb::expr {

namespace {

ExprPtr diff_raw(const ExprPtr& e, Axis axis);

ExprPtr diff_elem(const ElemNode& el, Axis axis) {
    ExprPtr da = diff_raw(el.arg, axis);
    switch (el.kind) {
        case ElemKind::Log:
            return da / el.arg;
        case ElemKind::Exp:
            return elem(ElemKind::Exp, el.arg) * da;
        case ElemKind::Sqrt:
            return da / (constant(2) * elem(ElemKind::Sqrt, el.arg));
        case ElemKind::Sin:
            return elem(ElemKind::Cos, el.arg) * da;
        case ElemKind::Cos:
            return -(elem(ElemKind::Sin, el.arg) * da);
    }
    fail(ErrorKind::InvalidArgument, "unknown elementary kind");
}

ExprPtr diff_raw(const ExprPtr& e, Axis axis) {
    switch (e->node().index()) {
        case 0: // Const
            return constant(0);
        case 1: // Coord
            return e->as<CoordNode>()->axis == axis ? constant(1) : constant(0);
        case 2: { // Sum
            std::vector<ExprPtr> parts;
            for (const auto& t : e->as<SumNode>()->terms) parts.push_back(diff_raw(t, axis));
            return sum(std::move(parts));
        }
        case 3: { // Prod
            const auto& fs = e->as<ProdNode>()->factors;
            std::vector<ExprPtr> parts;
            for (std::size_t i = 0; i < fs.size(); ++i) {
                std::vector<ExprPtr> term;
                for (std::size_t j = 0; j < fs.size(); ++j)
                    term.push_back(i == j ? diff_raw(fs[j], axis) : fs[j]);
                parts.push_back(prod(std::move(term)));
            }
            return sum(std::move(parts));
        }
        case 4: { // Pow
            const auto* p = e->as<PowNode>();
            return constant(p->exponent) * pow(p->base, p->exponent - 1) *
                   diff_raw(p->base, axis);
        }
        case 5:
            return diff_elem(*e->as<ElemNode>(), axis);
        case 6: { // FnSym
            const auto* f = e->as<FnSymNode>();
            return axis == Axis::X ? fnsym(f->name, f->dx + 1, f->dy)
                                   : fnsym(f->name, f->dx, f->dy + 1);
        }
        case 7: // WJet: constant for coordinate differentiation
            return constant(0);
        case 8:
            fail(ErrorKind::FrameSymbolPresent,
                 "coordinate differentiation does not apply to frame symbols");
    }
    fail(ErrorKind::InvalidArgument, "unknown expression node");
}

ExprPtr symbol_diff_raw(const ExprPtr& e, const ExprPtr& symbol) {
    if (equal(e, symbol)) return constant(1);
    switch (e->node().index()) {
        case 0:
        case 1:
        case 6:
        case 7:
        case 8:
            return constant(0);
        case 2: {
            std::vector<ExprPtr> parts;
            for (const auto& t : e->as<SumNode>()->terms)
                parts.push_back(symbol_diff_raw(t, symbol));
            return sum(std::move(parts));
        }
        case 3: {
            const auto& fs = e->as<ProdNode>()->factors;
            std::vector<ExprPtr> parts;
            for (std::size_t i = 0; i < fs.size(); ++i) {
                std::vector<ExprPtr> term;
                for (std::size_t j = 0; j < fs.size(); ++j)
                    term.push_back(i == j ? symbol_diff_raw(fs[j], symbol) : fs[j]);
                parts.push_back(prod(std::move(term)));
            }
            return sum(std::move(parts));
        }
        case 4: {
            const auto* p = e->as<PowNode>();
            return constant(p->exponent) * pow(p->base, p->exponent - 1) *
                   symbol_diff_raw(p->base, symbol);
        }
        case 5: {
            const auto* el = e->as<ElemNode>();
            ExprPtr da = symbol_diff_raw(el->arg, symbol);
            if (is_zero_const(da)) return constant(0);
            switch (el->kind) {
                case ElemKind::Log: return da / el->arg;
                case ElemKind::Exp: return elem(ElemKind::Exp, el->arg) * da;
                case ElemKind::Sqrt:
                    return da / (constant(2) * elem(ElemKind::Sqrt, el->arg));
                case ElemKind::Sin: return elem(ElemKind::Cos, el->arg) * da;
                case ElemKind::Cos: return -(elem(ElemKind::Sin, el->arg) * da);
            }
            break;
        }
    }
    fail(ErrorKind::InvalidArgument, "unknown expression node");
}

bool matches(const Expr& e, const SymbolRef& ref) {
    switch (ref.tag) {
        case SymbolRef::Tag::Coord: {
            const auto* c = e.as<CoordNode>();
            return c && c->axis == ref.axis;
        }
        case SymbolRef::Tag::Fn: {
            const auto* f = e.as<FnSymNode>();
            return f && f->name == ref.fn;
        }
        case SymbolRef::Tag::WJet: {
            const auto* w = e.as<WJetNode>();
            return w && w->order == ref.jet_order;
        }
        case SymbolRef::Tag::Frame: {
            const auto* s = e.as<FrameSymNode>();
            return s && s->name == ref.frame_name && s->word == ref.frame_word;
        }
    }
    return false;
}

class Substituter {
public:
    Substituter(const SymbolRef& ref, const ExprPtr& replacement)
        : ref_(ref), replacement_(replacement) {}

    ExprPtr walk(const ExprPtr& e) {
        if (matches(*e, ref_)) {
            if (ref_.tag == SymbolRef::Tag::Fn) {
                const auto* f = e->as<FnSymNode>();
                return derivative_of_replacement(f->dx, f->dy);
            }
            return replacement_;
        }
        switch (e->node().index()) {
            case 2: {
                std::vector<ExprPtr> parts;
                for (const auto& t : e->as<SumNode>()->terms) parts.push_back(walk(t));
                return sum(std::move(parts));
            }
            case 3: {
                std::vector<ExprPtr> parts;
                for (const auto& f : e->as<ProdNode>()->factors) parts.push_back(walk(f));
                return prod(std::move(parts));
            }
            case 4: {
                const auto* p = e->as<PowNode>();
                return pow(walk(p->base), p->exponent);
            }
            case 5: {
                const auto* el = e->as<ElemNode>();
                return elem(el->kind, walk(el->arg));
            }
            default:
                return e;
        }
    }

private:
    // d^i/dx^i d^j/dy^j of the replacement, cached per order.
    ExprPtr derivative_of_replacement(int dx, int dy) {
        auto key = std::make_pair(dx, dy);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
        ExprPtr result;
        if (dx > 0) {
            result = diff_raw(derivative_of_replacement(dx - 1, dy), Axis::X);
        } else if (dy > 0) {
            result = diff_raw(derivative_of_replacement(dx, dy - 1), Axis::Y);
        } else {
            result = replacement_;
        }
        cache_.emplace(key, result);
        return result;
    }

    const SymbolRef& ref_;
    ExprPtr replacement_;
    std::map<std::pair<int, int>, ExprPtr> cache_;
};

} // namespace

ExprPtr diff(const ExprPtr& e, Axis axis) {
    if (contains_framesym(e))
        fail(ErrorKind::FrameSymbolPresent,
             "coordinate differentiation does not apply to frame symbols");
    return normalize(diff_raw(e, axis));
}

ExprPtr symbol_diff(const ExprPtr& e, const ExprPtr& symbol) {
    if (!symbol->is<FnSymNode>() && !symbol->is<WJetNode>() && !symbol->is<FrameSymNode>())
        fail(ErrorKind::InvalidArgument, "symbol_diff target must be a symbol node");
    return normalize(symbol_diff_raw(e, symbol));
}

ExprPtr substitute(const ExprPtr& e, const SymbolRef& target, const ExprPtr& replacement) {
    Substituter s(target, replacement);
    return normalize(s.walk(e));
}

} // namespace samweb::expr
