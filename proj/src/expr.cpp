#include "samweb/expr.hpp"

#include <algorithm>
#include <functional>

namespace samweb::expr {

const char* elem_name(ElemKind k) {
    switch (k) {
        case ElemKind::Log: return "log";
        case ElemKind::Exp: return "exp";
        case ElemKind::Sqrt: return "sqrt";
        case ElemKind::Sin: return "sin";
        case ElemKind::Cos: return "cos";
    }
    return "?";
}

const char* fn_name(FnName n) {
    switch (n) {
        case FnName::F: return "f";
        case FnName::G: return "g";
        case FnName::U: return "u";
        case FnName::V: return "v";
        case FnName::S: return "S";
    }
    return "?";
}

namespace {

void combine(std::size_t& seed, std::size_t v) {
    seed ^= v + 0x9e3779b97f4a7c15ull + (seed << 6) + (seed >> 2);
}

std::size_t hash_node(const Node& node) {
    std::size_t h = node.index() * 0x9e3779b97f4a7c15ull + 17;
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, ConstNode>) {
                combine(h, hash_value_of(n.value));
            } else if constexpr (std::is_same_v<T, CoordNode>) {
                combine(h, static_cast<std::size_t>(n.axis));
            } else if constexpr (std::is_same_v<T, SumNode>) {
                for (const auto& t : n.terms) combine(h, t->hash());
            } else if constexpr (std::is_same_v<T, ProdNode>) {
                for (const auto& f : n.factors) combine(h, f->hash());
            } else if constexpr (std::is_same_v<T, PowNode>) {
                combine(h, n.base->hash());
                combine(h, hash_value_of(n.exponent));
            } else if constexpr (std::is_same_v<T, ElemNode>) {
                combine(h, static_cast<std::size_t>(n.kind));
                combine(h, n.arg->hash());
            } else if constexpr (std::is_same_v<T, FnSymNode>) {
                combine(h, static_cast<std::size_t>(n.name));
                combine(h, static_cast<std::size_t>(n.dx) * 31 + static_cast<std::size_t>(n.dy));
            } else if constexpr (std::is_same_v<T, WJetNode>) {
                combine(h, static_cast<std::size_t>(n.order));
            } else if constexpr (std::is_same_v<T, FrameSymNode>) {
                combine(h, std::hash<std::string>()(n.name));
                for (int w : n.word) combine(h, static_cast<std::size_t>(w));
            }
        },
        node);
    return h;
}

int cmp_rational(const Rational& a, const Rational& b) {
    if (a < b) return -1;
    if (b < a) return 1;
    return 0;
}

template <class T>
int cmp_val(const T& a, const T& b) {
    if (a < b) return -1;
    if (b < a) return 1;
    return 0;
}

int cmp_children(const std::vector<ExprPtr>& a, const std::vector<ExprPtr>& b) {
    std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (int c = compare(a[i], b[i])) return c;
    }
    return cmp_val(a.size(), b.size());
}

int cmp_words(const std::vector<int>& a, const std::vector<int>& b) {
    std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (int c = cmp_val(a[i], b[i])) return c;
    }
    return cmp_val(a.size(), b.size());
}

} // namespace

Expr::Expr(Node node) : node_(std::move(node)), hash_(hash_node(node_)) {}

int compare(const ExprPtr& a, const ExprPtr& b) {
    if (a.get() == b.get()) return 0;
    if (int c = cmp_val(a->node().index(), b->node().index())) return c;
    const Node& na = a->node();
    const Node& nb = b->node();
    switch (na.index()) {
        case 0:
            return cmp_rational(std::get<ConstNode>(na).value, std::get<ConstNode>(nb).value);
        case 1:
            return cmp_val(static_cast<int>(std::get<CoordNode>(na).axis),
                           static_cast<int>(std::get<CoordNode>(nb).axis));
        case 2:
            return cmp_children(std::get<SumNode>(na).terms, std::get<SumNode>(nb).terms);
        case 3:
            return cmp_children(std::get<ProdNode>(na).factors, std::get<ProdNode>(nb).factors);
        case 4: {
            const auto& pa = std::get<PowNode>(na);
            const auto& pb = std::get<PowNode>(nb);
            if (int c = compare(pa.base, pb.base)) return c;
            return cmp_rational(pa.exponent, pb.exponent);
        }
        case 5: {
            const auto& ea = std::get<ElemNode>(na);
            const auto& eb = std::get<ElemNode>(nb);
            if (int c = cmp_val(static_cast<int>(ea.kind), static_cast<int>(eb.kind))) return c;
            return compare(ea.arg, eb.arg);
        }
        case 6: {
            const auto& fa = std::get<FnSymNode>(na);
            const auto& fb = std::get<FnSymNode>(nb);
            if (int c = cmp_val(static_cast<int>(fa.name), static_cast<int>(fb.name))) return c;
            if (int c = cmp_val(fa.dx, fb.dx)) return c;
            return cmp_val(fa.dy, fb.dy);
        }
        case 7:
            return cmp_val(std::get<WJetNode>(na).order, std::get<WJetNode>(nb).order);
        case 8: {
            const auto& sa = std::get<FrameSymNode>(na);
            const auto& sb = std::get<FrameSymNode>(nb);
            if (int c = cmp_val(sa.name, sb.name)) return c;
            return cmp_words(sa.word, sb.word);
        }
    }
    return 0;
}

bool equal(const ExprPtr& a, const ExprPtr& b) {
    if (a.get() == b.get()) return true;
    if (a->hash() != b->hash()) return false;
    return compare(a, b) == 0;
}

ExprPtr constant(Rational value) { return std::make_shared<const Expr>(ConstNode{std::move(value)}); }
ExprPtr constant(long long value) { return constant(Rational(value)); }
ExprPtr coord(Axis axis) { return std::make_shared<const Expr>(CoordNode{axis}); }
ExprPtr x() {
    static const ExprPtr e = coord(Axis::X);
    return e;
}
ExprPtr y() {
    static const ExprPtr e = coord(Axis::Y);
    return e;
}

ExprPtr sum(std::vector<ExprPtr> terms) {
    std::vector<ExprPtr> flat;
    flat.reserve(terms.size());
    for (auto& t : terms) {
        if (const auto* s = t->as<SumNode>()) {
            flat.insert(flat.end(), s->terms.begin(), s->terms.end());
        } else {
            flat.push_back(std::move(t));
        }
    }
    if (flat.empty()) return constant(0);
    if (flat.size() == 1) return flat.front();
    return std::make_shared<const Expr>(SumNode{std::move(flat)});
}

ExprPtr prod(std::vector<ExprPtr> factors) {
    std::vector<ExprPtr> flat;
    flat.reserve(factors.size());
    for (auto& f : factors) {
        if (const auto* p = f->as<ProdNode>()) {
            flat.insert(flat.end(), p->factors.begin(), p->factors.end());
        } else {
            flat.push_back(std::move(f));
        }
    }
    if (flat.empty()) return constant(1);
    if (flat.size() == 1) return flat.front();
    return std::make_shared<const Expr>(ProdNode{std::move(flat)});
}

ExprPtr pow(ExprPtr base, Rational exponent) {
    if (exponent == 0) return constant(1);
    if (exponent == 1) return base;
    return std::make_shared<const Expr>(PowNode{std::move(base), std::move(exponent)});
}

ExprPtr elem(ElemKind kind, ExprPtr arg) {
    return std::make_shared<const Expr>(ElemNode{kind, std::move(arg)});
}

ExprPtr fnsym(FnName name, int dx, int dy) {
    if (dx < 0 || dy < 0) fail(ErrorKind::InvalidArgument, "negative derivative order");
    return std::make_shared<const Expr>(FnSymNode{name, dx, dy});
}

ExprPtr wjet(int order) {
    if (order < 0 || order > 3) fail(ErrorKind::JetOrderOverflow, "w-jet order outside 0..3");
    return std::make_shared<const Expr>(WJetNode{order});
}

ExprPtr framesym(std::string name, std::vector<int> word) {
    for (int i : word)
        if (i != 1 && i != 2) fail(ErrorKind::InvalidArgument, "frame word letters must be 1 or 2");
    return std::make_shared<const Expr>(FrameSymNode{std::move(name), std::move(word)});
}

ExprPtr operator+(const ExprPtr& a, const ExprPtr& b) { return sum({a, b}); }
ExprPtr operator-(const ExprPtr& a, const ExprPtr& b) {
    return sum({a, prod({constant(-1), b})});
}
ExprPtr operator*(const ExprPtr& a, const ExprPtr& b) { return prod({a, b}); }
ExprPtr operator/(const ExprPtr& a, const ExprPtr& b) { return prod({a, pow(b, Rational(-1))}); }
ExprPtr operator-(const ExprPtr& a) { return prod({constant(-1), a}); }

bool is_zero_const(const ExprPtr& e) {
    const auto* c = e->as<ConstNode>();
    return c && c->value == 0;
}

bool is_one_const(const ExprPtr& e) {
    const auto* c = e->as<ConstNode>();
    return c && c->value == 1;
}

std::optional<Rational> as_constant(const ExprPtr& e) {
    if (const auto* c = e->as<ConstNode>()) return c->value;
    return std::nullopt;
}

namespace {

bool any_node(const ExprPtr& e, const std::function<bool(const Expr&)>& pred) {
    if (pred(*e)) return true;
    bool found = false;
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, SumNode>) {
                for (const auto& t : n.terms)
                    if (any_node(t, pred)) { found = true; return; }
            } else if constexpr (std::is_same_v<T, ProdNode>) {
                for (const auto& f : n.factors)
                    if (any_node(f, pred)) { found = true; return; }
            } else if constexpr (std::is_same_v<T, PowNode>) {
                found = any_node(n.base, pred);
            } else if constexpr (std::is_same_v<T, ElemNode>) {
                found = any_node(n.arg, pred);
            }
        },
        e->node());
    return found;
}

} // namespace

bool contains_framesym(const ExprPtr& e) {
    return any_node(e, [](const Expr& n) { return n.is<FrameSymNode>(); });
}

bool contains_wjet(const ExprPtr& e) {
    return any_node(e, [](const Expr& n) { return n.is<WJetNode>(); });
}

bool contains_fnsym(const ExprPtr& e, FnName name) {
    return any_node(e, [name](const Expr& n) {
        const auto* f = n.as<FnSymNode>();
        return f && f->name == name;
    });
}

SymbolRef SymbolRef::coordinate(Axis a) {
    SymbolRef r;
    r.tag = Tag::Coord;
    r.axis = a;
    return r;
}
SymbolRef SymbolRef::function(FnName n) {
    SymbolRef r;
    r.tag = Tag::Fn;
    r.fn = n;
    return r;
}
SymbolRef SymbolRef::jet(int order) {
    SymbolRef r;
    r.tag = Tag::WJet;
    r.jet_order = order;
    return r;
}
SymbolRef SymbolRef::frame(std::string name, std::vector<int> word) {
    SymbolRef r;
    r.tag = Tag::Frame;
    r.frame_name = std::move(name);
    r.frame_word = std::move(word);
    return r;
}

} // namespace samweb::expr
