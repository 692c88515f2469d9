#include "samweb/expr.hpp"

#include <sstream>

namespace samweb::expr {

namespace {

// Precedence levels: 1 sum, 2 product/fraction, 3 power, 4 atom.
int level_of(const ExprPtr& e) {
    switch (e->node().index()) {
        case 0: { // Const
            const auto& c = e->as<ConstNode>()->value;
            if (c < 0) return 1;
            if (!is_integer(c)) return 2; // prints as p/q
            return 4;
        }
        case 2: return 1; // Sum
        case 3: return 2; // Prod
        case 4: return std::get<PowNode>(e->node()).exponent < 0 ? 2 : 3;
        default: return 4;
    }
}

std::string render(const ExprPtr& e, int need);

// Splits a leading numeric sign off a term so sums print as a - b.
std::pair<bool, ExprPtr> split_sign(const ExprPtr& e) {
    if (const auto* c = e->as<ConstNode>()) {
        if (c->value < 0) return {true, constant(-c->value)};
        return {false, e};
    }
    if (const auto* p = e->as<ProdNode>()) {
        if (!p->factors.empty()) {
            if (const auto* c = p->factors.front()->as<ConstNode>()) {
                if (c->value < 0) {
                    std::vector<ExprPtr> rest(p->factors.begin() + 1, p->factors.end());
                    if (c->value != -1) rest.insert(rest.begin(), constant(-c->value));
                    return {true, prod(std::move(rest))};
                }
            }
        }
    }
    return {false, e};
}

std::string render_exponent(const Rational& e) {
    if (is_integer(e) && e > 0) return to_string(e);
    return "(" + to_string(e) + ")";
}

std::string render_pow(const ExprPtr& base, const Rational& exp) {
    if (exp < 0) {
        // Fraction form: 1/base^|exp|.
        Rational p = -exp;
        std::string body = p == 1 ? render(base, 3) : render(base, 4) + "^" + render_exponent(p);
        return "1/" + body;
    }
    return render(base, 4) + "^" + render_exponent(exp);
}

std::string render_product(const std::vector<ExprPtr>& factors) {
    std::vector<std::string> num;
    std::vector<std::string> den;
    for (const auto& f : factors) {
        if (const auto* p = f->as<PowNode>(); p && p->exponent < 0) {
            Rational q = -p->exponent;
            den.push_back(q == 1 ? render(p->base, 3)
                                 : render(p->base, 4) + "^" + render_exponent(q));
        } else {
            num.push_back(render(f, 2));
        }
    }
    std::string ns;
    if (num.empty()) {
        ns = "1";
    } else {
        for (std::size_t i = 0; i < num.size(); ++i) {
            if (i) ns += "*";
            ns += num[i];
        }
    }
    if (den.empty()) return ns;
    std::string ds;
    if (den.size() == 1 && den[0].find('*') == std::string::npos &&
        den[0].find('+') == std::string::npos && den[0].find(' ') == std::string::npos &&
        den[0].find('/') == std::string::npos) {
        ds = den[0];
    } else {
        ds = "(";
        for (std::size_t i = 0; i < den.size(); ++i) {
            if (i) ds += "*";
            ds += den[i];
        }
        ds += ")";
    }
    return ns + "/" + ds;
}

std::string render_raw(const ExprPtr& e) {
    switch (e->node().index()) {
        case 0:
            return to_string(e->as<ConstNode>()->value);
        case 1:
            return e->as<CoordNode>()->axis == Axis::X ? "x" : "y";
        case 2: {
            const auto& terms = e->as<SumNode>()->terms;
            std::string s;
            for (std::size_t i = 0; i < terms.size(); ++i) {
                auto [neg, body] = split_sign(terms[i]);
                if (i == 0) {
                    s += (neg ? "-" : "") + render(body, 2);
                } else {
                    s += neg ? " - " : " + ";
                    s += render(body, 2);
                }
            }
            return s;
        }
        case 3:
            return render_product(e->as<ProdNode>()->factors);
        case 4: {
            const auto* p = e->as<PowNode>();
            return render_pow(p->base, p->exponent);
        }
        case 5: {
            const auto* el = e->as<ElemNode>();
            return std::string(elem_name(el->kind)) + "(" + render(el->arg, 1) + ")";
        }
        case 6: {
            const auto* f = e->as<FnSymNode>();
            std::string s = fn_name(f->name);
            if (f->dx || f->dy) {
                s += "_";
                s.append(static_cast<std::size_t>(f->dx), 'x');
                s.append(static_cast<std::size_t>(f->dy), 'y');
            }
            return s;
        }
        case 7:
            return "w" + std::string(static_cast<std::size_t>(e->as<WJetNode>()->order), '\'');
        case 8: {
            const auto* fs = e->as<FrameSymNode>();
            std::string s = fs->name + "[";
            for (int i : fs->word) s += static_cast<char>('0' + i);
            return s + "]";
        }
    }
    return "?";
}

std::string render(const ExprPtr& e, int need) {
    std::string s = render_raw(e);
    if (level_of(e) < need) return "(" + s + ")";
    return s;
}

} // namespace

std::string to_string(const ExprPtr& e) {
    auto [neg, body] = split_sign(e);
    std::string s = render(body, 1);
    return neg ? "-" + s : s;
}

} // namespace samweb::expr
