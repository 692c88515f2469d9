#include "samweb/normalize.hpp"

#include <algorithm>
#include <cassert>
#include <map>

namespace samweb::expr {

namespace {

// ---- polynomial layer --------------------------------------------------------
//
// A monomial maps atoms (non-polynomial subexpressions: coordinates, symbols,
// elementary functions, and compound bases carrying fractional powers) to
// rational exponents. Polynomials are term lists in descending graded-lex
// order; a rational form is a pair of polynomials plus the side conditions
// collected from cancellations.

using Mono = std::vector<std::pair<ExprPtr, Rational>>;

struct Term {
    Mono mono;
    Rational coeff;
};

using Poly = std::vector<Term>;

struct RatForm {
    Poly num;
    Poly den; // never empty
    std::vector<ExprPtr> conds;
};

Rational mono_degree(const Mono& m) {
    Rational d = 0;
    for (const auto& [a, e] : m) d += e;
    return d;
}

// >0 when a precedes b in the canonical (descending graded-lex) order.
int mono_cmp(const Mono& a, const Mono& b) {
    Rational da = mono_degree(a), db = mono_degree(b);
    if (da != db) return da > db ? 1 : -1;
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (i == a.size()) return -1; // a ran out: b has an earlier atom with positive exp
        if (j == b.size()) return 1;
        int c = compare(a[i].first, b[j].first);
        if (c < 0) return 1;  // a has the earlier atom
        if (c > 0) return -1; // b has the earlier atom
        if (a[i].second != b[j].second) return a[i].second > b[j].second ? 1 : -1;
        ++i;
        ++j;
    }
    return 0;
}

bool poly_equal(const Poly& a, const Poly& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].coeff != b[i].coeff) return false;
        if (mono_cmp(a[i].mono, b[i].mono) != 0) return false;
    }
    return true;
}

Poly poly_const(const Rational& c) {
    if (c == 0) return {};
    return {Term{{}, c}};
}

const Poly& poly_one() {
    static const Poly one = poly_const(1);
    return one;
}

bool poly_is_one(const Poly& p) {
    return p.size() == 1 && p[0].mono.empty() && p[0].coeff == 1;
}

// Sorts terms descending and combines equal monomials.
void poly_canonicalize(Poly& p) {
    std::sort(p.begin(), p.end(),
              [](const Term& a, const Term& b) { return mono_cmp(a.mono, b.mono) > 0; });
    Poly out;
    out.reserve(p.size());
    for (auto& t : p) {
        if (!out.empty() && mono_cmp(out.back().mono, t.mono) == 0) {
            out.back().coeff += t.coeff;
            if (out.back().coeff == 0) out.pop_back();
        } else if (t.coeff != 0) {
            out.push_back(std::move(t));
        }
    }
    p = std::move(out);
}

Poly poly_add(const Poly& a, const Poly& b) {
    Poly r;
    r.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        int c = mono_cmp(a[i].mono, b[j].mono);
        if (c > 0) {
            r.push_back(a[i++]);
        } else if (c < 0) {
            r.push_back(b[j++]);
        } else {
            Rational s = a[i].coeff + b[j].coeff;
            if (s != 0) r.push_back(Term{a[i].mono, s});
            ++i;
            ++j;
        }
    }
    for (; i < a.size(); ++i) r.push_back(a[i]);
    for (; j < b.size(); ++j) r.push_back(b[j]);
    return r;
}

Poly poly_scale(Poly p, const Rational& c) {
    if (c == 0) return {};
    for (auto& t : p) t.coeff *= c;
    return p;
}

bool atom_is_compound(const ExprPtr& atom) {
    return atom->is<SumNode>() || atom->is<ProdNode>() || atom->is<PowNode>() ||
           atom->is<ConstNode>();
}

// Merges exponent maps. Compound atoms whose exponent lands on a (nonzero)
// integer are moved to `expand`; they get multiplied out by the caller.
Mono mono_mul(const Mono& a, const Mono& b, std::vector<std::pair<ExprPtr, long>>& expand) {
    Mono r;
    r.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    auto emit = [&](const ExprPtr& atom, const Rational& e, bool merged) {
        if (e == 0) return;
        if (merged && atom_is_compound(atom) && is_integer(e)) {
            expand.emplace_back(atom, static_cast<long>(numerator(e).convert_to<long long>()));
            return;
        }
        r.emplace_back(atom, e);
    };
    while (i < a.size() && j < b.size()) {
        int c = compare(a[i].first, b[j].first);
        if (c < 0) {
            r.push_back(a[i++]);
        } else if (c > 0) {
            r.push_back(b[j++]);
        } else {
            emit(a[i].first, a[i].second + b[j].second, true);
            ++i;
            ++j;
        }
    }
    for (; i < a.size(); ++i) r.push_back(a[i]);
    for (; j < b.size(); ++j) r.push_back(b[j]);
    return r;
}

// Forward declarations for the mutually recursive rational-form layer.
RatForm rf_mul(const RatForm& a, const RatForm& b, int depth);
RatForm rf_add(const RatForm& a, const RatForm& b, int depth);
RatForm rf_pow_int(const RatForm& a, long k, int depth);
RatForm from_expr(const ExprPtr& e, int depth);
ExprPtr poly_to_expr(const Poly& p);
ExprPtr rat_to_expr(const RatForm& rf);
RatForm normalize_fraction(Poly num, Poly den, std::vector<ExprPtr> conds);

constexpr int kMaxDepth = 64;
constexpr long kMaxExpandedPower = 200;

void check_depth(int depth) {
    if (depth > kMaxDepth)
        fail(ErrorKind::InvalidArgument, "expression nesting exceeds the normalization depth cap");
}

void merge_conds(std::vector<ExprPtr>& into, const std::vector<ExprPtr>& more) {
    for (const auto& c : more) into.push_back(c);
}

void finish_conds(std::vector<ExprPtr>& conds) {
    std::sort(conds.begin(), conds.end(),
              [](const ExprPtr& a, const ExprPtr& b) { return compare(a, b) < 0; });
    conds.erase(std::unique(conds.begin(), conds.end(),
                            [](const ExprPtr& a, const ExprPtr& b) { return equal(a, b); }),
                conds.end());
}

RatForm rf_simple(Poly p, std::vector<ExprPtr> conds = {}) {
    return RatForm{std::move(p), poly_one(), std::move(conds)};
}

// Product of two plain polynomials; surd expansions route back through the
// rational-form layer.
RatForm poly_mul_rf(const Poly& a, const Poly& b, int depth,
                    const std::vector<ExprPtr>& conds) {
    check_depth(depth);
    Poly plain;
    plain.reserve(a.size() * b.size());
    RatForm extras_sum = rf_simple({});
    bool have_extras = false;
    for (const auto& ta : a) {
        for (const auto& tb : b) {
            std::vector<std::pair<ExprPtr, long>> expand;
            Mono m = mono_mul(ta.mono, tb.mono, expand);
            Rational c = ta.coeff * tb.coeff;
            if (expand.empty()) {
                plain.push_back(Term{std::move(m), std::move(c)});
            } else {
                RatForm part = rf_simple({Term{std::move(m), std::move(c)}});
                for (const auto& [base, k] : expand) {
                    RatForm rb = from_expr(base, depth + 1);
                    part = rf_mul(part, rf_pow_int(rb, k, depth + 1), depth + 1);
                }
                extras_sum = rf_add(extras_sum, part, depth + 1);
                have_extras = true;
            }
        }
    }
    poly_canonicalize(plain);
    RatForm result = rf_simple(std::move(plain), conds);
    if (have_extras) result = rf_add(result, extras_sum, depth + 1);
    return result;
}

Rational poly_content_signed(const Poly& p) {
    // gcd of coefficient numerators over lcm of denominators, carrying the
    // sign of the leading coefficient.
    assert(!p.empty());
    Integer g = 0, l = 1;
    for (const auto& t : p) {
        g = boost::multiprecision::gcd(g, boost::multiprecision::abs(numerator(t.coeff)));
        l = boost::multiprecision::lcm(l, denominator(t.coeff));
    }
    Rational c(g, l);
    if (p[0].coeff < 0) c = -c;
    return c;
}

RatForm normalize_fraction(Poly num, Poly den, std::vector<ExprPtr> conds) {
    if (den.empty())
        fail(ErrorKind::DomainViolation, "division by a structurally zero denominator");

    if (num.empty()) {
        if (!poly_is_one(den)) conds.push_back(poly_to_expr(den));
        finish_conds(conds);
        return RatForm{{}, poly_one(), std::move(conds)};
    }

    // Per-atom exponent shift: divide num and den by atom^s where s is the
    // minimum exponent over all terms of both. s>0 cancels a common factor
    // (recorded as a side condition); s<0 clears negative exponents.
    struct AtomCmp {
        bool operator()(const ExprPtr& a, const ExprPtr& b) const { return compare(a, b) < 0; }
    };
    std::map<ExprPtr, std::pair<Rational, std::size_t>, AtomCmp> stats; // min exp, count
    const std::size_t total_terms = num.size() + den.size();
    for (const Poly* p : {&num, &den}) {
        for (const auto& t : *p) {
            for (const auto& [a, e] : t.mono) {
                auto it = stats.find(a);
                if (it == stats.end()) {
                    stats.emplace(a, std::make_pair(e, std::size_t{1}));
                } else {
                    if (e < it->second.first) it->second.first = e;
                    ++it->second.second;
                }
            }
        }
    }
    std::map<ExprPtr, Rational, AtomCmp> shifts;
    for (auto& [atom, st] : stats) {
        Rational s = st.first;
        if (st.second < total_terms && s > 0) s = 0; // atom absent somewhere
        if (s != 0) {
            shifts.emplace(atom, s);
            if (s > 0) conds.push_back(atom);
        }
    }
    if (!shifts.empty()) {
        auto apply_shifts = [&](Poly& p) {
            for (auto& t : p) {
                for (const auto& [atom, s] : shifts) {
                    bool found = false;
                    for (auto& [a, e] : t.mono) {
                        if (equal(a, atom)) {
                            e -= s;
                            found = true;
                            break;
                        }
                    }
                    if (!found) t.mono.emplace_back(atom, -s);
                }
                t.mono.erase(std::remove_if(t.mono.begin(), t.mono.end(),
                                            [](const auto& pe) { return pe.second == 0; }),
                             t.mono.end());
                std::sort(t.mono.begin(), t.mono.end(), [](const auto& l, const auto& r) {
                    return compare(l.first, r.first) < 0;
                });
            }
        };
        apply_shifts(num);
        apply_shifts(den);
        poly_canonicalize(num);
        poly_canonicalize(den);
    }

    // Scale so the denominator is primitive with positive leading coefficient.
    Rational c = poly_content_signed(den);
    if (c != 1) {
        num = poly_scale(std::move(num), 1 / c);
        den = poly_scale(std::move(den), 1 / c);
    }

    // Full cancellation: num a rational multiple of den.
    if (!poly_is_one(den) && num.size() == den.size()) {
        Rational q = num[0].coeff / den[0].coeff;
        bool match = true;
        for (std::size_t i = 0; i < num.size(); ++i) {
            if (mono_cmp(num[i].mono, den[i].mono) != 0 || num[i].coeff != q * den[i].coeff) {
                match = false;
                break;
            }
        }
        if (match) {
            conds.push_back(poly_to_expr(den));
            finish_conds(conds);
            return RatForm{poly_const(q), poly_one(), std::move(conds)};
        }
    }

    finish_conds(conds);
    return RatForm{std::move(num), std::move(den), std::move(conds)};
}

RatForm rf_invert(RatForm a) {
    std::swap(a.num, a.den);
    return a;
}

RatForm rf_mul(const RatForm& a, const RatForm& b, int depth) {
    check_depth(depth);
    std::vector<ExprPtr> conds = a.conds;
    merge_conds(conds, b.conds);
    RatForm nn = poly_mul_rf(a.num, b.num, depth + 1, {});
    RatForm dd = poly_mul_rf(a.den, b.den, depth + 1, {});
    if (poly_is_one(nn.den) && poly_is_one(dd.den)) {
        merge_conds(conds, nn.conds);
        merge_conds(conds, dd.conds);
        return normalize_fraction(std::move(nn.num), std::move(dd.num), std::move(conds));
    }
    RatForm r = rf_mul(nn, rf_invert(dd), depth + 1);
    merge_conds(r.conds, conds);
    finish_conds(r.conds);
    return r;
}

RatForm rf_add(const RatForm& a, const RatForm& b, int depth) {
    check_depth(depth);
    std::vector<ExprPtr> conds = a.conds;
    merge_conds(conds, b.conds);
    if (poly_equal(a.den, b.den)) {
        return normalize_fraction(poly_add(a.num, b.num), a.den, std::move(conds));
    }
    RatForm t1 = poly_mul_rf(a.num, b.den, depth + 1, {});
    RatForm t2 = poly_mul_rf(b.num, a.den, depth + 1, {});
    RatForm dd = poly_mul_rf(a.den, b.den, depth + 1, {});
    if (poly_is_one(t1.den) && poly_is_one(t2.den) && poly_is_one(dd.den)) {
        merge_conds(conds, t1.conds);
        merge_conds(conds, t2.conds);
        merge_conds(conds, dd.conds);
        return normalize_fraction(poly_add(t1.num, t2.num), std::move(dd.num), std::move(conds));
    }
    RatForm r = rf_mul(rf_add(t1, t2, depth + 1), rf_invert(dd), depth + 1);
    merge_conds(r.conds, conds);
    finish_conds(r.conds);
    return r;
}

RatForm rf_pow_int(const RatForm& a, long k, int depth) {
    check_depth(depth);
    if (k == 0) return rf_simple(poly_one(), a.conds);
    if (k < 0) return rf_pow_int(rf_invert(a), -k, depth);
    if (k > kMaxExpandedPower)
        fail(ErrorKind::InvalidArgument, "integer exponent too large to expand");
    RatForm acc = rf_simple(poly_one(), a.conds);
    RatForm base = a;
    long e = k;
    while (e > 0) {
        if (e & 1) acc = rf_mul(acc, base, depth + 1);
        e >>= 1;
        if (e) base = rf_mul(base, base, depth + 1);
    }
    return acc;
}

// base^r for non-integer rational r, where p is one side of a normalized
// fraction. Bare atoms take the exponent directly; anything else becomes a
// compound atom so that later integer exponents expand exactly.
RatForm poly_pow_frac(const Poly& p, const Rational& r, int depth) {
    check_depth(depth);
    if (p.empty()) {
        if (r > 0) return rf_simple({});
        fail(ErrorKind::DomainViolation, "zero base raised to a negative power");
    }
    if (p.size() == 1) {
        const Term& t = p[0];
        if (t.mono.empty()) {
            // Pure rational constant: take the exact root when it exists.
            Rational c = t.coeff;
            if (boost::multiprecision::abs(numerator(r)) <= kMaxExpandedPower &&
                denominator(r) <= 16) {
                long pnum = static_cast<long>(numerator(r).convert_to<long long>());
                unsigned qden = denominator(r).convert_to<unsigned>();
                Integer rn, rd;
                bool negative = c < 0;
                if (!negative || (qden % 2 == 1)) {
                    if (exact_root(boost::multiprecision::abs(numerator(c)), qden, rn) &&
                        exact_root(denominator(c), qden, rd)) {
                        Rational root(rn, rd);
                        if (negative) root = -root;
                        long e = pnum < 0 ? -pnum : pnum;
                        Rational powv = 1;
                        for (long i = 0; i < e; ++i) powv *= root;
                        if (pnum < 0) {
                            if (powv == 0)
                                fail(ErrorKind::DomainViolation,
                                     "zero base raised to a negative power");
                            powv = 1 / powv;
                        }
                        return rf_simple(poly_const(powv));
                    }
                }
            }
            ExprPtr atom = constant(c);
            return rf_simple({Term{Mono{{atom, r}}, Rational(1)}});
        }
        if (t.coeff == 1 && t.mono.size() == 1 && t.mono[0].second == 1 &&
            !atom_is_compound(t.mono[0].first)) {
            return rf_simple({Term{Mono{{t.mono[0].first, r}}, Rational(1)}});
        }
    }
    ExprPtr atom = poly_to_expr(p);
    return rf_simple({Term{Mono{{atom, r}}, Rational(1)}});
}

ExprPtr elem_atom(ElemKind kind, const ExprPtr& argn) {
    switch (kind) {
        case ElemKind::Log:
            if (is_one_const(argn)) return constant(0);
            if (const auto* e = argn->as<ElemNode>(); e && e->kind == ElemKind::Exp)
                return e->arg;
            break;
        case ElemKind::Exp:
            if (is_zero_const(argn)) return constant(1);
            break;
        case ElemKind::Sin:
            if (is_zero_const(argn)) return constant(0);
            break;
        case ElemKind::Cos:
            if (is_zero_const(argn)) return constant(1);
            break;
        case ElemKind::Sqrt:
            break; // handled by the power path
    }
    return nullptr;
}

RatForm from_expr(const ExprPtr& e, int depth) {
    check_depth(depth);
    switch (e->node().index()) {
        case 0: { // Const
            return rf_simple(poly_const(e->as<ConstNode>()->value));
        }
        case 1: // Coord
        case 6: // FnSym
        case 7: // WJet
        case 8: // FrameSym
            return rf_simple({Term{Mono{{e, Rational(1)}}, Rational(1)}});
        case 2: { // Sum
            RatForm acc = rf_simple({});
            for (const auto& t : e->as<SumNode>()->terms)
                acc = rf_add(acc, from_expr(t, depth + 1), depth + 1);
            return acc;
        }
        case 3: { // Prod
            RatForm acc = rf_simple(poly_one());
            for (const auto& f : e->as<ProdNode>()->factors)
                acc = rf_mul(acc, from_expr(f, depth + 1), depth + 1);
            return acc;
        }
        case 4: { // Pow
            const auto* p = e->as<PowNode>();
            RatForm rb = from_expr(p->base, depth + 1);
            if (is_integer(p->exponent)) {
                if (boost::multiprecision::abs(numerator(p->exponent)) > kMaxExpandedPower)
                    fail(ErrorKind::InvalidArgument, "integer exponent too large to expand");
                long k = static_cast<long>(numerator(p->exponent).convert_to<long long>());
                return rf_pow_int(rb, k, depth + 1);
            }
            RatForm top = poly_pow_frac(rb.num, p->exponent, depth + 1);
            RatForm bot = poly_pow_frac(rb.den, -p->exponent, depth + 1);
            RatForm r = rf_mul(top, bot, depth + 1);
            merge_conds(r.conds, rb.conds);
            finish_conds(r.conds);
            return r;
        }
        case 5: { // Elem
            const auto* el = e->as<ElemNode>();
            RatForm ra = from_expr(el->arg, depth + 1);
            ExprPtr argn = rat_to_expr(ra);
            if (el->kind == ElemKind::Sqrt) {
                RatForm r = from_expr(pow(argn, Rational(1, 2)), depth + 1);
                merge_conds(r.conds, ra.conds);
                finish_conds(r.conds);
                return r;
            }
            if (ExprPtr folded = elem_atom(el->kind, argn)) {
                RatForm r = from_expr(folded, depth + 1);
                merge_conds(r.conds, ra.conds);
                finish_conds(r.conds);
                return r;
            }
            ExprPtr atom = elem(el->kind, argn);
            return rf_simple({Term{Mono{{atom, Rational(1)}}, Rational(1)}}, ra.conds);
        }
    }
    fail(ErrorKind::InvalidArgument, "unknown expression node");
}

ExprPtr term_to_expr(const Term& t) {
    std::vector<ExprPtr> factors;
    if (t.coeff != 1 || t.mono.empty()) factors.push_back(constant(t.coeff));
    for (const auto& [atom, e] : t.mono) factors.push_back(pow(atom, e));
    return prod(std::move(factors));
}

ExprPtr poly_to_expr(const Poly& p) {
    if (p.empty()) return constant(0);
    std::vector<ExprPtr> terms;
    terms.reserve(p.size());
    for (const auto& t : p) terms.push_back(term_to_expr(t));
    return sum(std::move(terms));
}

ExprPtr rat_to_expr(const RatForm& rf) {
    if (rf.num.empty()) return constant(0);
    if (poly_is_one(rf.den)) return poly_to_expr(rf.num);
    ExprPtr den_inv = pow(poly_to_expr(rf.den), Rational(-1));
    if (rf.num.size() == 1 && rf.num[0].mono.empty() && rf.num[0].coeff == 1) return den_inv;
    return prod({poly_to_expr(rf.num), den_inv});
}

} // namespace

ExprPtr normalize(const ExprPtr& e) { return rat_to_expr(from_expr(e, 0)); }

NormalResult normalize_with_conditions(const ExprPtr& e) {
    RatForm rf = from_expr(e, 0);
    return NormalResult{rat_to_expr(rf), rf.conds};
}

bool structurally_zero(const ExprPtr& e) { return from_expr(e, 0).num.empty(); }

} // namespace samweb::expr
