#include "samweb/frame.hpp"

#include "samweb/normalize.hpp"

#include <map>

namespace samweb::frame {

using expr::Axis;
using expr::constant;
using expr::ExprPtr;
using expr::normalize;

Frame Frame::for_web(const webs::WebSpec& web) {
    Frame fr;
    fr.f_ = web.f();
    fr.g_ = web.has_g() ? web.g() : nullptr;
    fr.fx_ = web.fx();
    fr.fy_ = web.fy();
    return fr;
}

Frame Frame::abstract() {
    Frame fr;
    fr.abstract_ = true;
    fr.f_ = expr::fnsym(expr::FnName::F);
    fr.fx_ = expr::fnsym(expr::FnName::F, 1, 0);
    fr.fy_ = expr::fnsym(expr::FnName::F, 0, 1);
    return fr;
}

ExprPtr Frame::bind(const ExprPtr& e) const {
    if (abstract_) return e;
    ExprPtr r = expr::substitute(e, expr::SymbolRef::function(expr::FnName::F), f_);
    if (g_) r = expr::substitute(r, expr::SymbolRef::function(expr::FnName::G), g_);
    return r;
}

ExprPtr Frame::derive(const ExprPtr& e, int i) const {
    if (i != 1 && i != 2) fail(ErrorKind::InvalidArgument, "frame index must be 1 or 2");
    if (expr::contains_framesym(e))
        fail(ErrorKind::FrameSymbolPresent,
             "frame symbols are differentiated by the rewrite engine, not directly");
    ExprPtr b = bind(e);
    Axis axis = i == 1 ? Axis::X : Axis::Y;
    const ExprPtr& denom = i == 1 ? fx_ : fy_;
    ExprPtr coord_part = -(expr::diff(b, axis) / denom);

    if (!expr::contains_wjet(b)) return normalize(coord_part);

    // d_i(w^(k)) = -w^(k+1): jets ride along the f-leaves.
    std::vector<ExprPtr> parts{coord_part};
    for (int k = 0; k <= 3; ++k) {
        ExprPtr c = expr::symbol_diff(b, expr::wjet(k));
        if (expr::is_zero_const(c)) continue;
        if (k == 3)
            fail(ErrorKind::JetOrderOverflow, "differentiating w''' needs a fourth jet");
        parts.push_back(-(c * expr::wjet(k + 1)));
    }
    return normalize(expr::sum(std::move(parts)));
}

ExprPtr Frame::delta(const ExprPtr& e) const { return normalize(derive(e, 1) - derive(e, 2)); }

ExprPtr Frame::chern_h() const {
    ExprPtr fxy = expr::diff(fx_, Axis::Y);
    return normalize(fxy / (fx_ * fy_));
}

ExprPtr Frame::curvature_coord() const {
    ExprPtr ratio = fx_ / fy_;
    // log|r| as log(r^2)/2, so the derivative is r'/r on either sign.
    ExprPtr half_log = expr::log(ratio * ratio) / constant(2);
    ExprPtr mixed = expr::diff(expr::diff(half_log, Axis::X), Axis::Y);
    return normalize(-(mixed / (fx_ * fy_)));
}

ExprPtr Frame::curvature_frame() const {
    ExprPtr h = chern_h();
    return normalize(derive(h, 1) - derive(h, 2));
}

ExprPtr Frame::commutator_residual(const ExprPtr& e) const {
    ExprPtr d1e = derive(e, 1);
    ExprPtr d2e = derive(e, 2);
    ExprPtr lhs = derive(d2e, 1) - derive(d1e, 2);
    return normalize(lhs - chern_h() * (d2e - d1e));
}

ExprPtr frame_derive(const ExprPtr& e, int i, const webs::WebSpec& web) {
    return Frame::for_web(web).derive(e, i);
}
ExprPtr delta_op(const ExprPtr& e, const webs::WebSpec& web) {
    return Frame::for_web(web).delta(e);
}
ExprPtr chern_h(const webs::WebSpec& web) { return Frame::for_web(web).chern_h(); }
ExprPtr curvature_coord(const webs::WebSpec& web) { return Frame::for_web(web).curvature_coord(); }
ExprPtr curvature_frame(const webs::WebSpec& web) { return Frame::for_web(web).curvature_frame(); }
ExprPtr commutator_residual(const ExprPtr& e, const webs::WebSpec& web) {
    return Frame::for_web(web).commutator_residual(e);
}

// ---- abstract normal form ----------------------------------------------------

namespace {

class RewriteEngine {
public:
    RewriteEngine(const Frame& frame, std::span<const RewriteRelation> relations)
        : frame_(frame), h_(frame.chern_h()) {
        for (const auto& rel : relations) {
            if (rel.word.empty())
                fail(ErrorKind::InvalidArgument, "rewrite relation needs a nonempty word");
            for (int v : rel.word)
                if (v != 1 && v != 2)
                    fail(ErrorKind::InvalidArgument, "relation word letters must be 1 or 2");
            auto [it, fresh] = relations_[rel.symbol].emplace(rel.word, rel.rhs);
            if (!fresh)
                fail(ErrorKind::InvalidArgument,
                     "two relations share the left-hand side " + rel.symbol);
            if (rel.word.size() > max_len_) max_len_ = rel.word.size();
        }
    }

    ExprPtr reduce_expr(ExprPtr e) {
        e = normalize(e);
        for (;;) {
            tick();
            ExprPtr next = normalize(rewrite_atoms(e));
            if (expr::equal(next, e)) return e;
            e = std::move(next);
        }
    }

private:
    static constexpr int kMaxSteps = 1000;

    const Frame& frame_;
    ExprPtr h_;
    std::map<std::string, std::map<std::vector<int>, ExprPtr>> relations_;
    std::map<std::pair<std::string, std::vector<int>>, ExprPtr> memo_;
    int steps_ = 0;

    void tick() {
        if (++steps_ > kMaxSteps)
            fail(ErrorKind::NonTerminatingRelationCycle,
                 "rewriting exceeded 1000 steps; relations keep reintroducing symbols");
    }

    const ExprPtr* find_relation(const std::string& sym, const std::vector<int>& word) const {
        auto it = relations_.find(sym);
        if (it == relations_.end()) return nullptr;
        auto jt = it->second.find(word);
        return jt == it->second.end() ? nullptr : &jt->second;
    }

    bool has_unit_relation(const std::string& sym, int v) const {
        return find_relation(sym, {v}) != nullptr;
    }

    ExprPtr rewrite_atoms(const ExprPtr& e) {
        switch (e->node().index()) {
            case 2: {
                std::vector<ExprPtr> parts;
                for (const auto& t : e->as<expr::SumNode>()->terms)
                    parts.push_back(rewrite_atoms(t));
                return expr::sum(std::move(parts));
            }
            case 3: {
                std::vector<ExprPtr> parts;
                for (const auto& f : e->as<expr::ProdNode>()->factors)
                    parts.push_back(rewrite_atoms(f));
                return expr::prod(std::move(parts));
            }
            case 4: {
                const auto* p = e->as<expr::PowNode>();
                return expr::pow(rewrite_atoms(p->base), p->exponent);
            }
            case 5: {
                const auto* el = e->as<expr::ElemNode>();
                return expr::elem(el->kind, rewrite_atoms(el->arg));
            }
            case 8: {
                const auto* s = e->as<expr::FrameSymNode>();
                return reduce_sym(s->name, s->word);
            }
            default:
                return e;
        }
    }

    ExprPtr reduce_sym(const std::string& sym, const std::vector<int>& word) {
        auto key = std::make_pair(sym, word);
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        tick();
        ExprPtr result = reduce_sym_impl(sym, word);
        memo_.emplace(std::move(key), result);
        return result;
    }

    ExprPtr reduce_sym_impl(const std::string& sym, const std::vector<int>& word) {
        if (word.empty()) return expr::framesym(sym, {});

        // Longest matching relation on an inner (suffix) word.
        std::size_t cap = std::min(word.size(), max_len_);
        for (std::size_t len = cap; len >= 1; --len) {
            std::vector<int> suffix(word.end() - static_cast<long>(len), word.end());
            if (const ExprPtr* rhs = find_relation(sym, suffix)) {
                std::vector<int> prefix(word.begin(), word.end() - static_cast<long>(len));
                return apply_word(prefix, *rhs);
            }
        }

        // Bubble the rightmost relation-bearing index inward; otherwise sort
        // the word (1-indices before 2-indices). Both use the transposition
        //   d_a d_b X = d_b d_a X + sign * H (d_2 X - d_1 X),
        // sign = +1 for (a,b)=(1,2) and -1 for (2,1).
        int k = -1;
        for (int i = static_cast<int>(word.size()) - 2; i >= 0; --i) {
            if (has_unit_relation(sym, word[i])) {
                k = i;
                break;
            }
        }
        if (k < 0) {
            for (int i = static_cast<int>(word.size()) - 2; i >= 0; --i) {
                if (word[static_cast<std::size_t>(i)] == 2 &&
                    word[static_cast<std::size_t>(i) + 1] == 1) {
                    k = i;
                    break;
                }
            }
            if (k < 0) return expr::framesym(sym, word); // canonical already
        }
        const auto ku = static_cast<std::size_t>(k);
        int a = word[ku], b = word[ku + 1];
        std::vector<int> swapped = word;
        std::swap(swapped[ku], swapped[ku + 1]);
        std::vector<int> tail(word.begin() + static_cast<long>(ku) + 2, word.end());
        std::vector<int> prefix(word.begin(), word.begin() + static_cast<long>(ku));

        ExprPtr main = reduce_sym(sym, swapped);
        std::vector<int> w2 = tail, w1 = tail;
        w2.insert(w2.begin(), 2);
        w1.insert(w1.begin(), 1);
        ExprPtr c2 = reduce_sym(sym, w2);
        ExprPtr c1 = reduce_sym(sym, w1);
        int sign = (a == 1 && b == 2) ? 1 : -1;
        ExprPtr corr = constant(sign) * h_ * (c2 - c1);
        corr = apply_word(prefix, corr);
        return normalize(main + corr);
    }

    // d_{word} applied to e, innermost operator first.
    ExprPtr apply_word(const std::vector<int>& word, ExprPtr e) {
        for (auto it = word.rbegin(); it != word.rend(); ++it) e = apply_op(*it, e);
        return e;
    }

    // Frame derivative extended to frame symbols.
    ExprPtr apply_op(int i, const ExprPtr& e) {
        tick();
        if (!expr::contains_framesym(e)) return frame_.derive(e, i);
        switch (e->node().index()) {
            case 2: {
                std::vector<ExprPtr> parts;
                for (const auto& t : e->as<expr::SumNode>()->terms)
                    parts.push_back(apply_op(i, t));
                return expr::sum(std::move(parts));
            }
            case 3: {
                const auto& fs = e->as<expr::ProdNode>()->factors;
                std::vector<ExprPtr> parts;
                for (std::size_t j = 0; j < fs.size(); ++j) {
                    std::vector<ExprPtr> term;
                    for (std::size_t l = 0; l < fs.size(); ++l)
                        term.push_back(j == l ? apply_op(i, fs[l]) : fs[l]);
                    parts.push_back(expr::prod(std::move(term)));
                }
                return expr::sum(std::move(parts));
            }
            case 4: {
                const auto* p = e->as<expr::PowNode>();
                return constant(p->exponent) * expr::pow(p->base, p->exponent - 1) *
                       apply_op(i, p->base);
            }
            case 5: {
                const auto* el = e->as<expr::ElemNode>();
                ExprPtr da = apply_op(i, el->arg);
                switch (el->kind) {
                    case expr::ElemKind::Log: return da / el->arg;
                    case expr::ElemKind::Exp: return expr::elem(el->kind, el->arg) * da;
                    case expr::ElemKind::Sqrt:
                        return da / (constant(2) * expr::elem(el->kind, el->arg));
                    case expr::ElemKind::Sin:
                        return expr::elem(expr::ElemKind::Cos, el->arg) * da;
                    case expr::ElemKind::Cos:
                        return -(expr::elem(expr::ElemKind::Sin, el->arg) * da);
                }
                break;
            }
            case 8: {
                const auto* s = e->as<expr::FrameSymNode>();
                std::vector<int> w = s->word;
                w.insert(w.begin(), i);
                return reduce_sym(s->name, w);
            }
            default:
                return frame_.derive(e, i);
        }
        fail(ErrorKind::InvalidArgument, "unknown expression node");
    }
};

} // namespace

ExprPtr abstract_normal_form(const ExprPtr& e, std::span<const RewriteRelation> relations,
                             const Frame& frame) {
    RewriteEngine engine(frame, relations);
    return engine.reduce_expr(e);
}

} // namespace samweb::frame
