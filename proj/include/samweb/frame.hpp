#pragma once

#include "samweb/expr.hpp"
#include "samweb/webspec.hpp"

#include <span>
#include <string>
#include <vector>

namespace samweb::frame {

// The frame derivative operators of a 3-web with web function f:
//   d1 = -(1/f_x) d/dx,   d2 = -(1/f_y) d/dy,
// extended to w-jets by d_i(w^(k)) = -w^(k+1). A Frame either binds the
// closed forms of a WebSpec or works with a purely symbolic f, which lets
// identities be verified once for all webs.
class Frame {
public:
    static Frame for_web(const webs::WebSpec& web);
    static Frame abstract();

    bool is_abstract() const { return abstract_; }

    const expr::ExprPtr& f() const { return f_; }
    const expr::ExprPtr& fx() const { return fx_; }
    const expr::ExprPtr& fy() const { return fy_; }

    // Substitutes the web's closed forms for f/g symbols (identity when
    // abstract).
    expr::ExprPtr bind(const expr::ExprPtr& e) const;

    // One frame derivative; i is 1 or 2. Throws JetOrderOverflow when w'''
    // would need differentiating, FrameSymbolPresent on frame symbols.
    expr::ExprPtr derive(const expr::ExprPtr& e, int i) const;

    // delta = d1 - d2; annihilates any function of f alone.
    expr::ExprPtr delta(const expr::ExprPtr& e) const;

    // Chern connection coefficient H = f_xy / (f_x f_y), so that
    // d omega_i = gamma ^ omega_i with gamma = H omega_3.
    expr::ExprPtr chern_h() const;

    // Scalar curvature from the coordinate formula
    //   K = -(1/(f_x f_y)) (log|f_x/f_y|)_xy,
    // with log|r| realized as log(r^2)/2 so sign-indefinite ratios work.
    expr::ExprPtr curvature_coord() const;

    // Scalar curvature from the frame route K = d1(H) - d2(H).
    expr::ExprPtr curvature_frame() const;

    // d1 d2 e - d2 d1 e - H (d2 e - d1 e); identically zero for closed forms.
    expr::ExprPtr commutator_residual(const expr::ExprPtr& e) const;

private:
    Frame() = default;

    bool abstract_ = false;
    expr::ExprPtr f_, g_, fx_, fy_;
};

// Convenience wrappers in spec vocabulary.
expr::ExprPtr frame_derive(const expr::ExprPtr& e, int i, const webs::WebSpec& web);
expr::ExprPtr delta_op(const expr::ExprPtr& e, const webs::WebSpec& web);
expr::ExprPtr chern_h(const webs::WebSpec& web);
expr::ExprPtr curvature_coord(const webs::WebSpec& web);
expr::ExprPtr curvature_frame(const webs::WebSpec& web);
expr::ExprPtr commutator_residual(const expr::ExprPtr& e, const webs::WebSpec& web);

// A defining relation for an abstract unknown: the frame-derivative word on
// the left (outermost index first) rewrites to the expression on the right,
// e.g. sigma1 with word [2] -> H.
struct RewriteRelation {
    std::string symbol;
    std::vector<int> word;
    expr::ExprPtr rhs;
};

// Rewrites all frame-symbol words to a canonical form: relations are applied
// on matching inner words (commuting derivatives inward with
// [d1,d2] = H(d2-d1) as needed, H differentiated concretely through the
// frame), and symbols with no applicable relation get their word sorted with
// 1-indices before 2-indices. Terminates by a rewrite-step cap; a relation
// set that keeps reintroducing symbols raises NonTerminatingRelationCycle.
expr::ExprPtr abstract_normal_form(const expr::ExprPtr& e,
                                   std::span<const RewriteRelation> relations,
                                   const Frame& frame);

} // namespace samweb::frame
