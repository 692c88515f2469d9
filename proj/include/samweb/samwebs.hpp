#pragma once

#include "samweb/expr.hpp"
#include "samweb/frame.hpp"
#include "samweb/webspec.hpp"
#include "samweb/wjet.hpp"
#include "samweb/zero.hpp"

#include <array>
#include <map>
#include <optional>
#include <string>

namespace samweb::webs {

// A 1-form a dx + b dy.
struct OneForm {
    expr::ExprPtr dx;
    expr::ExprPtr dy;
};

// Canonical normalization of the 4-web of (f, g):
//   omega1 = -f_x dx, omega2 = -f_y dy, omega3 = df, omega4 = f_x dx + b f_y dy,
// with b = (f_x g_y)/(f_y g_x) and lambda = f_x/g_x, so that
// omega1+omega2+omega3 = 0, omega4+omega1+b*omega2 = 0 and omega4 = lambda dg.
struct WebForms {
    std::array<OneForm, 4> omega;
    expr::ExprPtr b;
    expr::ExprPtr lambda;
};

WebForms canonical_forms(const WebSpec& web);

// dx^dy coefficient of omega3^omega1 + omega4^omega2; structurally zero for
// every canonical WebForms.
expr::ExprPtr s_condition_residual(const WebForms& forms);

// Web cut out on the Lagrangian surface of the potential S: f = S_x, g = S_y
// (so f_y = g_x holds structurally). Nondegeneracy checks as in WebSpec.
WebSpec lagrangian_web(const expr::ExprPtr& S, const Domain& domain,
                       std::uint64_t seed = kDefaultSeed, const std::string& name = "lagrangian");

// B = 2bH - b_1 + (b-1) w'.
expr::ExprPtr samuelson_B(const WebSpec& web);

struct IntegrabilityResiduals {
    expr::ExprPtr cond1; // affine in the w-jets
    expr::ExprPtr cond2; // w-free
    expr::ExprPtr R;     // (b_1 - H_2 + H^2 - H B)/b, carries w'
    expr::ExprPtr r;     // H - b_1/b
};

// The two obstructions to integrability of the reduced Samuelson system:
//   cond1 = R_2 + r H_1 - r H^2 - H_11 + 3 H H_1 - H^3 - 2 H R,
//   cond2 = r_2 + H^2 - H_1 - r H.
IntegrabilityResiduals integrability_residuals(const WebSpec& web);

// E = K + d2 d1 log|b| - H d1 log|b|; equals -cond2 identically.
expr::ExprPtr curvature_b_residual(const WebSpec& web);

struct TCoefficients {
    expr::JetCoefficients jets;
    std::optional<int> leading; // largest jet order with nonzero coefficient
};

TCoefficients collect_T(const WebSpec& web);

enum class RankVerdict { MaxRankSix, VacuouslyMaxRank, NotMaxRank, Undetermined };

const char* to_string(RankVerdict v);

struct RankCondition {
    std::string label;
    expr::ExprPtr residual;
    expr::ZeroVerdict verdict;
};

// Everything the maximum-rank test produces: the w-free condition, the
// curvature/b form of it, the T-coefficients and the delta-residuals of
// their ratios against the leading coefficient.
struct RankReport {
    std::string web_name;
    RankCondition cond2;
    RankCondition curvature_b; // cond2 re-expressed through K; residual of E + cond2
    TCoefficients t;
    std::map<std::string, RankCondition> ratio_residuals; // keys "T0".."T3", "const"
    RankVerdict verdict = RankVerdict::Undetermined;
    // When Undetermined (zero evidence only numeric), what the numbers say.
    RankVerdict numeric_verdict = RankVerdict::Undetermined;
    bool structural_evidence = true;
    std::vector<std::string> failing; // labels of failed conditions
};

// Assembles the verdict: VacuouslyMaxRank when cond1 vanishes identically as
// a w-polynomial, MaxRankSix when cond2 and every ratio residual vanish and a
// leading coefficient exists, NotMaxRank with the failing conditions listed,
// Undetermined when the chain of zeros rests on numeric evidence only.
RankReport rank_verdict(const WebSpec& web);

} // namespace samweb::webs
