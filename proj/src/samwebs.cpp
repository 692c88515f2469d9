#include "samweb/samwebs.hpp"

#include "samweb/normalize.hpp"

namespace samweb::webs {

using expr::constant;
using expr::ExprPtr;
using expr::normalize;
using frame::Frame;

WebForms canonical_forms(const WebSpec& web) {
    if (!web.has_g())
        fail(ErrorKind::InvalidArgument, "canonical forms need both web functions");
    // Nondegeneracy (including |b| and |b-1| bounded away from zero) was
    // enforced when the WebSpec was built.
    WebForms forms;
    ExprPtr b = normalize(web.fx() * web.gy() / (web.fy() * web.gx()));
    ExprPtr lambda = normalize(web.fx() / web.gx());
    ExprPtr zero = constant(0);
    forms.omega[0] = OneForm{normalize(-web.fx()), zero};                 // omega1
    forms.omega[1] = OneForm{zero, normalize(-web.fy())};                 // omega2
    forms.omega[2] = OneForm{web.fx(), web.fy()};                         // omega3 = df
    forms.omega[3] = OneForm{web.fx(), normalize(b * web.fy())};          // omega4
    forms.b = b;
    forms.lambda = lambda;
    return forms;
}

ExprPtr s_condition_residual(const WebForms& forms) {
    const OneForm& o1 = forms.omega[0];
    const OneForm& o2 = forms.omega[1];
    const OneForm& o3 = forms.omega[2];
    const OneForm& o4 = forms.omega[3];
    ExprPtr wedge31 = o3.dx * o1.dy - o3.dy * o1.dx;
    ExprPtr wedge42 = o4.dx * o2.dy - o4.dy * o2.dx;
    return normalize(wedge31 + wedge42);
}

WebSpec lagrangian_web(const ExprPtr& S, const Domain& domain, std::uint64_t seed,
                       const std::string& name) {
    ExprPtr f = expr::diff(S, expr::Axis::X);
    ExprPtr g = expr::diff(S, expr::Axis::Y);
    return WebSpec::make(name, f, g, domain, seed);
}

namespace {

struct SamuelsonData {
    Frame fr;
    ExprPtr H, H1, H2, H11;
    ExprPtr b, b1;
    ExprPtr B, R, r;
};

SamuelsonData samuelson_data(const WebSpec& web) {
    if (!web.has_g())
        fail(ErrorKind::InvalidArgument, "Samuelson analysis needs both web functions");
    SamuelsonData d{Frame::for_web(web)};
    d.H = d.fr.chern_h();
    d.H1 = d.fr.derive(d.H, 1);
    d.H2 = d.fr.derive(d.H, 2);
    d.H11 = d.fr.derive(d.H1, 1);
    d.b = normalize(web.fx() * web.gy() / (web.fy() * web.gx()));
    d.b1 = d.fr.derive(d.b, 1);
    d.B = normalize(constant(2) * d.b * d.H - d.b1 + (d.b - constant(1)) * expr::wjet(1));
    d.R = normalize((d.b1 - d.H2 + d.H * d.H - d.H * d.B) / d.b);
    d.r = normalize(d.H - d.b1 / d.b);
    return d;
}

} // namespace

ExprPtr samuelson_B(const WebSpec& web) { return samuelson_data(web).B; }

IntegrabilityResiduals integrability_residuals(const WebSpec& web) {
    SamuelsonData d = samuelson_data(web);
    ExprPtr R2 = d.fr.derive(d.R, 2); // brings in w'' through d2(w') = -w''
    ExprPtr r2 = d.fr.derive(d.r, 2);
    ExprPtr H_sq = d.H * d.H;
    ExprPtr cond1 = normalize(R2 + d.r * d.H1 - d.r * H_sq - d.H11 +
                              constant(3) * d.H * d.H1 - d.H * H_sq -
                              constant(2) * d.H * d.R);
    ExprPtr cond2 = normalize(r2 + H_sq - d.H1 - d.r * d.H);
    return IntegrabilityResiduals{cond1, cond2, d.R, d.r};
}

ExprPtr curvature_b_residual(const WebSpec& web) {
    SamuelsonData d = samuelson_data(web);
    ExprPtr K = d.fr.curvature_frame();
    // log|b| via log(b^2)/2; its frame derivatives are b_i/b either sign.
    ExprPtr logb = normalize(expr::log(d.b * d.b) / constant(2));
    ExprPtr l1 = d.fr.derive(logb, 1);
    ExprPtr l21 = d.fr.derive(l1, 2);
    return normalize(K + l21 - d.H * l1);
}

namespace {

TCoefficients collect_T_impl(const WebSpec& web, const ExprPtr& cond1) {
    TCoefficients t;
    t.jets = expr::collect_wjet(cond1);
    for (int k = 3; k >= 0; --k) {
        if (!expr::is_zero(t.jets.coeff[static_cast<std::size_t>(k)], &web, web.seed())
                 .is_zero()) {
            t.leading = k;
            break;
        }
    }
    return t;
}

} // namespace

TCoefficients collect_T(const WebSpec& web) {
    return collect_T_impl(web, integrability_residuals(web).cond1);
}

const char* to_string(RankVerdict v) {
    switch (v) {
        case RankVerdict::MaxRankSix: return "MaxRankSix";
        case RankVerdict::VacuouslyMaxRank: return "VacuouslyMaxRank";
        case RankVerdict::NotMaxRank: return "NotMaxRank";
        case RankVerdict::Undetermined: return "Undetermined";
    }
    return "?";
}

RankReport rank_verdict(const WebSpec& web) {
    RankReport report;
    report.web_name = web.name();

    IntegrabilityResiduals res = integrability_residuals(web);
    Frame fr = Frame::for_web(web);

    report.cond2 = RankCondition{"cond2", res.cond2, expr::is_zero(res.cond2, &web, web.seed())};
    ExprPtr e_resid = curvature_b_residual(web);
    report.curvature_b =
        RankCondition{"curvature_b", e_resid, expr::is_zero(e_resid, &web, web.seed())};
    report.t = collect_T_impl(web, res.cond1);

    bool structural = report.cond2.verdict.kind != expr::ZeroKind::NumericZero;

    // Is cond1 identically zero as a polynomial in the w-jets?
    std::array<expr::ZeroVerdict, 4> coeff_verdicts;
    bool all_T_zero = true;
    for (int k = 0; k < 4; ++k) {
        coeff_verdicts[static_cast<std::size_t>(k)] =
            expr::is_zero(report.t.jets.coeff[static_cast<std::size_t>(k)], &web, web.seed());
        if (!coeff_verdicts[static_cast<std::size_t>(k)].is_zero()) all_T_zero = false;
    }
    expr::ZeroVerdict const_verdict = expr::is_zero(report.t.jets.constant, &web, web.seed());
    bool cond1_vacuous = all_T_zero && const_verdict.is_zero();

    auto note_structural = [&structural](const expr::ZeroVerdict& v) {
        if (v.kind == expr::ZeroKind::NumericZero) structural = false;
    };

    RankVerdict outcome;
    if (cond1_vacuous) {
        for (const auto& v : coeff_verdicts) note_structural(v);
        note_structural(const_verdict);
        if (report.cond2.verdict.is_zero()) {
            note_structural(report.cond2.verdict);
            outcome = RankVerdict::VacuouslyMaxRank;
        } else {
            outcome = RankVerdict::NotMaxRank;
            report.failing.push_back("cond2");
        }
    } else if (!report.t.leading.has_value()) {
        // Jet-free but nonzero: no w can satisfy the obstruction.
        outcome = RankVerdict::NotMaxRank;
        report.failing.push_back("cond1 constant term nonzero with no jet coefficients");
    } else {
        const int lead = *report.t.leading;
        const ExprPtr& t_lead = report.t.jets.coeff[static_cast<std::size_t>(lead)];
        ExprPtr dt_lead = fr.delta(t_lead);
        auto ratio_residual = [&](const ExprPtr& tk) {
            return normalize(fr.delta(tk) * t_lead - tk * dt_lead);
        };
        bool ratios_ok = true;
        for (int k = 0; k < 4; ++k) {
            if (k == lead) continue;
            if (coeff_verdicts[static_cast<std::size_t>(k)].is_zero()) continue;
            ExprPtr resid = ratio_residual(report.t.jets.coeff[static_cast<std::size_t>(k)]);
            expr::ZeroVerdict v = expr::is_zero(resid, &web, web.seed());
            std::string label = "T" + std::to_string(k);
            report.ratio_residuals.emplace(label, RankCondition{label, resid, v});
            if (!v.is_zero()) {
                ratios_ok = false;
                report.failing.push_back("delta(" + label + "/T" + std::to_string(lead) + ")");
            } else {
                note_structural(v);
            }
        }
        if (!const_verdict.is_zero()) {
            ExprPtr resid = ratio_residual(report.t.jets.constant);
            expr::ZeroVerdict v = expr::is_zero(resid, &web, web.seed());
            report.ratio_residuals.emplace("const", RankCondition{"const", resid, v});
            if (!v.is_zero()) {
                ratios_ok = false;
                report.failing.push_back("delta(const/T" + std::to_string(lead) + ")");
            } else {
                note_structural(v);
            }
        }
        if (!report.cond2.verdict.is_zero()) {
            report.failing.push_back("cond2");
            outcome = RankVerdict::NotMaxRank;
        } else if (ratios_ok) {
            note_structural(report.cond2.verdict);
            outcome = RankVerdict::MaxRankSix;
        } else {
            outcome = RankVerdict::NotMaxRank;
        }
    }

    report.structural_evidence = structural;
    if (outcome == RankVerdict::NotMaxRank) {
        report.verdict = RankVerdict::NotMaxRank;
        report.numeric_verdict = RankVerdict::NotMaxRank;
    } else if (structural) {
        report.verdict = outcome;
        report.numeric_verdict = outcome;
    } else {
        // The zeros held only numerically; issue the verdict with its grade.
        report.verdict = RankVerdict::Undetermined;
        report.numeric_verdict = outcome;
    }
    return report;
}

} // namespace samweb::webs
