#include "samweb/report.hpp"

#include "samweb/frame.hpp"
#include "samweb/normalize.hpp"
#include "samweb/numlab.hpp"
#include "samweb/samwebs.hpp"
#include "samweb/zero.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

namespace samweb::cli {

using expr::ExprPtr;
using expr::ZeroVerdict;
using nlohmann::ordered_json;

namespace {

struct FormPair {
    ExprPtr dx, dy;
};

// dx^dy coefficient of the exterior derivative of a dx + b dy.
ExprPtr d_of(const FormPair& w) {
    return expr::normalize(expr::diff(w.dy, expr::Axis::X) - expr::diff(w.dx, expr::Axis::Y));
}

ExprPtr wedge(const FormPair& a, const FormPair& b) {
    return expr::normalize(a.dx * b.dy - a.dy * b.dx);
}

struct IdentityCheck {
    std::string name;
    ZeroVerdict verdict;
    bool counted = true; // informational rows are reported but not scored
    bool expected_zero = true;
};

std::vector<IdentityCheck> identity_suite(const webs::WebSpec& web) {
    std::vector<IdentityCheck> checks;
    frame::Frame fr = frame::Frame::for_web(web);
    auto push = [&](const std::string& name, const ExprPtr& residual, bool counted = true,
                    bool expected_zero = true) {
        checks.push_back(
            IdentityCheck{name, expr::is_zero(residual, &web, web.seed()), counted, expected_zero});
    };

    ExprPtr H = fr.chern_h();
    ExprPtr K = fr.curvature_frame();
    FormPair w1{expr::normalize(-web.fx()), expr::constant(0)};
    FormPair w2{expr::constant(0), expr::normalize(-web.fy())};
    FormPair w3{web.fx(), web.fy()};
    FormPair gamma{expr::normalize(H * web.fx()), expr::normalize(H * web.fy())};

    // Structure equations under the adopted convention d omega_i = gamma ^ omega_i.
    push("domega1 - gamma^omega1", expr::normalize(d_of(w1) - wedge(gamma, w1)));
    push("domega2 - gamma^omega2", expr::normalize(d_of(w2) - wedge(gamma, w2)));
    push("domega3 - gamma^omega3", expr::normalize(d_of(w3) - wedge(gamma, w3)));

    // Both signed variants of the curvature equation; the plus variant is the
    // paper's printed display, reported but expected to fail whenever K != 0.
    ExprPtr w1w2 = wedge(w1, w2);
    push("dgamma + K*omega1^omega2", expr::normalize(d_of(gamma) + K * w1w2));
    push("dgamma - K*omega1^omega2 (printed variant)",
         expr::normalize(d_of(gamma) - K * w1w2), false, false);

    // Duality <omega_i, e_j> = delta_ij for the frame e_1 = -(1/f_x) d_x, ...
    ExprPtr inv1 = expr::normalize(-(expr::constant(1) / web.fx()));
    ExprPtr inv2 = expr::normalize(-(expr::constant(1) / web.fy()));
    push("<omega1,e1> - 1", expr::normalize(w1.dx * inv1 - expr::constant(1)));
    push("<omega1,e2>", expr::normalize(w1.dy * inv2));
    push("<omega2,e1>", expr::normalize(w2.dx * inv1));
    push("<omega2,e2> - 1", expr::normalize(w2.dy * inv2 - expr::constant(1)));

    // Commutator law on a few polynomial probes.
    for (const char* src : {"x", "y", "x^2", "x*y", "x^2 + y^3"}) {
        push(std::string("commutator[") + src + "]", fr.commutator_residual(expr::parse(src)));
    }

    // The two curvature routes.
    push("K_frame - K_coord", expr::normalize(fr.curvature_frame() - fr.curvature_coord()));

    // Prolongation table entries via the abstract rewrite engine.
    ExprPtr H1 = fr.derive(H, 1), H2 = fr.derive(H, 2);
    ExprPtr H12 = fr.derive(H2, 1);
    ExprPtr Hsq = expr::normalize(H * H);
    std::vector<frame::RewriteRelation> rel1 = {{"sigma1", {2}, H}};
    std::vector<frame::RewriteRelation> rel2 = {{"sigma2", {1}, H}};
    auto nf = [&](const char* sym, std::vector<int> word,
                  const std::vector<frame::RewriteRelation>& rels) {
        return frame::abstract_normal_form(expr::framesym(sym, std::move(word)), rels, fr);
    };
    push("sigma1_12 = H_1",
         expr::normalize(nf("sigma1", {1, 2}, rel1) - H1));
    push("sigma1_22 = H_2",
         expr::normalize(nf("sigma1", {2, 2}, rel1) - H2));
    push("sigma1_21 = H_1 - H^2 + H*sigma1_1",
         expr::normalize(nf("sigma1", {2, 1}, rel1) -
                         (H1 - Hsq + H * expr::framesym("sigma1", {1}))));
    push("sigma2_12 = H_2 - H^2 + H*sigma2_2",
         expr::normalize(nf("sigma2", {1, 2}, rel2) -
                         (H2 - Hsq + H * expr::framesym("sigma2", {2}))));
    push("sigma2_112 = H_12 - 2HH_1 + HH_2 - H^3 + (H^2+H_1)*sigma2_2",
         expr::normalize(nf("sigma2", {1, 1, 2}, rel2) -
                         (H12 - expr::constant(2) * H * H1 + H * H2 - Hsq * H +
                          (Hsq + H1) * expr::framesym("sigma2", {2}))));

    if (web.has_g()) {
        webs::WebForms forms = webs::canonical_forms(web);
        push("s_condition", webs::s_condition_residual(forms));
        // omega4 = lambda*dg componentwise.
        push("omega4 - lambda*dg (dx)",
             expr::normalize(forms.omega[3].dx - forms.lambda * web.gx()));
        push("omega4 - lambda*dg (dy)",
             expr::normalize(forms.omega[3].dy - forms.lambda * web.gy()));
        // cond2 and its curvature/b form agree up to sign.
        webs::IntegrabilityResiduals res = webs::integrability_residuals(web);
        push("curvature_b_residual + cond2",
             expr::normalize(webs::curvature_b_residual(web) + res.cond2));
    }
    return checks;
}

ordered_json zero_to_json(const ZeroVerdict& v) {
    ordered_json j;
    j["kind"] = v.kind == expr::ZeroKind::StructuralZero  ? "StructuralZero"
                : v.kind == expr::ZeroKind::NumericZero   ? "NumericZero"
                                                          : "NonZero";
    if (v.kind == expr::ZeroKind::NonZero) {
        j["witness"] = {v.wx, v.wy};
        j["value"] = v.value;
    }
    return j;
}

CommandResult run_curvature(const webs::WebSpec& web) {
    CommandResult r;
    r.command = "curvature";
    frame::Frame fr = frame::Frame::for_web(web);
    ExprPtr k_coord = fr.curvature_coord();
    ExprPtr k_frame = fr.curvature_frame();
    ZeroVerdict match = expr::is_zero(expr::normalize(k_frame - k_coord), &web, web.seed());
    ZeroVerdict zero = expr::is_zero(k_coord, &web, web.seed());
    r.data["K"] = expr::to_string(k_coord);
    r.data["H"] = expr::to_string(fr.chern_h());
    r.data["K_is_zero"] = zero_to_json(zero);
    r.data["routes_agree"] = zero_to_json(match);
    std::ostringstream os;
    os << "K = " << expr::to_string(k_coord) << "; K==0: " << expr::to_string(zero)
       << "; two routes agree: " << expr::to_string(match);
    r.summary = os.str();
    return r;
}

CommandResult run_rank(const webs::WebSpec& web) {
    CommandResult r;
    r.command = "rank";
    webs::RankReport rep = webs::rank_verdict(web);
    r.data["verdict"] = webs::to_string(rep.verdict);
    r.data["numeric_verdict"] = webs::to_string(rep.numeric_verdict);
    r.data["structural_evidence"] = rep.structural_evidence;
    ordered_json cond2;
    cond2["residual"] = expr::to_string(rep.cond2.residual);
    cond2["verdict"] = zero_to_json(rep.cond2.verdict);
    r.data["cond2"] = cond2;
    ordered_json cb;
    cb["residual"] = expr::to_string(rep.curvature_b.residual);
    cb["verdict"] = zero_to_json(rep.curvature_b.verdict);
    r.data["curvature_b"] = cb;
    ordered_json tj;
    for (int k = 0; k < 4; ++k)
        tj["T" + std::to_string(k)] =
            expr::to_string(rep.t.jets.coeff[static_cast<std::size_t>(k)]);
    tj["const"] = expr::to_string(rep.t.jets.constant);
    tj["leading"] = rep.t.leading ? ordered_json(*rep.t.leading) : ordered_json(nullptr);
    r.data["T"] = tj;
    ordered_json ratios = ordered_json::object();
    for (const auto& [label, cond] : rep.ratio_residuals) {
        ordered_json rr;
        rr["residual"] = expr::to_string(cond.residual);
        rr["verdict"] = zero_to_json(cond.verdict);
        ratios[label] = rr;
    }
    r.data["ratio_residuals"] = ratios;
    r.data["failing"] = rep.failing;
    std::ostringstream os;
    os << "verdict: " << webs::to_string(rep.verdict);
    if (rep.verdict == webs::RankVerdict::Undetermined)
        os << " (numeric evidence says " << webs::to_string(rep.numeric_verdict) << ")";
    r.summary = os.str();
    return r;
}

CommandResult run_identities(const webs::WebSpec& web, bool lagrangian) {
    CommandResult r;
    r.command = "identities";
    auto checks = identity_suite(web);
    if (lagrangian) {
        ExprPtr sym = expr::normalize(web.fy() - web.gx());
        checks.push_back(
            IdentityCheck{"lagrangian f_y - g_x", expr::is_zero(sym, &web, web.seed())});
    }
    int passed = 0, failed = 0;
    ordered_json items = ordered_json::array();
    for (const auto& c : checks) {
        bool ok = c.verdict.is_zero() == c.expected_zero;
        if (c.counted) (ok ? passed : failed)++;
        ordered_json item;
        item["name"] = c.name;
        item["verdict"] = zero_to_json(c.verdict);
        item["counted"] = c.counted;
        if (c.counted) item["pass"] = ok;
        items.push_back(item);
    }
    r.data["checks"] = items;
    r.data["passed"] = passed;
    r.data["failed"] = failed;
    std::ostringstream os;
    os << passed << " identities pass, " << failed << " fail";
    r.summary = os.str();
    r.errored = false;
    if (failed > 0) {
        r.errored = true;
        r.error = "identity checks failed";
    }
    return r;
}

CommandResult run_hexagon(const webs::WebSpec& web, const HexagonCmd& cmd) {
    CommandResult r;
    r.command = "hexagon";
    numlab::ScalingTable table = numlab::hexagon_scaling(web, cmd.center, cmd.eps);
    frame::Frame fr = frame::Frame::for_web(web);
    double k_center =
        expr::eval_value(fr.curvature_coord(), cmd.center.x, cmd.center.y);
    r.data["center"] = {cmd.center.x, cmd.center.y};
    r.data["K_at_center"] = k_center;
    ordered_json rows = ordered_json::array();
    for (const auto& row : table.rows) {
        ordered_json jr;
        jr["eps"] = row.epsilon;
        jr["defect"] = row.defect;
        jr["defect_over_eps3"] = row.defect_over_eps3;
        numlab::HexagonTrace t = numlab::hexagon_defect(web, cmd.center, row.epsilon);
        ordered_json verts = ordered_json::array();
        for (const auto& p : t.vertices) verts.push_back({p.x, p.y});
        jr["vertices"] = verts;
        rows.push_back(jr);
    }
    r.data["rows"] = rows;
    r.data["loglog_slope"] = table.loglog_slope;
    std::ostringstream os;
    os << "K(center) = " << k_center << ", slope = " << table.loglog_slope;
    r.summary = os.str();
    return r;
}

CommandResult run_area_test(const webs::Domain& domain, const AreaTestCmd& cmd) {
    CommandResult r;
    r.command = "area-test";
    numlab::AreaReport rep = numlab::area_condition(cmd.u, cmd.v, cmd.u_levels, cmd.v_levels,
                                                    domain);
    r.data["u"] = cmd.u_text;
    r.data["v"] = cmd.v_text;
    r.data["u_levels"] = cmd.u_levels;
    r.data["v_levels"] = cmd.v_levels;
    if (!rep.valid) {
        r.errored = true;
        r.error = rep.error;
        r.summary = "invalid: " + rep.error;
        r.data["valid"] = false;
        return r;
    }
    ordered_json areas = ordered_json::array();
    ordered_json errors = ordered_json::array();
    for (int i = 0; i < 2; ++i) {
        areas.push_back({rep.areas[i][0], rep.areas[i][1]});
        errors.push_back({rep.quad_errors[i][0], rep.quad_errors[i][1]});
    }
    r.data["valid"] = true;
    r.data["areas"] = areas;
    r.data["quad_errors"] = errors;
    r.data["residual"] = rep.residual;
    r.data["threshold"] = rep.threshold;
    r.data["pass"] = rep.pass;
    std::ostringstream os;
    os << "rho = " << rep.residual << " (threshold " << rep.threshold << "): "
       << (rep.pass ? "Pass" : "Fail");
    r.summary = os.str();
    return r;
}

} // namespace

Report run(const JobConfig& config) {
    Report report;
    report.config = config;
    auto t0 = std::chrono::steady_clock::now();

    webs::WebSpec web = config.make_web();
    for (const auto& cmd : config.commands) {
        CommandResult result;
        try {
            if (std::holds_alternative<CurvatureCmd>(cmd)) {
                result = run_curvature(web);
            } else if (std::holds_alternative<RankCmd>(cmd)) {
                result = run_rank(web);
            } else if (std::holds_alternative<IdentitiesCmd>(cmd)) {
                result = run_identities(web, config.S != nullptr);
            } else if (std::holds_alternative<HexagonCmd>(cmd)) {
                result = run_hexagon(web, std::get<HexagonCmd>(cmd));
            } else {
                result = run_area_test(config.domain, std::get<AreaTestCmd>(cmd));
            }
        } catch (const Error& err) {
            result.command = command_name(cmd);
            result.errored = true;
            result.error = err.what();
            result.summary = std::string("error: ") + err.what();
        }
        if (result.errored) report.any_errors = true;
        report.results.push_back(std::move(result));
    }

    report.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

} // namespace samweb::cli
