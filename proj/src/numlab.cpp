#include "samweb/numlab.hpp"

#include "samweb/frame.hpp"
#include "samweb/normalize.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace samweb::numlab {

using expr::Axis;
using expr::CompiledExpr;
using expr::ExprPtr;

DerivativeSel DerivativeSel::coordinate(Axis a) { return DerivativeSel{Kind::Coord, a, 1}; }
DerivativeSel DerivativeSel::frame(int i) {
    if (i != 1 && i != 2) fail(ErrorKind::InvalidArgument, "frame index must be 1 or 2");
    return DerivativeSel{Kind::Frame, Axis::X, i};
}

double fd_check(const ExprPtr& e, const DerivativeSel& sel, const WebSpec& web, int points,
                double step) {
    if (!(step >= 1e-7 && step <= 1e-3))
        fail(ErrorKind::InvalidArgument, "step outside range [1e-7, 1e-3]");
    if (points <= 0) fail(ErrorKind::InvalidArgument, "need at least one sample point");

    ExprPtr bound = web.bind(e);
    frame::Frame fr = frame::Frame::for_web(web);

    Axis axis;
    ExprPtr symbolic;
    if (sel.kind == DerivativeSel::Kind::Coord) {
        axis = sel.axis;
        symbolic = expr::diff(bound, axis);
    } else {
        axis = sel.frame_index == 1 ? Axis::X : Axis::Y;
        symbolic = fr.derive(bound, sel.frame_index);
    }
    const ExprPtr& leaf_factor = sel.frame_index == 1 ? web.fx() : web.fy();

    // Keep sample points a step away from the boundary.
    auto pts = web.samples(points * 3);
    double max_err = 0.0;
    int used = 0;
    for (const auto& p : pts) {
        if (used >= points) break;
        if (!web.domain().contains(p.x, p.y, 2 * step)) continue;
        ++used;
        double sym = expr::eval_value(symbolic, p.x, p.y);
        double plus, minus;
        if (axis == Axis::X) {
            plus = expr::eval_value(bound, p.x + step, p.y);
            minus = expr::eval_value(bound, p.x - step, p.y);
        } else {
            plus = expr::eval_value(bound, p.x, p.y + step);
            minus = expr::eval_value(bound, p.x, p.y - step);
        }
        double fd = (plus - minus) / (2 * step);
        if (sel.kind == DerivativeSel::Kind::Frame)
            fd *= -1.0 / expr::eval_value(leaf_factor, p.x, p.y);
        double err = std::fabs(sym - fd) / (1.0 + std::fabs(sym));
        if (err > max_err) max_err = err;
    }
    if (used == 0)
        fail(ErrorKind::AllPointsSingular, "no sample points clear of the domain boundary");
    return max_err;
}

// ---- tracing -----------------------------------------------------------------

CoordLine CoordLine::vertical(double x) { return CoordLine{Axis::X, x}; }
CoordLine CoordLine::horizontal(double y) { return CoordLine{Axis::Y, y}; }

namespace {

double line_eval(const CompiledExpr& h, const CoordLine& line, double t) {
    return line.fixed == Axis::X ? h(line.value, t) : h(t, line.value);
}

} // namespace

TraceResult trace_level_curve(const CompiledExpr& h, double level, const CoordLine& line,
                              double lo, double hi, double tol) {
    if (!(lo < hi)) fail(ErrorKind::InvalidArgument, "bracket must satisfy lo < hi");
    constexpr int kScan = 64;

    auto g = [&](double t) { return line_eval(h, line, t) - level; };

    // Scan for sign changes; more than one is reported, first one used.
    double prev_t = lo, prev_v = g(lo);
    if (!std::isfinite(prev_v)) fail(ErrorKind::DomainViolation, "function not finite on bracket");
    int changes = 0;
    double blo = 0, bhi = 0, flo = 0;
    for (int k = 1; k <= kScan; ++k) {
        double t = lo + (hi - lo) * static_cast<double>(k) / kScan;
        double val = g(t);
        if (!std::isfinite(val))
            fail(ErrorKind::DomainViolation, "function not finite on bracket");
        if (prev_v == 0.0) {
            // exact hit at the previous node
            ++changes;
            if (changes == 1) {
                blo = prev_t;
                bhi = prev_t;
                flo = 0.0;
            }
        } else if (val != 0.0 && ((prev_v < 0) != (val < 0))) {
            ++changes;
            if (changes == 1) {
                blo = prev_t;
                bhi = t;
                flo = prev_v;
            }
        }
        prev_t = t;
        prev_v = val;
    }
    if (changes == 0) {
        if (prev_v == 0.0) {
            blo = bhi = prev_t;
            changes = 1;
        } else {
            fail(ErrorKind::NoSignChange, "no sign change of h - level over the bracket");
        }
    }

    double a = blo, b = bhi, fa = flo;
    for (int it = 0; it < 200 && (b - a) >= 1e-13; ++it) {
        double m = 0.5 * (a + b);
        if (m <= a || m >= b) break; // double resolution reached
        double fm = g(m);
        if (fm == 0.0) {
            a = b = m;
            break;
        }
        if ((fa < 0) != (fm < 0)) {
            b = m;
        } else {
            a = m;
            fa = fm;
        }
    }
    double root = 0.5 * (a + b);
    if (std::fabs(g(root)) > std::max(tol, 1e-9 * std::fabs(level)))
        fail(ErrorKind::NoConvergence, "root refinement did not reach the tolerance");

    TraceResult r;
    r.multiple_roots_suspected = changes > 1;
    r.point = line.fixed == Axis::X ? Point{line.value, root} : Point{root, line.value};
    return r;
}

TraceResult trace_level_curve(const ExprPtr& h, double level, const CoordLine& line, double lo,
                              double hi, double tol) {
    return trace_level_curve(CompiledExpr::compile(expr::normalize(h)), level, line, lo, hi, tol);
}

// ---- hexagon -----------------------------------------------------------------

HexagonTrace hexagon_defect(const WebSpec& web3, Point center, double epsilon) {
    if (!(epsilon > 0)) fail(ErrorKind::InvalidArgument, "epsilon must be positive");
    const double m = 2 * epsilon;
    if (!web3.domain().contains(center.x - m, center.y - m) ||
        !web3.domain().contains(center.x + m, center.y + m)) {
        std::ostringstream os;
        os << "hexagon needs a " << m << " margin around (" << center.x << ", " << center.y
           << ") inside the domain";
        fail(ErrorKind::MarginViolation, os.str());
    }

    CompiledExpr F = CompiledExpr::compile(web3.f());
    const double x0 = center.x, y0 = center.y;
    const double c0 = F(x0, y0);
    constexpr double kTol = 1e-12;

    auto on_vertical = [&](double xline, double level, double near_y) {
        return trace_level_curve(F, level, CoordLine::vertical(xline), near_y - m, near_y + m,
                                 kTol)
            .point.y;
    };
    auto on_horizontal = [&](double yline, double level, double near_x) {
        return trace_level_curve(F, level, CoordLine::horizontal(yline), near_x - m, near_x + m,
                                 kTol)
            .point.x;
    };

    // Thomsen figure: f-leaf moves alternate with horizontal and vertical ones.
    Point A1{x0 + epsilon, y0};
    double y2 = on_vertical(x0, F(A1.x, A1.y), y0);
    Point A2{x0, y2};
    double x3 = on_horizontal(y2, c0, x0);
    Point A3{x3, y2};
    Point A4{x3, y0};
    double y5 = on_vertical(x0, F(A4.x, A4.y), y0);
    Point A5{x0, y5};
    double x6 = on_horizontal(y5, c0, x0);
    Point A6{x6, y5};
    Point A7{x6, y0};

    HexagonTrace t;
    t.center = center;
    t.epsilon = epsilon;
    t.vertices = {A1, A2, A3, A4, A5, A6, A7};
    t.defect = x6 - (x0 + epsilon);
    t.solver_tolerance = kTol;
    return t;
}

ScalingTable hexagon_scaling(const WebSpec& web3, Point center,
                             const std::vector<double>& eps_list) {
    ScalingTable table;
    for (double eps : eps_list) {
        HexagonTrace t = hexagon_defect(web3, center, eps);
        table.rows.push_back(ScalingRow{eps, t.defect, t.defect / (eps * eps * eps)});
    }
    // Least-squares slope of log|defect| against log eps.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (const auto& row : table.rows) {
        if (row.defect == 0.0) continue;
        double lx = std::log(row.epsilon), ly = std::log(std::fabs(row.defect));
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++n;
    }
    if (n >= 2) {
        double denom = n * sxx - sx * sx;
        table.loglog_slope = denom != 0 ? (n * sxy - sx * sy) / denom : 0.0;
    }
    return table;
}

} // namespace samweb::numlab
