#include "samweb/numlab.hpp"

#include "samweb/normalize.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace samweb::numlab {

using expr::CompiledExpr;
using expr::ExprPtr;

std::vector<double> grid_eval_serial(const CompiledExpr& fn, const Domain& domain, int n) {
    const double x0 = domain.xlo(), y0 = domain.ylo();
    const double hx = (domain.xhi() - x0) / n, hy = (domain.yhi() - y0) / n;
    std::vector<double> out(static_cast<std::size_t>(n + 1) * static_cast<std::size_t>(n + 1));
    for (int j = 0; j <= n; ++j) {
        double py = y0 + j * hy;
        double* row = out.data() + static_cast<std::size_t>(j) * (n + 1);
        for (int i = 0; i <= n; ++i) row[i] = fn(x0 + i * hx, py);
    }
    return out;
}

std::vector<double> grid_eval_parallel(const CompiledExpr& fn, const Domain& domain, int n) {
    const double x0 = domain.xlo(), y0 = domain.ylo();
    const double hx = (domain.xhi() - x0) / n, hy = (domain.yhi() - y0) / n;
    std::vector<double> out(static_cast<std::size_t>(n + 1) * static_cast<std::size_t>(n + 1));
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (int j = 0; j <= n; ++j) {
        double py = y0 + j * hy;
        double* row = out.data() + static_cast<std::size_t>(j) * (n + 1);
        for (int i = 0; i <= n; ++i) row[i] = fn(x0 + i * hx, py);
    }
    return out;
}

namespace {

struct Vertex {
    double x, y; // position
    double u, v; // function values there
};

// Sutherland-Hodgman clip against {val >= level} (or <=), with secant
// crossing points; u,v at new vertices are re-evaluated exactly.
template <class Select>
void clip(std::vector<Vertex>& poly, double level, bool keep_ge, Select sel,
          const CompiledExpr& fu, const CompiledExpr& fv) {
    if (poly.empty()) return;
    std::vector<Vertex> out;
    out.reserve(poly.size() + 2);
    const std::size_t n = poly.size();
    for (std::size_t k = 0; k < n; ++k) {
        const Vertex& a = poly[k];
        const Vertex& b = poly[(k + 1) % n];
        double va = sel(a) - level, vb = sel(b) - level;
        bool ina = keep_ge ? va >= 0 : va <= 0;
        bool inb = keep_ge ? vb >= 0 : vb <= 0;
        if (ina) out.push_back(a);
        if (ina != inb) {
            double t = va / (va - vb);
            double px = a.x + t * (b.x - a.x);
            double py = a.y + t * (b.y - a.y);
            out.push_back(Vertex{px, py, fu(px, py), fv(px, py)});
        }
    }
    poly = std::move(out);
}

double shoelace(const std::vector<Vertex>& poly) {
    double s = 0.0;
    const std::size_t n = poly.size();
    for (std::size_t k = 0; k < n; ++k) {
        const Vertex& a = poly[k];
        const Vertex& b = poly[(k + 1) % n];
        s += a.x * b.y - b.x * a.y;
    }
    return std::fabs(s) / 2;
}

struct CellBounds {
    double u0, u1, v0, v1;
};

// Detects the region leaking through a domain edge: an interior point of the
// region on the boundary whose level constraints are all comfortably slack
// relative to the local function variation.
void check_margins(const CompiledExpr& fu, const CompiledExpr& fv, const Domain& dom, int n,
                   const CellBounds& cb) {
    const double x0 = dom.xlo(), x1 = dom.xhi(), y0 = dom.ylo(), y1 = dom.yhi();
    const double hx = (x1 - x0) / n, hy = (y1 - y0) / n;
    struct Edge {
        bool horizontal; // along x
        double fixed;    // the edge coordinate
        double inward;   // offset to one cell inside
    };
    const Edge edges[4] = {{true, y0, hy}, {true, y1, -hy}, {false, x0, hx}, {false, x1, -hx}};
    for (const Edge& e : edges) {
        for (int i = 0; i < n; ++i) {
            double px, py, qx, qy;
            if (e.horizontal) {
                px = x0 + (i + 0.5) * hx;
                py = e.fixed;
                qx = px;
                qy = e.fixed + e.inward;
            } else {
                px = e.fixed;
                py = y0 + (i + 0.5) * hy;
                qx = e.fixed + e.inward;
                qy = py;
            }
            double uu = fu(px, py), vv = fv(px, py);
            if (!(uu > cb.u0 && uu < cb.u1 && vv > cb.v0 && vv < cb.v1)) continue;
            double su = std::fabs(fu(qx, qy) - uu) + 1e-300;
            double sv = std::fabs(fv(qx, qy) - vv) + 1e-300;
            double mu = std::min(uu - cb.u0, cb.u1 - uu);
            double mv = std::min(vv - cb.v0, cb.v1 - vv);
            if (mu > 4 * su && mv > 4 * sv) {
                std::ostringstream os;
                os << "region crosses the domain boundary at (" << px << ", " << py << ")";
                fail(ErrorKind::MarginViolation, os.str());
            }
        }
    }
}

double area_on_grid(const CompiledExpr& fu, const CompiledExpr& fv, const Domain& dom, int n,
                    const CellBounds& cb, bool parallel) {
    std::vector<double> U =
        parallel ? grid_eval_parallel(fu, dom, n) : grid_eval_serial(fu, dom, n);
    std::vector<double> V =
        parallel ? grid_eval_parallel(fv, dom, n) : grid_eval_serial(fv, dom, n);
    for (double val : U)
        if (!std::isfinite(val))
            fail(ErrorKind::DomainViolation, "u not finite on the quadrature grid");
    for (double val : V)
        if (!std::isfinite(val))
            fail(ErrorKind::DomainViolation, "v not finite on the quadrature grid");

    check_margins(fu, fv, dom, n, cb);

    const double x0 = dom.xlo(), y0 = dom.ylo();
    const double hx = (dom.xhi() - x0) / n, hy = (dom.yhi() - y0) / n;
    const double cell_area = hx * hy;
    const int stride = n + 1;

    std::vector<double> row_sums(static_cast<std::size_t>(n), 0.0);

    auto process_row = [&](int j) {
        const double* u_lo = U.data() + static_cast<std::size_t>(j) * stride;
        const double* u_hi = u_lo + stride;
        const double* v_lo = V.data() + static_cast<std::size_t>(j) * stride;
        const double* v_hi = v_lo + stride;
        double acc = 0.0;
        for (int i = 0; i < n; ++i) {
            const double cu[4] = {u_lo[i], u_lo[i + 1], u_hi[i], u_hi[i + 1]};
            const double cv[4] = {v_lo[i], v_lo[i + 1], v_hi[i], v_hi[i + 1]};
            auto all_ge = [](const double* c, double lvl) {
                return c[0] >= lvl && c[1] >= lvl && c[2] >= lvl && c[3] >= lvl;
            };
            auto all_lt = [](const double* c, double lvl) {
                return c[0] < lvl && c[1] < lvl && c[2] < lvl && c[3] < lvl;
            };
            auto all_le = [](const double* c, double lvl) {
                return c[0] <= lvl && c[1] <= lvl && c[2] <= lvl && c[3] <= lvl;
            };
            auto all_gt = [](const double* c, double lvl) {
                return c[0] > lvl && c[1] > lvl && c[2] > lvl && c[3] > lvl;
            };
            // Entirely outside one constraint: contributes nothing.
            if (all_lt(cu, cb.u0) || all_gt(cu, cb.u1) || all_lt(cv, cb.v0) ||
                all_gt(cv, cb.v1))
                continue;
            bool inside = all_ge(cu, cb.u0) && all_le(cu, cb.u1) && all_ge(cv, cb.v0) &&
                          all_le(cv, cb.v1);
            if (inside) {
                acc += cell_area;
                continue;
            }
            // Boundary cell: clip the square against the four level lines.
            double cx0 = x0 + i * hx, cy0 = y0 + j * hy;
            double cx1 = x0 + (i + 1) * hx, cy1 = y0 + (j + 1) * hy;
            std::vector<Vertex> poly = {
                Vertex{cx0, cy0, cu[0], cv[0]},
                Vertex{cx1, cy0, cu[1], cv[1]},
                Vertex{cx1, cy1, cu[3], cv[3]},
                Vertex{cx0, cy1, cu[2], cv[2]},
            };
            auto by_u = [](const Vertex& w) { return w.u; };
            auto by_v = [](const Vertex& w) { return w.v; };
            clip(poly, cb.u0, true, by_u, fu, fv);
            clip(poly, cb.u1, false, by_u, fu, fv);
            clip(poly, cb.v0, true, by_v, fu, fv);
            clip(poly, cb.v1, false, by_v, fu, fv);
            if (poly.size() >= 3) acc += shoelace(poly);
        }
        row_sums[static_cast<std::size_t>(j)] = acc;
    };

    if (parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
        for (int j = 0; j < n; ++j) process_row(j);
    } else {
        for (int j = 0; j < n; ++j) process_row(j);
    }

    // Fixed-order reduction keeps results identical across thread counts.
    double area = 0.0;
    for (int j = 0; j < n; ++j) area += row_sums[static_cast<std::size_t>(j)];
    return area;
}

void check_independence(const ExprPtr& u, const ExprPtr& v, const Domain& dom) {
    ExprPtr jac = expr::normalize(expr::diff(u, expr::Axis::X) * expr::diff(v, expr::Axis::Y) -
                                  expr::diff(u, expr::Axis::Y) * expr::diff(v, expr::Axis::X));
    auto pts = webs::sample_points(dom, 100, webs::kDefaultSeed);
    for (const auto& p : pts) {
        double jv = expr::eval_value(jac, p.x, p.y);
        if (!(std::fabs(jv) > 1e-9)) {
            std::ostringstream os;
            os << "u, v fail functional independence at (" << p.x << ", " << p.y << ")";
            fail(ErrorKind::NondegeneracyViolation, os.str());
        }
    }
}

} // namespace

QuadResult quad_area(const ExprPtr& u, const ExprPtr& v, double u0, double u1, double v0,
                     double v1, const Domain& domain, const QuadOptions& opts) {
    if (!(u0 < u1) || !(v0 < v1))
        fail(ErrorKind::InvalidArgument, "cell intervals must be nonempty");
    check_independence(u, v, domain);

    CompiledExpr fu = CompiledExpr::compile(expr::normalize(u));
    CompiledExpr fv = CompiledExpr::compile(expr::normalize(v));
    CellBounds cb{u0, u1, v0, v1};

    double prev = 0.0;
    bool have_prev = false;
    for (int n = opts.n_start; n <= opts.n_max; n *= 2) {
        double area = area_on_grid(fu, fv, domain, n, cb, opts.parallel);
        if (have_prev) {
            double diff = std::fabs(area - prev);
            if (diff <= opts.tol * std::max(std::fabs(area), opts.tol)) {
                if (area < opts.tol)
                    fail(ErrorKind::EmptyCell, "cell region has vanishing area");
                return QuadResult{area, diff, n};
            }
        }
        prev = area;
        have_prev = true;
    }
    fail(ErrorKind::NoConvergence, "quadrature did not converge by the n_max grid");
}

AreaReport area_condition(const ExprPtr& u, const ExprPtr& v, const std::array<double, 3>& u_levels,
                          const std::array<double, 3>& v_levels, const Domain& domain,
                          const QuadOptions& opts) {
    AreaReport rep;
    rep.u_levels = u_levels;
    rep.v_levels = v_levels;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            try {
                QuadResult q =
                    quad_area(u, v, u_levels[static_cast<std::size_t>(i)],
                              u_levels[static_cast<std::size_t>(i) + 1],
                              v_levels[static_cast<std::size_t>(j)],
                              v_levels[static_cast<std::size_t>(j) + 1], domain, opts);
                rep.areas[i][j] = q.area;
                rep.quad_errors[i][j] = q.err_estimate;
            } catch (const Error& err) {
                rep.valid = false;
                std::ostringstream os;
                os << "cell[" << i << "][" << j << "]: " << err.what();
                rep.error = os.str();
                return rep;
            }
        }
    }
    const double ad = rep.areas[0][0] * rep.areas[1][1];
    const double bc = rep.areas[0][1] * rep.areas[1][0];
    rep.residual = std::fabs(ad - bc) / (ad + bc);
    double combined = 0.0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            combined += rep.quad_errors[i][j] / std::max(rep.areas[i][j], 1e-300);
    rep.threshold = std::max(10.0 * combined, 1e-5);
    rep.pass = rep.residual < rep.threshold;
    return rep;
}

} // namespace samweb::numlab
