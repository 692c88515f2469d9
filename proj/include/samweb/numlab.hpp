#pragma once

#include "samweb/eval.hpp"
#include "samweb/expr.hpp"
#include "samweb/webspec.hpp"

#include <optional>
#include <string>
#include <vector>

namespace samweb::numlab {

using webs::Domain;
using webs::Point;
using webs::WebSpec;

// ---- finite-difference validation -------------------------------------------

struct DerivativeSel {
    enum class Kind { Coord, Frame } kind;
    expr::Axis axis = expr::Axis::X; // Coord
    int frame_index = 1;             // Frame: 1 or 2

    static DerivativeSel coordinate(expr::Axis a);
    static DerivativeSel frame(int i);
};

// Max relative error |symbolic - central difference| / (1 + |symbolic|) over
// deterministic sample points. Step must lie in [1e-7, 1e-3].
double fd_check(const expr::ExprPtr& e, const DerivativeSel& sel, const WebSpec& web,
                int points = 50, double step = 1e-5);

// ---- level-curve tracing -----------------------------------------------------

struct CoordLine {
    expr::Axis fixed; // which coordinate the line fixes
    double value;

    static CoordLine vertical(double x);   // {x = c}, root sought in y
    static CoordLine horizontal(double y); // {y = c}, root sought in x
};

struct TraceResult {
    Point point;
    bool multiple_roots_suspected = false; // >1 sign change on the 64-point scan
};

// Intersection of {h = level} with a coordinate line by bracketed root
// finding: |h - level| < tol and bracket width < 1e-13. Throws NoSignChange.
TraceResult trace_level_curve(const expr::CompiledExpr& h, double level, const CoordLine& line,
                              double lo, double hi, double tol = 1e-12);
TraceResult trace_level_curve(const expr::ExprPtr& h, double level, const CoordLine& line,
                              double lo, double hi, double tol = 1e-12);

// ---- hexagon closure ---------------------------------------------------------

struct HexagonTrace {
    Point center;
    double epsilon = 0.0;
    std::vector<Point> vertices; // A1..A7
    double defect = 0.0;         // x(A7) - x(A1), signed
    double solver_tolerance = 0.0;
};

// Builds the six-step Thomsen figure around `center` out of f-leaf moves
// alternating with horizontal/vertical moves and measures the closure gap.
// Requires the 2*epsilon box around the center inside the domain
// (MarginViolation otherwise); NoSignChange when a leaf exits the box.
HexagonTrace hexagon_defect(const WebSpec& web3, Point center, double epsilon);

struct ScalingRow {
    double epsilon;
    double defect;
    double defect_over_eps3;
};

struct ScalingTable {
    std::vector<ScalingRow> rows;
    double loglog_slope = 0.0; // least-squares slope of log|defect| vs log eps
};

ScalingTable hexagon_scaling(const WebSpec& web3, Point center,
                             const std::vector<double>& eps_list);

// ---- area quadrature ---------------------------------------------------------

struct QuadResult {
    double area = 0.0;
    double err_estimate = 0.0;
    int grid = 0; // n at convergence
};

struct QuadOptions {
    double tol = 1e-6; // relative successive-difference target
    int n_start = 64;
    int n_max = 4096;
    bool parallel = true; // OpenMP over grid rows; results are identical either way
};

// Area of {p in domain : u(p) in [u0,u1], v(p) in [v0,v1]} on an n x n grid:
// cells entirely inside by corner classification count fully, boundary cells
// are clipped against the four level constraints with secant interpolation
// along edges. n doubles until successive estimates agree to tol relative;
// err_estimate is the last difference. Throws NoConvergence past n_max,
// EmptyCell for vanishing area, MarginViolation when the region crosses the
// domain boundary away from its level constraints, NondegeneracyViolation
// when u, v fail functional independence at samples.
QuadResult quad_area(const expr::ExprPtr& u, const expr::ExprPtr& v, double u0, double u1,
                     double v0, double v1, const Domain& domain, const QuadOptions& opts = {});

struct AreaReport {
    std::array<double, 3> u_levels{};
    std::array<double, 3> v_levels{};
    // areas[i][j]: cell u in [u_i, u_i+1], v in [v_j, v_j+1]
    double areas[2][2] = {{0, 0}, {0, 0}};
    double quad_errors[2][2] = {{0, 0}, {0, 0}};
    double residual = 0.0; // |ad - bc| / (ad + bc) with a=A00 b=A01 c=A10 d=A11
    double threshold = 0.0;
    bool pass = false;
    bool valid = true;
    std::string error; // per-cell error message when !valid
};

// Samuelson's area condition a/c = b/d on the four cells cut by consecutive
// u- and v-levels. Pass iff residual < max(10 * combined relative quadrature
// error, 1e-5).
AreaReport area_condition(const expr::ExprPtr& u, const expr::ExprPtr& v,
                          const std::array<double, 3>& u_levels,
                          const std::array<double, 3>& v_levels, const Domain& domain,
                          const QuadOptions& opts = {});

// ---- grid kernel (exposed for the reference/parallel comparison) -------------

// Evaluates `fn` at the (n+1)^2 corner grid of the domain, row-major. The
// parallel version must produce bytewise-identical output to the serial one.
std::vector<double> grid_eval_serial(const expr::CompiledExpr& fn, const Domain& domain, int n);
std::vector<double> grid_eval_parallel(const expr::CompiledExpr& fn, const Domain& domain, int n);

} // namespace samweb::numlab
