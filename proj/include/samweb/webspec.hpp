#pragma once

#include "samweb/expr.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace samweb::webs {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

struct Domain {
    Rational x0, x1, y0, y1;

    double xlo() const { return to_double(x0); }
    double xhi() const { return to_double(x1); }
    double ylo() const { return to_double(y0); }
    double yhi() const { return to_double(y1); }

    bool contains(double px, double py, double margin = 0.0) const {
        return px >= xlo() + margin && px <= xhi() - margin && py >= ylo() + margin &&
               py <= yhi() - margin;
    }
};

Domain make_domain(const Rational& x0, const Rational& x1, const Rational& y0,
                   const Rational& y1);

constexpr std::uint64_t kDefaultSeed = 1513295360ull;
constexpr int kSamplePoints = 100;
constexpr double kWitnessTol = 1e-9;

// Deterministic sample points inside the domain, rejecting points where any
// of `avoid` comes within `avoid_tol` of zero. Throws AllPointsSingular when
// rejection never terminates.
std::vector<Point> sample_points(const Domain& domain, int count, std::uint64_t seed,
                                 const std::vector<expr::ExprPtr>& avoid = {},
                                 double avoid_tol = 1e-6);

// A web given by closed-form functions on a rectangle. Construction validates
// the nondegeneracy witnesses (f_x, f_y and, with g, also g_x, g_y, b, b-1):
// each must keep one sign and magnitude > 1e-9 over 100 deterministic sample
// points, so loci like b = 1 crossing the domain are rejected.
class WebSpec {
public:
    static WebSpec make(std::string name, expr::ExprPtr f, expr::ExprPtr g, Domain domain,
                        std::uint64_t seed = kDefaultSeed);
    static WebSpec make3(std::string name, expr::ExprPtr f, Domain domain,
                         std::uint64_t seed = kDefaultSeed);

    const std::string& name() const { return name_; }
    const expr::ExprPtr& f() const { return f_; }
    bool has_g() const { return g_ != nullptr; }
    const expr::ExprPtr& g() const; // throws if absent
    const Domain& domain() const { return domain_; }
    std::uint64_t seed() const { return seed_; }

    const expr::ExprPtr& fx() const { return fx_; }
    const expr::ExprPtr& fy() const { return fy_; }
    const expr::ExprPtr& gx() const { return gx_; }
    const expr::ExprPtr& gy() const { return gy_; }

    // Witness expressions whose zero loci sampling must avoid.
    const std::vector<expr::ExprPtr>& singular_witnesses() const { return witnesses_; }

    std::vector<Point> samples(int count = kSamplePoints) const;

    // Closed forms substituted for f (and g, if present); result normalized.
    expr::ExprPtr bind(const expr::ExprPtr& e) const;

private:
    WebSpec() = default;

    std::string name_;
    expr::ExprPtr f_, g_;
    expr::ExprPtr fx_, fy_, gx_, gy_;
    Domain domain_{};
    std::uint64_t seed_ = kDefaultSeed;
    std::vector<expr::ExprPtr> witnesses_;
};

} // namespace samweb::webs
