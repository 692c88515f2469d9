#include "samweb/webspec.hpp"

#include "samweb/eval.hpp"
#include "samweb/normalize.hpp"

#include <cmath>
#include <sstream>

namespace samweb::webs {

using expr::ExprPtr;

Domain make_domain(const Rational& x0, const Rational& x1, const Rational& y0,
                   const Rational& y1) {
    if (!(x0 < x1) || !(y0 < y1))
        fail(ErrorKind::InvalidArgument, "domain rectangle must have positive extent");
    return Domain{x0, x1, y0, y1};
}

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

double unit_double(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

} // namespace

std::vector<Point> sample_points(const Domain& domain, int count, std::uint64_t seed,
                                 const std::vector<ExprPtr>& avoid, double avoid_tol) {
    std::vector<Point> pts;
    pts.reserve(static_cast<std::size_t>(count));
    const double x0 = domain.xlo(), x1 = domain.xhi();
    const double y0 = domain.ylo(), y1 = domain.yhi();
    std::uint64_t state = seed;
    int attempts = 0;
    const int max_attempts = count * 200;
    while (static_cast<int>(pts.size()) < count) {
        if (++attempts > max_attempts)
            fail(ErrorKind::AllPointsSingular,
                 "could not find nonsingular sample points in the domain");
        state = splitmix64(state);
        double px = x0 + unit_double(state) * (x1 - x0);
        state = splitmix64(state);
        double py = y0 + unit_double(state) * (y1 - y0);
        bool ok = true;
        for (const auto& cond : avoid) {
            try {
                double v = expr::eval_value(cond, px, py);
                if (std::fabs(v) < avoid_tol) {
                    ok = false;
                    break;
                }
            } catch (const Error&) {
                ok = false;
                break;
            }
        }
        if (ok) pts.push_back(Point{px, py});
    }
    return pts;
}

namespace {

// A nondegeneracy witness must keep one sign and stay above kWitnessTol over
// all samples; a sign change means its zero locus crosses the domain.
void check_witness(const ExprPtr& witness, const std::string& label,
                   const std::vector<Point>& pts) {
    int sign = 0;
    for (const auto& p : pts) {
        double v;
        try {
            v = expr::eval_value(witness, p.x, p.y);
        } catch (const Error& err) {
            std::ostringstream os;
            os << label << " not evaluable at (" << p.x << ", " << p.y << "): " << err.what();
            fail(ErrorKind::NondegeneracyViolation, os.str());
        }
        if (std::fabs(v) <= kWitnessTol) {
            std::ostringstream os;
            os << label << " vanishes at sample (" << p.x << ", " << p.y << ")";
            fail(ErrorKind::NondegeneracyViolation, os.str());
        }
        int s = v > 0 ? 1 : -1;
        if (sign == 0) sign = s;
        if (s != sign) {
            std::ostringstream os;
            os << label << " changes sign on the domain (zero locus crosses it), e.g. near ("
               << p.x << ", " << p.y << ")";
            fail(ErrorKind::NondegeneracyViolation, os.str());
        }
    }
}

void require_closed_form(const ExprPtr& e, const std::string& label) {
    if (expr::contains_framesym(e) || expr::contains_wjet(e))
        fail(ErrorKind::InvalidArgument, label + " must be a closed form in x, y");
    for (auto fn : {expr::FnName::F, expr::FnName::G, expr::FnName::U, expr::FnName::V,
                    expr::FnName::S})
        if (expr::contains_fnsym(e, fn))
            fail(ErrorKind::InvalidArgument, label + " must be a closed form in x, y");
}

} // namespace

WebSpec WebSpec::make(std::string name, ExprPtr f, ExprPtr g, Domain domain,
                      std::uint64_t seed) {
    WebSpec w;
    w.name_ = std::move(name);
    require_closed_form(f, "f");
    w.f_ = expr::normalize(f);
    w.domain_ = domain;
    w.seed_ = seed;
    w.fx_ = expr::diff(w.f_, expr::Axis::X);
    w.fy_ = expr::diff(w.f_, expr::Axis::Y);
    w.witnesses_ = {w.fx_, w.fy_};

    ExprPtr b;
    if (g) {
        require_closed_form(g, "g");
        w.g_ = expr::normalize(g);
        w.gx_ = expr::diff(w.g_, expr::Axis::X);
        w.gy_ = expr::diff(w.g_, expr::Axis::Y);
        b = expr::normalize(w.fx_ * w.gy_ / (w.fy_ * w.gx_));
        w.witnesses_.push_back(w.gx_);
        w.witnesses_.push_back(w.gy_);
        w.witnesses_.push_back(b);
        w.witnesses_.push_back(expr::normalize(b - expr::constant(1)));
    }

    // Plain domain samples for witness checks (the avoid-list would dodge the
    // very loci the checks must detect).
    auto pts = sample_points(w.domain_, kSamplePoints, w.seed_);
    check_witness(w.fx_, "f_x", pts);
    check_witness(w.fy_, "f_y", pts);
    if (g) {
        check_witness(w.gx_, "g_x", pts);
        check_witness(w.gy_, "g_y", pts);
        check_witness(w.witnesses_[4], "b", pts);
        check_witness(w.witnesses_[5], "b - 1", pts);
    }
    return w;
}

WebSpec WebSpec::make3(std::string name, ExprPtr f, Domain domain, std::uint64_t seed) {
    return make(std::move(name), std::move(f), nullptr, domain, seed);
}

const ExprPtr& WebSpec::g() const {
    if (!g_) fail(ErrorKind::InvalidArgument, "web '" + name_ + "' has no second function g");
    return g_;
}

std::vector<Point> WebSpec::samples(int count) const {
    return sample_points(domain_, count, seed_, witnesses_);
}

ExprPtr WebSpec::bind(const ExprPtr& e) const {
    ExprPtr r = expr::substitute(e, expr::SymbolRef::function(expr::FnName::F), f_);
    if (g_) r = expr::substitute(r, expr::SymbolRef::function(expr::FnName::G), g_);
    return r;
}

} // namespace samweb::webs
