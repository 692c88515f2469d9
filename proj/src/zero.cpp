#include "samweb/zero.hpp"

#include "samweb/eval.hpp"
#include "samweb/normalize.hpp"

#include <cmath>
#include <sstream>

namespace samweb::expr {

namespace {

constexpr int kPoints = 100;
constexpr double kRelTol = 1e-9;

std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
    std::uint64_t z = a + 0x9e3779b97f4a7c15ull * (b + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

} // namespace

std::string to_string(const ZeroVerdict& v) {
    switch (v.kind) {
        case ZeroKind::StructuralZero: return "StructuralZero";
        case ZeroKind::NumericZero: return "NumericZero";
        case ZeroKind::NonZero: {
            std::ostringstream os;
            os << "NonZero at (" << v.wx << ", " << v.wy << ") = " << v.value;
            return os.str();
        }
    }
    return "?";
}

ZeroVerdict is_zero(const ExprPtr& e, const webs::WebSpec* web, std::uint64_t seed) {
    NormalResult nr = normalize_with_conditions(e);
    if (is_zero_const(nr.value)) return ZeroVerdict{ZeroKind::StructuralZero};

    ExprPtr target = web ? web->bind(nr.value) : nr.value;
    if (is_zero_const(target)) return ZeroVerdict{ZeroKind::StructuralZero};

    webs::Domain domain = web ? web->domain()
                              : webs::make_domain(Rational(1, 2), Rational(5, 2), Rational(1, 2),
                                                  Rational(5, 2));
    std::vector<ExprPtr> avoid = nr.conditions;
    if (web) {
        for (auto& c : avoid) c = web->bind(c);
        for (const auto& wexpr : web->singular_witnesses()) avoid.push_back(wexpr);
    }

    auto pts = webs::sample_points(domain, kPoints, seed, avoid);

    struct Sample {
        double x, y, value, magnitude;
    };
    std::vector<Sample> samples;
    samples.reserve(pts.size());
    double max_mag = 0.0;
    for (int i = 0; i < static_cast<int>(pts.size()); ++i) {
        EvalOptions opts;
        opts.track_magnitude = true;
        opts.auto_bind = true;
        opts.auto_seed = mix(seed, static_cast<std::uint64_t>(i));
        EvalResult r;
        try {
            r = eval_at(target, pts[i].x, pts[i].y, {}, opts);
        } catch (const Error& err) {
            if (err.kind() == ErrorKind::DomainViolation || err.kind() == ErrorKind::UnboundSymbol)
                continue; // singular or partially bound point, skip
            throw;
        }
        if (!std::isfinite(r.value) || !std::isfinite(r.max_magnitude)) continue;
        samples.push_back(Sample{pts[i].x, pts[i].y, r.value, r.max_magnitude});
        if (r.max_magnitude > max_mag) max_mag = r.max_magnitude;
    }
    if (samples.empty())
        fail(ErrorKind::AllPointsSingular, "no evaluable sample points for the zero test");

    const double tol = kRelTol * (1.0 + max_mag);
    for (const auto& s : samples) {
        if (std::fabs(s.value) >= tol)
            return ZeroVerdict{ZeroKind::NonZero, s.x, s.y, s.value};
    }
    return ZeroVerdict{ZeroKind::NumericZero};
}

} // namespace samweb::expr
