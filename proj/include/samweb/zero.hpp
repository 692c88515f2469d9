#pragma once

#include "samweb/expr.hpp"
#include "samweb/webspec.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace samweb::expr {

enum class ZeroKind { StructuralZero, NumericZero, NonZero };

struct ZeroVerdict {
    ZeroKind kind = ZeroKind::NonZero;
    // Witness point and value for NonZero.
    double wx = 0.0, wy = 0.0, value = 0.0;

    bool is_zero() const { return kind != ZeroKind::NonZero; }
    bool structural() const { return kind == ZeroKind::StructuralZero; }
};

std::string to_string(const ZeroVerdict& v);

// Decides whether e vanishes identically: structurally via the normal form,
// else numerically at 100 deterministic sample points drawn from the web
// domain (or a default box) avoiding recorded singular loci. Symbols without
// closed forms are bound to deterministic pseudo-random values per point, so
// expressions linear in w-jets are handled soundly.
ZeroVerdict is_zero(const ExprPtr& e, const webs::WebSpec* web = nullptr,
                    std::uint64_t seed = webs::kDefaultSeed);

inline bool definitely_zero(const ExprPtr& e, const webs::WebSpec* web = nullptr,
                            std::uint64_t seed = webs::kDefaultSeed) {
    return is_zero(e, web, seed).is_zero();
}

} // namespace samweb::expr
