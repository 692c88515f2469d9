#pragma once

#include "samweb/expr.hpp"

namespace samweb::expr {

// Result of normalization: the canonical tree plus the side conditions
// (expressions that must stay nonzero) recorded for factors cancelled along
// the way, e.g. x/x -> 1 records x. Conditions are sorted canonically.
struct NormalResult {
    ExprPtr value;
    std::vector<ExprPtr> conditions;
};

// Canonical form: a single fraction whose numerator and denominator are
// expanded polynomials over atomic symbols, terms in graded-lexicographic
// order, gcd-reduced by content only. Identical inputs give identical trees.
ExprPtr normalize(const ExprPtr& e);

NormalResult normalize_with_conditions(const ExprPtr& e);

// True iff normalize(e) is the zero constant.
bool structurally_zero(const ExprPtr& e);

} // namespace samweb::expr
