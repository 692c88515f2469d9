#pragma once

#include "samweb/expr.hpp"

#include <array>

namespace samweb::expr {

// Coefficients of an expression affine in the w-jets:
//   e = sum_k coeff[k] * wjet(k) + constant.
struct JetCoefficients {
    std::array<ExprPtr, 4> coeff; // orders 0..3
    ExprPtr constant;
};

// Collects jet coefficients of an expression jointly affine in w, w', w'',
// w'''. Throws NonAffineWJet if any jet appears nonlinearly, two jets are
// multiplied, or a jet occurs in a denominator or inside an elementary
// function.
JetCoefficients collect_wjet(const ExprPtr& e);

// sum_k coeff[k]*wjet(k) + constant, normalized (for reconstruction checks).
ExprPtr reconstruct_wjet(const JetCoefficients& c);

} // namespace samweb::expr
