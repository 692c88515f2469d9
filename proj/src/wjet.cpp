#include "samweb/wjet.hpp"

#include "samweb/normalize.hpp"
#include "samweb/zero.hpp"

namespace samweb::expr {

namespace {

// True when the subtree hides a w-jet below the top level of the monomial
// structure (inside an elementary function, a compound power base, ...).
bool buried_wjet(const ExprPtr& e) { return contains_wjet(e); }

} // namespace

JetCoefficients collect_wjet(const ExprPtr& e) {
    // Work on the canonical fraction: numerator a sum of products, so the jet
    // structure is syntactically visible.
    ExprPtr n = normalize(e);

    // Split off a denominator if present.
    ExprPtr num = n, den = constant(1);
    if (const auto* p = n->as<PowNode>(); p && p->exponent < 0) {
        num = constant(1);
        den = pow(p->base, -p->exponent);
    } else if (const auto* pr = n->as<ProdNode>()) {
        std::vector<ExprPtr> nfs, dfs;
        for (const auto& f : pr->factors) {
            if (const auto* pf = f->as<PowNode>(); pf && pf->exponent < 0)
                dfs.push_back(pow(pf->base, -pf->exponent));
            else
                nfs.push_back(f);
        }
        if (!dfs.empty()) {
            num = prod(std::move(nfs));
            den = prod(std::move(dfs));
        }
    }
    if (buried_wjet(den))
        fail(ErrorKind::NonAffineWJet, "w-jet appears in a denominator");

    JetCoefficients out;
    for (auto& c : out.coeff) c = constant(0);
    out.constant = constant(0);
    std::vector<std::vector<ExprPtr>> jet_terms(4);
    std::vector<ExprPtr> const_terms;

    auto classify_term = [&](const ExprPtr& term) {
        // A term is a product of factors (or a single factor); at most one
        // factor may be a bare w-jet to first power.
        std::vector<ExprPtr> factors;
        if (const auto* p = term->as<ProdNode>())
            factors = p->factors;
        else
            factors = {term};
        int jet_order = -1;
        std::vector<ExprPtr> rest;
        for (const auto& f : factors) {
            if (const auto* w = f->as<WJetNode>()) {
                if (jet_order >= 0)
                    fail(ErrorKind::NonAffineWJet, "product of two w-jets");
                jet_order = w->order;
            } else if (buried_wjet(f)) {
                fail(ErrorKind::NonAffineWJet,
                     "w-jet appears nonlinearly or inside a function: " + to_string(f));
            } else {
                rest.push_back(f);
            }
        }
        ExprPtr coeff = rest.empty() ? constant(1) : prod(std::move(rest));
        if (jet_order >= 0)
            jet_terms[static_cast<std::size_t>(jet_order)].push_back(coeff);
        else
            const_terms.push_back(coeff);
    };

    if (const auto* s = num->as<SumNode>()) {
        for (const auto& t : s->terms) classify_term(t);
    } else {
        classify_term(num);
    }

    ExprPtr inv_den = pow(den, Rational(-1));
    for (int k = 0; k < 4; ++k) {
        out.coeff[static_cast<std::size_t>(k)] =
            normalize(sum(std::move(jet_terms[static_cast<std::size_t>(k)])) * inv_den);
    }
    out.constant = normalize(sum(std::move(const_terms)) * inv_den);
    return out;
}

ExprPtr reconstruct_wjet(const JetCoefficients& c) {
    std::vector<ExprPtr> parts;
    for (int k = 0; k < 4; ++k)
        parts.push_back(c.coeff[static_cast<std::size_t>(k)] * wjet(k));
    parts.push_back(c.constant);
    return normalize(sum(std::move(parts)));
}

} // namespace samweb::expr
