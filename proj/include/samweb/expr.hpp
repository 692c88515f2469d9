#pragma once

#include "samweb/error.hpp"
#include "samweb/rational.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace samweb::expr {

class Expr;
using ExprPtr = std::shared_ptr<const Expr>;

enum class Axis { X, Y };

enum class ElemKind { Log, Exp, Sqrt, Sin, Cos };

// Function symbols the grammar knows about. f and g are the web functions;
// u, v name the 2-web pair of the area test; S is a Lagrangian potential.
enum class FnName { F, G, U, V, S };

const char* elem_name(ElemKind k);
const char* fn_name(FnName n);

struct ConstNode {
    Rational value;
};
struct CoordNode {
    Axis axis;
};
struct SumNode {
    std::vector<ExprPtr> terms;
};
struct ProdNode {
    std::vector<ExprPtr> factors;
};
struct PowNode {
    ExprPtr base;
    Rational exponent; // never 0 or 1 in normalized trees
};
struct ElemNode {
    ElemKind kind;
    ExprPtr arg;
};
struct FnSymNode {
    FnName name;
    int dx = 0; // order of x-derivatives
    int dy = 0; // order of y-derivatives
};
struct WJetNode {
    int order = 0; // 0..3 for w, w', w'', w'''
};
struct FrameSymNode {
    std::string name;
    std::vector<int> word; // frame-derivative indices, outermost first
};

using Node = std::variant<ConstNode, CoordNode, SumNode, ProdNode, PowNode,
                          ElemNode, FnSymNode, WJetNode, FrameSymNode>;

// Immutable expression tree. Structural equality is decidable; a hash is
// computed once at construction so deep compares can short-circuit.
class Expr {
public:
    explicit Expr(Node node);

    const Node& node() const { return node_; }
    std::size_t hash() const { return hash_; }

    template <class T>
    const T* as() const {
        return std::get_if<T>(&node_);
    }
    template <class T>
    bool is() const {
        return std::holds_alternative<T>(node_);
    }

private:
    Node node_;
    std::size_t hash_;
};

bool equal(const ExprPtr& a, const ExprPtr& b);
// Deterministic total order on expressions (used for canonical monomial
// ordering). Returns <0, 0, >0.
int compare(const ExprPtr& a, const ExprPtr& b);

// ---- constructors (structural; normalization is a separate, explicit step) --

ExprPtr constant(Rational value);
ExprPtr constant(long long value);
ExprPtr coord(Axis axis);
ExprPtr x();
ExprPtr y();
ExprPtr sum(std::vector<ExprPtr> terms);    // flattens nested sums
ExprPtr prod(std::vector<ExprPtr> factors); // flattens nested products
ExprPtr pow(ExprPtr base, Rational exponent);
ExprPtr elem(ElemKind kind, ExprPtr arg);
ExprPtr fnsym(FnName name, int dx = 0, int dy = 0);
ExprPtr wjet(int order);
ExprPtr framesym(std::string name, std::vector<int> word);

ExprPtr operator+(const ExprPtr& a, const ExprPtr& b);
ExprPtr operator-(const ExprPtr& a, const ExprPtr& b);
ExprPtr operator*(const ExprPtr& a, const ExprPtr& b);
ExprPtr operator/(const ExprPtr& a, const ExprPtr& b);
ExprPtr operator-(const ExprPtr& a);

inline ExprPtr log(ExprPtr a) { return elem(ElemKind::Log, std::move(a)); }
inline ExprPtr exp(ExprPtr a) { return elem(ElemKind::Exp, std::move(a)); }
inline ExprPtr sqrt(ExprPtr a) { return elem(ElemKind::Sqrt, std::move(a)); }
inline ExprPtr sin(ExprPtr a) { return elem(ElemKind::Sin, std::move(a)); }
inline ExprPtr cos(ExprPtr a) { return elem(ElemKind::Cos, std::move(a)); }

bool is_zero_const(const ExprPtr& e);
bool is_one_const(const ExprPtr& e);
// If the expression is a plain rational constant, return it.
std::optional<Rational> as_constant(const ExprPtr& e);

bool contains_framesym(const ExprPtr& e);
bool contains_wjet(const ExprPtr& e);
bool contains_fnsym(const ExprPtr& e, FnName name);

// ---- grammar front end ------------------------------------------------------

// Parses the expression grammar (numbers, x y f g u v S w with derivative
// suffixes, + - * / ^, log exp sqrt sin cos) and returns the *normalized*
// tree. Throws SyntaxError (with byte offset) or UnknownIdentifier.
ExprPtr parse(const std::string& source);

// Emits the same grammar the parser accepts; parse(to_string(e)) structurally
// equals normalize(e). Frame symbols print as name[word] for reports but are
// not part of the input grammar.
std::string to_string(const ExprPtr& e);

// ---- calculus ---------------------------------------------------------------

// Partial derivative in x or y. Function symbols get their derivative order
// bumped; w-jets are constants for coordinate differentiation (they only move
// under frame operators). Throws FrameSymbolPresent if a frame symbol occurs.
ExprPtr diff(const ExprPtr& e, Axis axis);

// Partial derivative treating one symbol occurrence pattern as the variable
// and everything else as constant. `symbol` must be a FnSym, WJet or FrameSym
// node; used by the frame-operator jet rule.
ExprPtr symbol_diff(const ExprPtr& e, const ExprPtr& symbol);

// What a substitution can target: a coordinate, a function symbol (all its
// derivatives are replaced by derivatives of the replacement), one w-jet
// order, or one frame symbol occurrence.
struct SymbolRef {
    enum class Tag { Coord, Fn, WJet, Frame } tag;
    Axis axis = Axis::X;
    FnName fn = FnName::F;
    int jet_order = 0;
    std::string frame_name;
    std::vector<int> frame_word;

    static SymbolRef coordinate(Axis a);
    static SymbolRef function(FnName n);
    static SymbolRef jet(int order);
    static SymbolRef frame(std::string name, std::vector<int> word);
};

// Replaces every occurrence of `target` by `replacement` and normalizes.
// For a function target f, FnSym(f, i, j) becomes d^i/dx^i d^j/dy^j of the
// replacement.
ExprPtr substitute(const ExprPtr& e, const SymbolRef& target, const ExprPtr& replacement);

} // namespace samweb::expr
