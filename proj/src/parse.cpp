#include "samweb/expr.hpp"
#include "samweb/normalize.hpp"

#include <cctype>
#include <string>

namespace samweb::expr {

namespace {

class Parser {
public:
    explicit Parser(const std::string& src) : src_(src) {}

    ExprPtr run() {
        ExprPtr e = parse_sum();
        skip_ws();
        if (pos_ != src_.size())
            fail_at(ErrorKind::SyntaxError, pos_, "unexpected trailing input");
        return e;
    }

private:
    const std::string& src_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail_at(ErrorKind kind, std::size_t at, const std::string& what) {
        fail(kind, what + " at byte " + std::to_string(at));
    }

    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    bool peek_is(char c) {
        skip_ws();
        return pos_ < src_.size() && src_[pos_] == c;
    }

    bool accept(char c) {
        if (peek_is(c)) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c))
            fail_at(ErrorKind::SyntaxError, pos_, std::string("expected '") + c + "'");
    }

    ExprPtr parse_sum() {
        ExprPtr e = parse_term();
        for (;;) {
            if (accept('+')) {
                e = e + parse_term();
            } else if (accept('-')) {
                e = e - parse_term();
            } else {
                return e;
            }
        }
    }

    ExprPtr parse_term() {
        ExprPtr e = parse_unary();
        for (;;) {
            if (accept('*')) {
                e = e * parse_unary();
            } else if (accept('/')) {
                e = e / parse_unary();
            } else {
                return e;
            }
        }
    }

    ExprPtr parse_unary() {
        if (accept('-')) return -parse_unary();
        return parse_power();
    }

    ExprPtr parse_power() {
        ExprPtr base = parse_primary();
        skip_ws();
        if (accept('^')) {
            std::size_t at = pos_;
            ExprPtr raw = parse_unary(); // right-associative
            ExprPtr norm = normalize(raw);
            auto c = as_constant(norm);
            if (!c)
                fail_at(ErrorKind::SyntaxError, at, "exponent must be a rational constant");
            return pow(std::move(base), *c);
        }
        return base;
    }

    ExprPtr parse_primary() {
        skip_ws();
        if (pos_ >= src_.size()) fail_at(ErrorKind::SyntaxError, pos_, "unexpected end of input");
        char c = src_[pos_];
        if (c == '(') {
            ++pos_;
            ExprPtr e = parse_sum();
            expect(')');
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
        fail_at(ErrorKind::SyntaxError, pos_, std::string("unexpected character '") + c + "'");
    }

    ExprPtr parse_number() {
        std::size_t start = pos_;
        Integer int_part = 0;
        bool any = false;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
            int_part = int_part * 10 + (src_[pos_] - '0');
            ++pos_;
            any = true;
        }
        Rational value(int_part);
        if (pos_ < src_.size() && src_[pos_] == '.') {
            ++pos_;
            Integer frac = 0, scale = 1;
            bool fany = false;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                frac = frac * 10 + (src_[pos_] - '0');
                scale *= 10;
                ++pos_;
                fany = true;
            }
            if (!any && !fany)
                fail_at(ErrorKind::SyntaxError, start, "malformed number");
            value += Rational(frac, scale);
        } else if (!any) {
            fail_at(ErrorKind::SyntaxError, start, "malformed number");
        }
        return constant(value);
    }

    ExprPtr parse_identifier() {
        std::size_t start = pos_;
        std::string name;
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'') {
                name += c;
                ++pos_;
            } else {
                break;
            }
        }

        if (name == "x") return x();
        if (name == "y") return y();

        // w with prime suffixes: w, w', w'', w'''
        if (!name.empty() && name[0] == 'w') {
            std::size_t primes = 0;
            while (1 + primes < name.size() && name[1 + primes] == '\'') ++primes;
            if (1 + primes == name.size()) {
                if (primes > 3)
                    fail_at(ErrorKind::UnknownIdentifier, start, "w-jet order above 3: " + name);
                return wjet(static_cast<int>(primes));
            }
        }

        // Elementary functions must be applied.
        for (ElemKind k : {ElemKind::Log, ElemKind::Exp, ElemKind::Sqrt, ElemKind::Sin,
                           ElemKind::Cos}) {
            if (name == elem_name(k)) {
                if (!peek_is('('))
                    fail_at(ErrorKind::SyntaxError, pos_,
                            std::string(elem_name(k)) + " must be applied with parentheses");
                ++pos_;
                ExprPtr arg = parse_sum();
                expect(')');
                return elem(k, std::move(arg));
            }
        }

        // Function symbols with optional derivative suffix: f, f_x, f_xy, ...
        auto classify = [&](char c0) -> std::optional<FnName> {
            switch (c0) {
                case 'f': return FnName::F;
                case 'g': return FnName::G;
                case 'u': return FnName::U;
                case 'v': return FnName::V;
                case 'S': return FnName::S;
                default: return std::nullopt;
            }
        };
        if (auto fn = classify(name[0])) {
            if (name.size() == 1) return fnsym(*fn);
            if (name.size() >= 3 && name[1] == '_') {
                int dx = 0, dy = 0;
                bool ok = true;
                for (std::size_t i = 2; i < name.size(); ++i) {
                    if (name[i] == 'x')
                        ++dx;
                    else if (name[i] == 'y')
                        ++dy;
                    else {
                        ok = false;
                        break;
                    }
                }
                if (ok) return fnsym(*fn, dx, dy);
            }
        }

        fail_at(ErrorKind::UnknownIdentifier, start, "unknown identifier '" + name + "'");
    }
};

} // namespace

ExprPtr parse(const std::string& source) {
    Parser p(source);
    return normalize(p.run());
}

} // namespace samweb::expr
