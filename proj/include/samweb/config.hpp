#pragma once

#include "samweb/expr.hpp"
#include "samweb/numlab.hpp"
#include "samweb/webspec.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace samweb::cli {

struct CurvatureCmd {};
struct RankCmd {};
struct IdentitiesCmd {};

struct HexagonCmd {
    webs::Point center;
    std::vector<double> eps;
};

struct AreaTestCmd {
    std::string u_text, v_text;
    expr::ExprPtr u, v;
    std::array<double, 3> u_levels{};
    std::array<double, 3> v_levels{};
};

using Command = std::variant<CurvatureCmd, RankCmd, IdentitiesCmd, HexagonCmd, AreaTestCmd>;

std::string command_name(const Command& c);

// One analysis job: a web (from f/g or generated from a potential S), a
// domain, a seed and a command list. Mirrors the line-oriented config format.
struct JobConfig {
    std::string name;
    std::string f_text, g_text, s_text;
    expr::ExprPtr f, g, S;
    webs::Domain domain{};
    std::uint64_t seed = webs::kDefaultSeed;
    std::vector<Command> commands;

    webs::WebSpec make_web() const; // builds (and validates) the WebSpec
};

// Parses `key = value` lines with # comments; lists in brackets; commands may
// carry parenthesized key=value parameters. Throws ConfigParseError with the
// line number, or NondegeneracyViolation from the eager WebSpec build.
JobConfig load_config(const std::string& path);
JobConfig parse_config(const std::string& text, const std::string& origin = "<string>");

} // namespace samweb::cli
