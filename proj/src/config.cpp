#include "samweb/config.hpp"

#include "samweb/normalize.hpp"
#include "samweb/samwebs.hpp"

#include <fstream>
#include <sstream>

namespace samweb::cli {

using expr::ExprPtr;

namespace {

[[noreturn]] void bad_config(const std::string& origin, int line, const std::string& what) {
    std::ostringstream os;
    os << origin << ":" << line << ": " << what;
    fail(ErrorKind::ConfigParseError, os.str());
}

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

// Splits at top-level commas, tracking () and [] depth.
std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    int depth = 0;
    std::string cur;
    for (char c : s) {
        if (c == '(' || c == '[') ++depth;
        if (c == ')' || c == ']') --depth;
        if (c == ',' && depth == 0) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!trim(cur).empty()) out.push_back(trim(cur));
    return out;
}

std::string strip_brackets(const std::string& s, char open, char close, const std::string& origin,
                           int line) {
    std::string t = trim(s);
    if (t.size() < 2 || t.front() != open || t.back() != close)
        bad_config(origin, line, "expected " + std::string(1, open) + "..." +
                                     std::string(1, close) + " around '" + s + "'");
    return t.substr(1, t.size() - 2);
}

Rational parse_rational(const std::string& s, const std::string& origin, int line) {
    try {
        ExprPtr e = expr::parse(s);
        if (auto c = expr::as_constant(e)) return *c;
    } catch (const Error&) {
    }
    bad_config(origin, line, "expected a rational number, got '" + s + "'");
}

double parse_double(const std::string& s, const std::string& origin, int line) {
    return to_double(parse_rational(s, origin, line));
}

std::map<std::string, std::string> parse_params(const std::string& body,
                                                const std::string& origin, int line) {
    std::map<std::string, std::string> out;
    for (const auto& item : split_list(body)) {
        std::size_t eq = item.find('=');
        if (eq == std::string::npos)
            bad_config(origin, line, "expected key=value in command parameters: '" + item + "'");
        out[trim(item.substr(0, eq))] = trim(item.substr(eq + 1));
    }
    return out;
}

Command parse_command(const std::string& text, const std::string& origin, int line) {
    std::string t = trim(text);
    std::string name = t;
    std::string body;
    std::size_t paren = t.find('(');
    if (paren != std::string::npos) {
        if (t.back() != ')')
            bad_config(origin, line, "unbalanced parentheses in command '" + t + "'");
        name = trim(t.substr(0, paren));
        body = t.substr(paren + 1, t.size() - paren - 2);
    }
    if (name == "curvature") return CurvatureCmd{};
    if (name == "rank") return RankCmd{};
    if (name == "identities") return IdentitiesCmd{};
    if (name == "hexagon") {
        auto params = parse_params(body, origin, line);
        if (!params.count("center") || !params.count("eps"))
            bad_config(origin, line, "hexagon needs center=(x, y) and eps=[...]");
        HexagonCmd cmd;
        auto cparts = split_list(strip_brackets(params["center"], '(', ')', origin, line));
        if (cparts.size() != 2) bad_config(origin, line, "center needs two coordinates");
        cmd.center.x = parse_double(cparts[0], origin, line);
        cmd.center.y = parse_double(cparts[1], origin, line);
        for (const auto& es : split_list(strip_brackets(params["eps"], '[', ']', origin, line)))
            cmd.eps.push_back(parse_double(es, origin, line));
        if (cmd.eps.empty()) bad_config(origin, line, "eps list is empty");
        return cmd;
    }
    if (name == "area-test") {
        auto params = parse_params(body, origin, line);
        for (const char* key : {"u", "v", "u_levels", "v_levels"})
            if (!params.count(key))
                bad_config(origin, line, std::string("area-test needs ") + key + "=...");
        AreaTestCmd cmd;
        cmd.u_text = params["u"];
        cmd.v_text = params["v"];
        try {
            cmd.u = expr::parse(cmd.u_text);
            cmd.v = expr::parse(cmd.v_text);
        } catch (const Error& e) {
            bad_config(origin, line, std::string("bad u/v expression: ") + e.what());
        }
        auto read_levels = [&](const std::string& key, std::array<double, 3>& out) {
            auto parts = split_list(strip_brackets(params[key], '[', ']', origin, line));
            if (parts.size() != 3) bad_config(origin, line, key + " needs three ascending values");
            for (int i = 0; i < 3; ++i)
                out[static_cast<std::size_t>(i)] = parse_double(parts[static_cast<std::size_t>(i)],
                                                                origin, line);
            if (!(out[0] < out[1] && out[1] < out[2]))
                bad_config(origin, line, key + " must be ascending");
        };
        read_levels("u_levels", cmd.u_levels);
        read_levels("v_levels", cmd.v_levels);
        return cmd;
    }
    bad_config(origin, line, "unknown command '" + name + "'");
}

} // namespace

std::string command_name(const Command& c) {
    if (std::holds_alternative<CurvatureCmd>(c)) return "curvature";
    if (std::holds_alternative<RankCmd>(c)) return "rank";
    if (std::holds_alternative<IdentitiesCmd>(c)) return "identities";
    if (std::holds_alternative<HexagonCmd>(c)) return "hexagon";
    return "area-test";
}

webs::WebSpec JobConfig::make_web() const {
    if (S) return webs::lagrangian_web(S, domain, seed, name);
    return webs::WebSpec::make(name, f, g, domain, seed);
}

JobConfig parse_config(const std::string& text, const std::string& origin) {
    JobConfig cfg;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    int domain_line = -1;
    bool have_domain = false, have_commands = false;
    while (std::getline(in, raw)) {
        ++line;
        std::string s = raw;
        if (std::size_t hash = s.find('#'); hash != std::string::npos) s = s.substr(0, hash);
        s = trim(s);
        if (s.empty()) continue;
        std::size_t eq = s.find('=');
        if (eq == std::string::npos) bad_config(origin, line, "expected key = value");
        std::string key = trim(s.substr(0, eq));
        std::string value = trim(s.substr(eq + 1));
        if (value.empty()) bad_config(origin, line, "empty value for '" + key + "'");
        if (key == "name") {
            cfg.name = value;
        } else if (key == "f" || key == "g" || key == "S") {
            try {
                ExprPtr e = expr::parse(value);
                if (key == "f") cfg.f = e, cfg.f_text = value;
                if (key == "g") cfg.g = e, cfg.g_text = value;
                if (key == "S") cfg.S = e, cfg.s_text = value;
            } catch (const Error& err) {
                bad_config(origin, line, std::string("bad expression: ") + err.what());
            }
        } else if (key == "domain") {
            auto parts = split_list(strip_brackets(value, '[', ']', origin, line));
            if (parts.size() != 4)
                bad_config(origin, line, "domain needs [x0, x1, y0, y1]");
            Rational r[4];
            for (int i = 0; i < 4; ++i)
                r[i] = parse_rational(parts[static_cast<std::size_t>(i)], origin, line);
            if (!(r[0] < r[1]) || !(r[2] < r[3]))
                bad_config(origin, line, "domain rectangle must have positive extent");
            cfg.domain = webs::Domain{r[0], r[1], r[2], r[3]};
            have_domain = true;
            domain_line = line;
        } else if (key == "seed") {
            try {
                cfg.seed = std::stoull(value);
            } catch (const std::exception&) {
                bad_config(origin, line, "seed must be a 64-bit unsigned integer");
            }
        } else if (key == "commands") {
            for (const auto& c : split_list(strip_brackets(value, '[', ']', origin, line)))
                cfg.commands.push_back(parse_command(c, origin, line));
            have_commands = !cfg.commands.empty();
            if (!have_commands) bad_config(origin, line, "commands list is empty");
        } else {
            bad_config(origin, line, "unknown key '" + key + "'");
        }
    }
    if (cfg.name.empty()) cfg.name = "web";
    if (cfg.S && (cfg.f || cfg.g))
        bad_config(origin, line, "S is mutually exclusive with f/g");
    if (!cfg.S && !cfg.f) bad_config(origin, line, "one of f or S is required");
    if (!have_domain) bad_config(origin, line, "domain is required");
    if (!have_commands) bad_config(origin, line, "commands are required");
    (void)domain_line;
    return cfg;
}

JobConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::IoError, "cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    JobConfig cfg = parse_config(buf.str(), path);
    cfg.make_web(); // surface nondegeneracy errors before any command runs
    return cfg;
}

} // namespace samweb::cli
