#include "config.hpp"

#include <cmath>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>

#include "levy_restock/errors.hpp"

namespace levy_restock::cli {

using nlohmann::json;

namespace {

void only_keys(const json& j, const std::string& where, std::set<std::string> allowed)
{
    if (!j.is_object()) throw ConfigError(where + ": expected an object");
    for (const auto& [k, v] : j.items())
        if (!allowed.count(k)) throw ConfigError(where + ": unknown key \"" + k + "\"");
}

const json& need(const json& j, const std::string& where, const std::string& key)
{
    if (!j.contains(key)) throw ConfigError(where + ": missing \"" + key + "\"");
    return j.at(key);
}

double number(const json& v, const std::string& what)
{
    if (!v.is_number()) throw ConfigError(what + ": expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError(what + ": must be finite");
    return x;
}

double number_or(const json& j, const std::string& where, const std::string& key, double dflt)
{
    return j.contains(key) ? number(j.at(key), where + "." + key) : dflt;
}

std::vector<double> numbers(const json& v, const std::string& what)
{
    if (!v.is_array()) throw ConfigError(what + ": expected an array of numbers");
    std::vector<double> out;
    for (const auto& x : v) out.push_back(number(x, what));
    return out;
}

std::size_t count(const json& v, const std::string& what)
{
    if (!v.is_number_integer() && !v.is_number_unsigned()) throw ConfigError(what + ": expected an integer");
    const auto n = v.get<long long>();
    if (n < 0) throw ConfigError(what + ": must be >= 0");
    return static_cast<std::size_t>(n);
}

LevyModel parse_model(const json& j)
{
    only_keys(j, "model", {"delta", "sigma", "jumps"});
    std::vector<JumpTerm> jumps;
    if (j.contains("jumps")) {
        if (!j.at("jumps").is_array()) throw ConfigError("model.jumps: expected an array");
        for (const auto& t : j.at("jumps")) {
            only_keys(t, "model.jumps[]", {"eta", "beta"});
            jumps.push_back({number(need(t, "model.jumps[]", "eta"), "model.jumps[].eta"),
                             number(need(t, "model.jumps[]", "beta"), "model.jumps[].beta")});
        }
    }
    return LevyModel(number(need(j, "model", "delta"), "model.delta"), number(need(j, "model", "sigma"), "model.sigma"),
                     std::move(jumps));
}

std::vector<FPiece> parse_f(const json& j)
{
    only_keys(j, "f", {"pieces"});
    const json& ps = need(j, "f", "pieces");
    if (!ps.is_array()) throw ConfigError("f.pieces: expected an array");
    std::vector<FPiece> pieces;
    for (const auto& p : ps) {
        only_keys(p, "f.pieces[]", {"from", "coeffs"});
        pieces.push_back({number_or(p, "f.pieces[]", "from", 0.0), numbers(need(p, "f.pieces[]", "coeffs"), "f.pieces[].coeffs")});
    }
    return pieces;
}

SolverOptions parse_solver(const json& j)
{
    only_keys(j, "solver", {"tol_root", "tol_residual", "bracket_cap"});
    SolverOptions o;
    o.tol_root = number_or(j, "solver", "tol_root", o.tol_root);
    o.tol_residual = number_or(j, "solver", "tol_residual", o.tol_residual);
    o.bracket_cap = number_or(j, "solver", "bracket_cap", o.bracket_cap);
    if (!(o.tol_root > 0) || !(o.tol_residual > 0) || !(o.bracket_cap > 0))
        throw ConfigError("solver: tolerances and bracket_cap must be > 0");
    return o;
}

SimSection parse_sim(const json& j)
{
    only_keys(j, "sim", {"dt", "horizon", "n_paths", "seed", "x0", "policy", "pilot_paths", "noise_dt", "a_far_gap"});
    SimSection s;
    s.cfg.dt = number_or(j, "sim", "dt", s.cfg.dt);
    s.cfg.horizon = number_or(j, "sim", "horizon", s.cfg.horizon);
    s.cfg.noise_dt = number_or(j, "sim", "noise_dt", s.cfg.noise_dt);
    if (j.contains("n_paths")) s.cfg.n_paths = count(j.at("n_paths"), "sim.n_paths");
    if (j.contains("seed")) s.cfg.seed = count(j.at("seed"), "sim.seed");
    if (j.contains("pilot_paths")) s.pilot_paths = count(j.at("pilot_paths"), "sim.pilot_paths");
    s.a_far_gap = number_or(j, "sim", "a_far_gap", s.a_far_gap);
    if (j.contains("x0")) {
        const json& x = j.at("x0");
        if (x.is_number())
            s.start = {StartPoint::Anchor::absolute, number(x, "sim.x0")};
        else if (x.is_string())
            s.start = parse_start(x.get<std::string>());
        else
            throw ConfigError("sim.x0: expected a number or a string such as \"b_star+2\"");
    }
    if (j.contains("policy")) {
        const std::string p = j.at("policy").is_string() ? j.at("policy").get<std::string>() : "";
        if (p == "hybrid")
            s.policy = SimPolicyKind::hybrid;
        else if (p == "pure_discounted")
            s.policy = SimPolicyKind::pure_discounted;
        else if (p == "pure_regular")
            s.policy = SimPolicyKind::pure_regular;
        else
            throw ConfigError("sim.policy: expected \"hybrid\", \"pure_discounted\" or \"pure_regular\"");
    }
    if (s.pilot_paths == 0) throw ConfigError("sim.pilot_paths: must be >= 1");
    if (!(s.a_far_gap > 0)) throw ConfigError("sim.a_far_gap: must be > 0");
    s.cfg.validate();
    return s;
}

StudySection parse_study(const json& j)
{
    only_keys(j, "study", {"b_offsets", "a_offsets", "gamma_a_offsets", "kc_list", "x_ref", "compare_C", "grid_step"});
    StudySection s;
    if (j.contains("b_offsets")) s.b_offsets = numbers(j.at("b_offsets"), "study.b_offsets");
    if (j.contains("a_offsets")) s.a_offsets = numbers(j.at("a_offsets"), "study.a_offsets");
    if (j.contains("gamma_a_offsets")) s.gamma_a_offsets = numbers(j.at("gamma_a_offsets"), "study.gamma_a_offsets");
    if (j.contains("kc_list")) s.kc_list = numbers(j.at("kc_list"), "study.kc_list");
    if (j.contains("x_ref")) s.x_ref = number(j.at("x_ref"), "study.x_ref");
    if (j.contains("compare_C")) s.compare_C = number(j.at("compare_C"), "study.compare_C");
    s.grid_step = number_or(j, "study", "grid_step", s.grid_step);
    if (!(s.grid_step > 0)) throw ConfigError("study.grid_step: must be > 0");
    if (s.kc_list.empty()) throw ConfigError("study.kc_list: must not be empty");
    return s;
}

}  // namespace

std::string StartPoint::text() const
{
    std::ostringstream os;
    switch (anchor) {
    case Anchor::absolute: os << offset; return os.str();
    case Anchor::a_star: os << "a_star"; break;
    case Anchor::b_star: os << "b_star"; break;
    case Anchor::midpoint: os << "midpoint"; break;
    }
    if (offset != 0.0) os << (offset > 0 ? "+" : "") << offset;
    return os.str();
}

StartPoint parse_start(const std::string& s)
{
    static const std::regex re(R"(^\s*(a_star|b_star|midpoint)\s*(([+-])\s*([0-9]*\.?[0-9]+([eE][+-]?[0-9]+)?))?\s*$)");
    std::smatch m;
    if (!std::regex_match(s, m, re)) {
        try {
            std::size_t used = 0;
            const double x = std::stod(s, &used);
            if (used == s.size() && std::isfinite(x)) return {StartPoint::Anchor::absolute, x};
        } catch (const std::exception&) {
        }
        throw ConfigError("sim.x0: cannot read \"" + s + "\" (use a number, a_star, b_star, midpoint, e.g. b_star+2)");
    }
    StartPoint p;
    p.anchor = m[1] == "a_star" ? StartPoint::Anchor::a_star
             : m[1] == "b_star" ? StartPoint::Anchor::b_star
                                : StartPoint::Anchor::midpoint;
    if (m[2].matched) p.offset = (m[3] == "-" ? -1.0 : 1.0) * std::stod(m[4]);
    return p;
}

std::vector<double> Grid::points() const
{
    std::vector<double> g;
    if (n == 1) return {lo};
    for (std::size_t i = 0; i < n; ++i) g.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1));
    return g;
}

Grid parse_grid(const std::string& s)
{
    std::stringstream ss(s);
    std::string lo, hi, n;
    if (!std::getline(ss, lo, ':') || !std::getline(ss, hi, ':') || !std::getline(ss, n) || ss.rdbuf()->in_avail())
        throw ConfigError("--x-grid: expected lo:hi:n, got \"" + s + "\"");
    Grid g{};
    try {
        std::size_t u1 = 0, u2 = 0, u3 = 0;
        g.lo = std::stod(lo, &u1);
        g.hi = std::stod(hi, &u2);
        const long long k = std::stoll(n, &u3);
        if (u1 != lo.size() || u2 != hi.size() || u3 != n.size() || k < 1) throw std::invalid_argument("");
        g.n = static_cast<std::size_t>(k);
    } catch (const std::exception&) {
        throw ConfigError("--x-grid: expected lo:hi:n with n >= 1, got \"" + s + "\"");
    }
    if (!std::isfinite(g.lo) || !std::isfinite(g.hi) || g.hi < g.lo)
        throw ConfigError("--x-grid: need finite lo <= hi");
    return g;
}

RunConfig parse_config(const json& j)
{
    only_keys(j, "config", {"model", "costs", "f", "solver", "sim", "output", "study"});
    RunConfig rc;
    rc.model = parse_model(need(j, "config", "model"));
    const json& c = need(j, "config", "costs");
    only_keys(c, "costs", {"q", "lambda", "K_c", "K_p"});
    rc.costs = CostSpec(number(need(c, "costs", "q"), "costs.q"), number(need(c, "costs", "lambda"), "costs.lambda"),
                        number(need(c, "costs", "K_c"), "costs.K_c"), number(need(c, "costs", "K_p"), "costs.K_p"),
                        parse_f(need(j, "config", "f")));
    if (j.contains("solver")) rc.solver = parse_solver(j.at("solver"));
    if (j.contains("sim")) rc.sim = parse_sim(j.at("sim"));
    if (j.contains("study")) rc.study = parse_study(j.at("study"));
    if (j.contains("output")) {
        const json& o = j.at("output");
        only_keys(o, "output", {"path", "format"});
        if (o.contains("path")) {
            if (!o.at("path").is_string()) throw ConfigError("output.path: expected a string");
            rc.out_path = o.at("path").get<std::string>();
        }
        if (o.contains("format")) {
            const std::string f = o.at("format").is_string() ? o.at("format").get<std::string>() : "";
            if (f == "csv")
                rc.format = RunConfig::Format::csv;
            else if (f == "json")
                rc.format = RunConfig::Format::json;
            else
                throw ConfigError("output.format: expected \"csv\" or \"json\"");
        }
    }
    return rc;
}

RunConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path);
    json j;
    try {
        j = json::parse(in, nullptr, true, true);
    } catch (const json::parse_error& e) {
        throw ConfigError("config " + path + ": " + e.what());
    }
    return parse_config(j);
}

}  // namespace levy_restock::cli
