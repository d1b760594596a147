#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <sstream>

#include "levy_restock/errors.hpp"
#include "levy_restock/parallel.hpp"
#include "levy_restock/pure_policies.hpp"
#include "levy_restock/verify.hpp"

namespace levy_restock::cli {

using nlohmann::json;

namespace {

constexpr double kDominanceTol = 1e-9;  // relative to 1 + |v|

struct Solved {
    CostSpec spec;
    KernelSet ks;
    PolicySolution sol;
    Solved(const RunConfig& rc, const CostSpec& s)
        : spec(s), ks(rc.model, s.q(), s.lambda()), sol(solve_barriers(spec, ks, rc.solver))
    {
    }
    // the grid [a* - 3, b* + 5] (b* - 8 for the pure discounted policy)
    std::vector<double> default_grid(double step) const
    {
        const double lo = sol.hybrid() ? sol.a_star - 3.0 : sol.b_star - 8.0;
        return step_grid(lo, sol.b_star + 5.0, step);
    }
};

using ValueFn = std::function<double(double)>;

ValueFn optimal_value(const Solved& s)
{
    if (s.sol.hybrid()) {
        auto c = std::make_shared<PolicyCost>(solution_cost(s.spec, s.ks, s.sol));
        return [c](double x) { return (*c)(x); };
    }
    auto e = std::make_shared<PureDiscountedEvaluator>(s.spec, s.ks, s.sol.b_star);
    return [e](double x) { return (*e)(x); };
}

std::vector<double> grid_or(const Flags& fl, std::vector<double> dflt)
{
    return fl.x_grid ? fl.x_grid->points() : dflt;
}

std::string num_text(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", x);
    return buf;
}

std::string offset_label(double d)
{
    if (d == 0.0) return "";
    return (d > 0 ? "+" : "") + num_text(d);
}

std::string hp_text(const hp& x) { return x.str(40, std::ios_base::scientific); }

std::string target(const RunConfig& rc, const Flags& fl) { return !fl.out.empty() ? fl.out : rc.out_path; }

void with_stream(const std::string& path, const std::function<void(std::ostream&)>& body)
{
    if (path.empty() || path == "-") {
        body(std::cout);
        return;
    }
    std::ofstream os(path);
    if (!os) throw ConfigError("cannot write " + path);
    body(os);
}

json table_json(const Table& t)
{
    json rows = json::array();
    for (const auto& r : t.rows) {
        json o = json::object();
        for (std::size_t i = 0; i < t.header.size(); ++i) o[t.header[i]] = r[i];
        rows.push_back(o);
    }
    return rows;
}

void emit_table(const Table& t, const RunConfig& rc, const std::string& path)
{
    with_stream(path, [&](std::ostream& os) {
        if (rc.format == RunConfig::Format::json)
            os << table_json(t).dump(2) << "\n";
        else
            write_csv(t, os);
    });
}

// JSON results go to --out and, when that is a file, to stdout as well
void emit_json(const json& j, const std::string& path)
{
    with_stream(path, [&](std::ostream& os) { os << j.dump(2) << "\n"; });
    if (!path.empty() && path != "-") std::cout << j.dump(2) << "\n";
}

std::vector<double> evaluate(const ValueFn& v, const std::vector<double>& xs)
{
    std::vector<double> out(xs.size());
    parallel_for(xs.size(), [&](std::size_t i) { out[i] = v(xs[i]); });
    return out;
}

json thresholds_json(const CostSpec& spec, const KernelSet& ks)
{
    try {
        const Thresholds t = thresholds(spec, ks);
        return {{"a_bar", t.a_bar},
                {"a_bar_bar", t.a_bar_bar},
                {"a_underline_1", t.a_underline_1},
                {"a_underline_2", t.a_underline_2},
                {"a_dagger", t.a_dagger},
                {"case", to_string(t.case_tag)}};
    } catch (const NoFiniteThreshold&) {
        return nullptr;
    }
}

json solution_json(const Solved& s)
{
    const PolicySolution& sol = s.sol;
    json j;
    j["lambda"] = s.spec.lambda();
    j["K_c"] = s.spec.K_c();
    j["K_p"] = s.spec.K_p();
    j["kind"] = sol.hybrid() ? "hybrid" : "pure_discounted";
    j["b_star"] = sol.b_star;
    j["b_star_exact"] = hp_text(sol.b_exact);
    j["thresholds"] = thresholds_json(s.spec, s.ks);
    if (!sol.hybrid()) {
        j["a_star"] = nullptr;
        const PureDiscountedEvaluator e(s.spec, s.ks, sol.b_star);
        const double gap = std::abs(e.value_prime()(sol.b_star) + s.spec.K_p());
        j["smooth_fit"] = {{"v_prime_b_plus_K_p", gap}};
        j["pass"] = gap <= 1e-6;
        return j;
    }
    j["a_star"] = sol.a_star;
    j["a_star_exact"] = hp_text(sol.a_exact);
    j["case"] = to_string(sol.diag.case_tag);
    j["extended_precision"] = sol.extended;
    const double scale = sol.diag.residual_scale;
    j["residuals"] = {{"Gamma", sol.diag.gamma_big_residual},
                      {"gamma", sol.diag.gamma_small_residual},
                      {"scale", scale},
                      {"bound", 1e-8 * scale}};
    const PolicyCost v = solution_cost(s.spec, s.ks, sol);
    const double ga = std::abs(v.derivative(sol.a_star, Side::right) + s.spec.K_c());
    const double gl = std::abs(v.derivative(sol.a_star, Side::left) + s.spec.K_c());
    const double gb = std::abs(v.derivative(sol.b_star) + s.spec.K_p());
    j["smooth_fit"] = {{"v_prime_a_plus_K_c", ga}, {"v_prime_a_left_plus_K_c", gl}, {"v_prime_b_plus_K_p", gb}};
    const bool res_ok = std::abs(sol.diag.gamma_big_residual) <= 1e-8 * scale &&
                        std::abs(sol.diag.gamma_small_residual) <= 1e-8 * scale;
    j["pass"] = res_ok && std::max({ga, gl, gb}) <= 1e-6;
    return j;
}

// ---- figure tables ----

Table gamma_table(const Solved& s, const StudySection& st, const Flags& fl)
{
    if (!s.sol.hybrid()) throw NumericError("gamma-scan: the solution is pure discounted, Gamma has no root");
    std::vector<double> bs = grid_or(fl, step_grid(s.sol.a_star + 0.05, s.sol.b_star + 1.5, 0.01));
    if (!fl.x_grid) {
        bs.push_back(s.sol.b_star);
        std::sort(bs.begin(), bs.end());
    }
    Table t{{"a", "b", "Gamma"}, {}};
    for (double da : st.gamma_a_offsets) {
        const hp a = s.sol.a_exact + hp(da);
        const double ad = num::to_double(a);
        std::vector<double> g(bs.size(), NAN);
        parallel_for(bs.size(), [&](std::size_t i) {
            const hp b = bs[i] == s.sol.b_star ? s.sol.b_exact : hp(bs[i]);
            if (b > a) g[i] = PolicyCost(s.spec, s.ks, a, b).gamma_big();
        });
        for (std::size_t i = 0; i < bs.size(); ++i)
            if (!std::isnan(g[i])) t.rows.push_back({ad, bs[i], g[i]});
    }
    return t;
}

struct ValueStudy {
    Table table;
    bool dominated = true;  // optimal column <= every other column on the grid
    std::string worst;
};

ValueStudy value_table(const Solved& s, const std::vector<double>& b_offsets, const std::vector<double>& a_offsets,
                       const std::vector<double>& grid)
{
    if (!s.sol.hybrid()) throw NumericError("value: the solution is pure discounted, no hybrid barriers to perturb");
    struct Col {
        std::string name;
        hp a, b;
    };
    std::vector<Col> cols{{"v_opt", s.sol.a_exact, s.sol.b_exact}};
    for (double db : b_offsets)
        if (db != 0.0) cols.push_back({"v_a*_b*" + offset_label(db), s.sol.a_exact, s.sol.b_exact + hp(db)});
    for (double da : a_offsets)
        if (da != 0.0) cols.push_back({"v_a*" + offset_label(da) + "_b*", s.sol.a_exact + hp(da), s.sol.b_exact});

    // grid rows, then one marker row per barrier of every column
    std::vector<std::pair<std::string, double>> xs;
    for (double x : grid) xs.push_back({"grid", x});
    for (const auto& c : cols) {
        xs.push_back({"a:" + c.name, num::to_double(c.a)});
        xs.push_back({"b:" + c.name, num::to_double(c.b)});
    }
    std::vector<std::vector<double>> vals(cols.size());
    for (std::size_t k = 0; k < cols.size(); ++k) {
        if (!(cols[k].a < cols[k].b)) throw ConfigError("value: perturbation " + cols[k].name + " gives a >= b");
        const auto cost = std::make_shared<PolicyCost>(s.spec, s.ks, cols[k].a, cols[k].b);
        std::vector<double> at(xs.size());
        for (std::size_t i = 0; i < xs.size(); ++i) at[i] = xs[i].second;
        vals[k] = evaluate([cost](double x) { return (*cost)(x); }, at);
    }
    ValueStudy out;
    out.table.header = {"x", "row"};
    for (const auto& c : cols) out.table.header.push_back(c.name);
    double worst = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        std::vector<json> row{xs[i].second, xs[i].first};
        for (std::size_t k = 0; k < cols.size(); ++k) {
            row.push_back(vals[k][i]);
            const double excess = (vals[0][i] - vals[k][i]) / (1.0 + std::abs(vals[k][i]));
            if (excess > kDominanceTol && excess > worst) {
                worst = excess;
                out.dominated = false;
                out.worst = cols[k].name + " at x=" + num_text(xs[i].second);
            }
        }
        out.table.rows.push_back(std::move(row));
    }
    return out;
}

struct SweepStudy {
    Table summary, values;
    bool spread_decreasing = true, value_nonincreasing = true;
    double terminal_distance = 0;  // max(|a* - a_dag|, |b* - a_dag|) at the last K_c
    double a_dagger = 0, x_ref = 0;
};

SweepStudy sweep_kc(const RunConfig& rc, const CostSpec& base, const StudySection& st, const Flags& fl)
{
    SweepStudy out;
    const KernelSet ks(rc.model, base.q(), base.lambda());
    const double kp = base.K_p();
    out.a_dagger = pure_regular_barrier(base, ks, kp);
    out.x_ref = st.x_ref.value_or(out.a_dagger);
    const PureRegularEvaluator limit(base, ks, out.a_dagger, kp);

    std::vector<std::unique_ptr<Solved>> runs;
    for (double kc : st.kc_list) runs.push_back(std::make_unique<Solved>(rc, base.with_costs(kc, kp)));

    out.summary.header = {"K_c", "a*", "b*", "v(x_ref)"};
    double lo = out.a_dagger - 3.0, hi = out.a_dagger + 5.0;
    double prev_spread = INFINITY, prev_v = INFINITY;
    std::vector<ValueFn> fns;
    for (const auto& r : runs) {
        const ValueFn v = optimal_value(*r);
        fns.push_back(v);
        const double a = r->sol.a_star, b = r->sol.b_star, vx = v(out.x_ref);
        out.summary.rows.push_back({r->spec.K_c(), r->sol.hybrid() ? json(a) : json(nullptr), b, vx});
        const double spread = b - a;
        if (!(spread < prev_spread)) out.spread_decreasing = false;
        if (vx > prev_v * (1.0 + kDominanceTol)) out.value_nonincreasing = false;
        prev_spread = spread;
        prev_v = vx;
        if (r->sol.hybrid()) lo = std::min(lo, a - 3.0);
        hi = std::max(hi, b + 5.0);
    }
    const PolicySolution& last = runs.back()->sol;
    out.terminal_distance = std::max(std::abs(last.a_star - out.a_dagger), std::abs(last.b_star - out.a_dagger));
    // limit row: K_c = K_p, both barriers at a-double-dagger
    out.summary.rows.push_back({kp, out.a_dagger, out.a_dagger, limit(out.x_ref)});

    const std::vector<double> xs = grid_or(fl, step_grid(lo, hi, st.grid_step));
    out.values.header = {"x"};
    for (const auto& r : runs) out.values.header.push_back("v_Kc=" + num_text(r->spec.K_c()));
    out.values.header.push_back("v_a_dagger");
    std::vector<std::vector<double>> cols;
    for (const auto& f : fns) cols.push_back(evaluate(f, xs));
    cols.push_back(evaluate([&](double x) { return limit(x); }, xs));
    for (std::size_t i = 0; i < xs.size(); ++i) {
        std::vector<json> row{xs[i]};
        for (const auto& c : cols) row.push_back(c[i]);
        out.values.rows.push_back(std::move(row));
    }
    return out;
}

struct CompareStudy {
    Table table;
    bool dominated = true;
    std::string worst;
    double C = 0, a_dagger = 0, a_dagger_Kp = 0, b_dagger = 0;
};

CompareStudy compare(const Solved& s, const StudySection& st, const std::vector<double>& xs)
{
    CompareStudy out;
    out.C = st.compare_C.value_or(s.spec.K_c());
    out.a_dagger = pure_regular_barrier(s.spec, s.ks, out.C);
    out.a_dagger_Kp = pure_regular_barrier(s.spec, s.ks, s.spec.K_p());
    out.b_dagger = pure_discounted_barrier(s.spec, s.ks);
    const PureRegularEvaluator reg(s.spec, s.ks, out.a_dagger, out.C);
    const PureRegularEvaluator reg_kp(s.spec, s.ks, out.a_dagger_Kp, s.spec.K_p());
    const PureDiscountedEvaluator disc(s.spec, s.ks, out.b_dagger);
    const ValueFn hyb = optimal_value(s);
    const auto vh = evaluate(hyb, xs);
    const auto vr = evaluate([&](double x) { return reg(x); }, xs);
    const auto vd = evaluate([&](double x) { return disc(x); }, xs);
    const auto vk = evaluate([&](double x) { return reg_kp(x); }, xs);
    out.table.header = {"x", "v_hybrid", "v_pure_regular", "v_pure_discounted", "v_pure_regular_C=K_p"};
    double worst = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        out.table.rows.push_back({xs[i], vh[i], vr[i], vd[i], vk[i]});
        const double excess = (vh[i] - std::min(vr[i], vd[i])) / (1.0 + std::abs(vh[i]));
        if (excess > kDominanceTol && excess > worst) {
            worst = excess;
            out.dominated = false;
            out.worst = "x=" + num_text(xs[i]);
        }
    }
    return out;
}

std::vector<double> column(const Table& t, std::size_t k)
{
    std::vector<double> c;
    for (const auto& r : t.rows) c.push_back(r[k].get<double>());
    return c;
}

void report(bool ok, const std::string& what)
{
    if (!ok) std::cerr << "check failed: " << what << "\n";
}

}  // namespace

void write_csv(const Table& t, std::ostream& os)
{
    for (std::size_t i = 0; i < t.header.size(); ++i) os << (i ? "," : "") << t.header[i];
    os << "\n";
    for (const auto& r : t.rows) {
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (i) os << ",";
            if (r[i].is_number())
                os << num_text(r[i].get<double>());
            else if (r[i].is_string())
                os << r[i].get<std::string>();
            else if (r[i].is_boolean())
                os << (r[i].get<bool>() ? "true" : "false");
        }
        os << "\n";
    }
}

int cmd_solve(const RunConfig& rc, const Flags& fl)
{
    const Solved s(rc, rc.costs);
    const json j = solution_json(s);
    emit_json(j, target(rc, fl));
    return j["pass"].get<bool>() ? 0 : 2;
}

int cmd_gamma_scan(const RunConfig& rc, const Flags& fl)
{
    const Solved s(rc, rc.costs);
    emit_table(gamma_table(s, rc.study, fl), rc, target(rc, fl));
    return 0;
}

int cmd_value(const RunConfig& rc, const Flags& fl)
{
    const Solved s(rc, rc.costs);
    const ValueStudy v =
        value_table(s, rc.study.b_offsets, rc.study.a_offsets, grid_or(fl, s.default_grid(rc.study.grid_step)));
    emit_table(v.table, rc, target(rc, fl));
    report(v.dominated, "v_opt exceeds a perturbed policy (" + v.worst + ")");
    return v.dominated ? 0 : 2;
}

int cmd_sweep_kc(const RunConfig& rc, const Flags& fl)
{
    const SweepStudy sw = sweep_kc(rc, rc.costs, rc.study, fl);
    emit_table(sw.summary, rc, target(rc, fl));
    report(sw.spread_decreasing, "b* - a* is not strictly decreasing along kc_list");
    report(sw.value_nonincreasing, "v(x_ref) increases along kc_list");
    return sw.spread_decreasing && sw.value_nonincreasing ? 0 : 2;
}

int cmd_compare(const RunConfig& rc, const Flags& fl)
{
    const Solved s(rc, rc.costs);
    const CompareStudy c = compare(s, rc.study, grid_or(fl, s.default_grid(rc.study.grid_step)));
    emit_table(c.table, rc, target(rc, fl));
    report(c.dominated, "hybrid exceeds min(pure regular, pure discounted) at " + c.worst);
    return c.dominated ? 0 : 2;
}

int cmd_simulate(const RunConfig& rc, const Flags& fl)
{
    const Solved s(rc, rc.costs);
    SimConfig cfg = rc.sim.cfg;
    if (fl.seed) cfg.seed = *fl.seed;

    struct Parts {
        double total, holding, rc, rp;
    } exact{};
    switch (rc.sim.policy) {
    case SimPolicyKind::hybrid: {
        if (!s.sol.hybrid()) throw NumericError("simulate: the solution is pure discounted; set sim.policy");
        cfg.policy = SimPolicy::hybrid(s.sol.a_star, s.sol.b_star);
        break;
    }
    case SimPolicyKind::pure_discounted: {
        const double b = pure_discounted_barrier(s.spec, s.ks, rc.solver);
        cfg.policy = SimPolicy::pure_discounted(b, b - rc.sim.a_far_gap);
        break;
    }
    case SimPolicyKind::pure_regular: {
        const double C = rc.study.compare_C.value_or(s.spec.K_c());
        if (C != s.spec.K_c()) throw ConfigError("simulate: pure_regular runs at unit price K_c; drop study.compare_C");
        const double a = pure_regular_barrier(s.spec, s.ks, C);
        cfg.policy = SimPolicy::pure_regular(a, 0.0);  // b = a: reflection only
        break;
    }
    }
    const double a = cfg.policy.a, b = cfg.policy.b;
    const StartPoint& sp = rc.sim.start;
    switch (sp.anchor) {
    case StartPoint::Anchor::absolute: cfg.x0 = sp.offset; break;
    case StartPoint::Anchor::a_star:
        if (!std::isfinite(a)) throw ConfigError("sim.x0: a_star is not defined for this policy");
        cfg.x0 = a + sp.offset;
        break;
    case StartPoint::Anchor::b_star: cfg.x0 = b + sp.offset; break;
    case StartPoint::Anchor::midpoint:
        if (!std::isfinite(a)) throw ConfigError("sim.x0: midpoint is not defined for this policy");
        cfg.x0 = 0.5 * (a + b) + sp.offset;
        break;
    }
    cfg.validate();
    const double x = cfg.x0;
    switch (rc.sim.policy) {
    case SimPolicyKind::hybrid: {
        const PolicyCost v = solution_cost(s.spec, s.ks, s.sol);
        exact = {v(x), v.holding(x), v.units_regular(x), v.units_discounted(x)};
        break;
    }
    case SimPolicyKind::pure_discounted: {
        const PureDiscountedEvaluator e(s.spec, s.ks, b);
        exact = {e(x), e.holding()(x), 0.0, e.units_discounted()(x)};
        break;
    }
    case SimPolicyKind::pure_regular: {
        const PureRegularEvaluator e(s.spec, s.ks, a, s.spec.K_c());
        exact = {e(x), e.holding(x), e.units_regular(x), 0.0};
        break;
    }
    }

    const McValue mc = mc_value(rc.model, s.spec, cfg);
    const BiasBudget bias = estimate_bias(rc.model, s.spec, cfg, rc.sim.pilot_paths);
    bool pass = true;
    auto part = [&](double analytic, const Estimate& e, double disc) {
        const double allowed = 3.0 * e.se + bias.allowance(disc, analytic);
        const bool ok = std::abs(e.mean - analytic) <= allowed;
        pass = pass && ok;
        return json{{"analytic", analytic}, {"mc_mean", e.mean},   {"mc_stderr", e.se},
                    {"bias_budget", bias.allowance(disc, analytic)}, {"pass", ok}};
    };
    json comp;
    comp["total"] = part(exact.total, mc.total, bias.total);
    comp["holding"] = part(exact.holding, mc.holding, bias.holding);
    comp["rc"] = part(exact.rc, mc.rc, bias.rc);
    comp["rp"] = part(exact.rp, mc.rp, bias.rp);
    json j;
    j["analytic"] = exact.total;
    j["mc_mean"] = mc.total.mean;
    j["mc_stderr"] = mc.total.se;
    j["bias_budget"] = comp["total"]["bias_budget"];
    j["pass"] = pass;
    j["components"] = comp;
    j["x0"] = x;
    j["x0_spec"] = sp.text();
    j["policy"] = {{"a", std::isfinite(a) ? json(a) : json(nullptr)}, {"b", b}};
    j["sim"] = {{"dt", cfg.dt},
                {"horizon", cfg.horizon},
                {"n_paths", cfg.n_paths},
                {"seed", cfg.seed},
                {"pilot_paths", rc.sim.pilot_paths},
                {"truncation_weight", bias.truncation_weight}};
    emit_json(j, target(rc, fl));
    return pass ? 0 : 2;
}

int cmd_verify(const RunConfig& rc, const Flags& fl)
{
    const Solved s(rc, rc.costs);
    const VerificationReport r =
        full_report(s.spec, s.ks, s.sol, grid_or(fl, s.default_grid(rc.study.grid_step)));
    json pts = json::array();
    for (const auto& p : r.vi_residuals)
        pts.push_back({{"x", p.x},
                       {"region", to_string(p.region)},
                       {"lhs", p.lhs},
                       {"expected", p.expected},
                       {"residual", p.residual}});
    json j = {{"smooth_fit_gap", r.smooth_fit_gap},
              {"smooth_fit_gap_a", r.smooth_fit_gap_a},
              {"smooth_fit_gap_b", r.smooth_fit_gap_b},
              {"second_order_gap", std::isnan(r.second_order_gap) ? json(nullptr) : json(r.second_order_gap)},
              {"min_slope_plus_K_c", r.min_slope_plus_Kc},
              {"min_slope_increment", r.min_slope_increment},
              {"max_abs_residual", r.max_abs_residual},
              {"min_vi_lhs", r.min_vi_lhs},
              {"passed",
               {{"smooth_fit", r.passed.smooth_fit},
                {"slope", r.passed.slope},
                {"convexity", r.passed.convexity},
                {"vi", r.passed.vi},
                {"all", r.passed.all}}},
              {"vi_residuals", pts}};
    with_stream(target(rc, fl), [&](std::ostream& os) { os << j.dump(2) << "\n"; });
    json brief = j;
    brief.erase("vi_residuals");
    if (!target(rc, fl).empty() && target(rc, fl) != "-") std::cout << brief.dump(2) << "\n";
    return r.passed.all ? 0 : 2;
}

int cmd_reproduce(const RunConfig& rc, const Flags& fl)
{
    namespace fs = std::filesystem;
    const fs::path dir = target(rc, fl).empty() ? fs::path("paper_figures") : fs::path(target(rc, fl));
    fs::create_directories(dir);
    RunConfig csv = rc;
    csv.format = RunConfig::Format::csv;
    auto put = [&](const Table& t, const std::string& name) {
        emit_table(t, csv, (dir / name).string());
        std::cout << "wrote " << (dir / name).string() << " (" << t.rows.size() << " rows)\n";
    };
    bool ok = true;
    json summary;

    const Solved l2(rc, rc.costs.with_lambda(2.0));
    const Solved l12(rc, rc.costs.with_lambda(12.0));
    const Solved l02(rc, rc.costs.with_lambda(0.2));
    summary["solutions"] = {solution_json(l2), solution_json(l12), solution_json(l02)};
    for (const auto& j : summary["solutions"]) ok = ok && j["pass"].get<bool>();

    StudySection st = rc.study;
    put(gamma_table(l2, st, Flags{}), "fig2_gamma_scan.csv");

    const ValueStudy f3b = value_table(l2, {-0.2, 0.2, 0.4}, {}, l2.default_grid(st.grid_step));
    const ValueStudy f3a = value_table(l2, {}, {-0.2, -0.1, 0.1, 0.2}, l2.default_grid(st.grid_step));
    const ValueStudy f4b = value_table(l12, {-0.2, -0.1, 0.1, 0.2}, {}, l12.default_grid(st.grid_step));
    const ValueStudy f4a = value_table(l12, {}, {-1.0, -0.5, 0.5, 1.0}, l12.default_grid(st.grid_step));
    put(f3b.table, "fig3_left_vary_b.csv");
    put(f3a.table, "fig3_right_vary_a.csv");
    put(f4b.table, "fig4_left_vary_b.csv");
    put(f4a.table, "fig4_right_vary_a.csv");
    summary["dominance"] = {{"fig3", f3b.dominated && f3a.dominated}, {"fig4", f4b.dominated && f4a.dominated}};
    ok = ok && f3b.dominated && f3a.dominated && f4b.dominated && f4a.dominated;

    const SweepStudy sw = sweep_kc(rc, rc.costs.with_lambda(2.0), st, Flags{});
    put(sw.summary, "fig5_sweep_kc.csv");
    put(sw.values, "fig5_values.csv");
    summary["sweep_kc"] = {{"spread_strictly_decreasing", sw.spread_decreasing},
                           {"value_nonincreasing", sw.value_nonincreasing},
                           {"a_dagger_K_p", sw.a_dagger},
                           {"terminal_distance", sw.terminal_distance}};
    ok = ok && sw.spread_decreasing && sw.value_nonincreasing;

    json savings = json::object();
    for (const Solved* s : {&l2, &l02}) {
        const CompareStudy c = compare(*s, st, s->default_grid(st.grid_step));
        const std::string name = "fig6_compare_lambda" + num_text(s->spec.lambda()) + ".csv";
        put(c.table, name);
        const auto vh = column(c.table, 1), vr = column(c.table, 2), vd = column(c.table, 3);
        double max_reg = 0, max_disc = 0;
        for (std::size_t i = 0; i < vh.size(); ++i) {
            max_reg = std::max(max_reg, (vr[i] - vh[i]) / std::abs(vh[i]));
            max_disc = std::max(max_disc, (vd[i] - vh[i]) / std::abs(vh[i]));
        }
        savings[num_text(s->spec.lambda())] = {{"dominated", c.dominated},
                                               {"max_relative_gap_pure_regular", max_reg},
                                               {"max_relative_gap_pure_discounted", max_disc},
                                               {"a_dagger", c.a_dagger},
                                               {"b_dagger", c.b_dagger}};
        ok = ok && c.dominated;
    }
    summary["savings"] = savings;
    summary["pass"] = ok;
    std::ofstream(dir / "summary.json") << summary.dump(2) << "\n";
    std::cout << "wrote " << (dir / "summary.json").string() << "\n";
    return ok ? 0 : 2;
}

}  // namespace levy_restock::cli
