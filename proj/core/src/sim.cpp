#include "levy_restock/sim.hpp"

#include <boost/random/exponential_distribution.hpp>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_01.hpp>

#include <algorithm>
#include <random>

#include "levy_restock/errors.hpp"
#include "levy_restock/parallel.hpp"

namespace levy_restock {

namespace {

enum Stream : std::uint32_t { kDiffusion = 0, kJumps = 1, kObservations = 2, kBridge = 3 };

std::mt19937_64 stream(std::uint64_t seed, std::size_t path, Stream id)
{
    const std::uint64_t p = path;
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(p), static_cast<std::uint32_t>(p >> 32),
                      static_cast<std::uint32_t>(id)};
    return std::mt19937_64(seq);
}

// f from its polynomial pieces, without the PolyExp machinery
struct FastF {
    std::vector<double> from;
    std::vector<std::vector<double>> coeffs;

    explicit FastF(const std::vector<FPiece>& pieces)
    {
        for (const auto& p : pieces) {
            from.push_back(p.from);
            coeffs.push_back(p.coeffs);
        }
    }
    double operator()(double x) const
    {
        std::size_t i = 0;
        while (i + 1 < from.size() && x >= from[i + 1]) ++i;
        const auto& c = coeffs[i];
        double s = 0.0;
        for (std::size_t k = c.size(); k-- > 0;) s = s * x + c[k];
        return s;
    }
};

long whole_ratio(double num, double den, const char* what)
{
    const double r = num / den;
    const long n = std::lround(r);
    if (n < 1 || std::abs(r - static_cast<double>(n)) > 1e-9 * r) throw ConfigError(what);
    return n;
}

}  // namespace

void SimConfig::validate() const
{
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("sim: dt must be finite and > 0");
    if (!(horizon > 0.0) || !std::isfinite(horizon)) throw ConfigError("sim: horizon must be finite and > 0");
    if (n_paths == 0) throw ConfigError("sim: n_paths must be >= 1");
    if (policy.a > policy.b) throw ConfigError("sim: policy needs a <= b");
    if (std::isnan(x0) || std::isinf(x0)) throw ConfigError("sim: x0 must be finite");
    whole_ratio(horizon, dt, "sim: horizon must be a whole number of steps dt");
    if (noise_dt != 0.0) {
        if (!(noise_dt > 0.0)) throw ConfigError("sim: noise_dt must be > 0 (or 0 for dt)");
        whole_ratio(dt, noise_dt, "sim: dt must be a whole multiple of noise_dt");
    }
}

PathRecord simulate_path(const LevyModel& m, const CostSpec& spec, const SimConfig& cfg, std::size_t path_index,
                         std::vector<TracePoint>* trace, std::size_t trace_stride)
{
    cfg.validate();
    const FastF f(spec.f_pieces());
    const double q = spec.q(), lam = spec.lambda();
    const double a = cfg.policy.a, b = cfg.policy.b;
    const double delta = m.delta(), sigma = m.sigma();
    const double jump_rate = m.total_jump_rate();
    const double dt = cfg.dt;
    const long n_steps = whole_ratio(cfg.horizon, dt, "sim: horizon must be a whole number of steps dt");
    const double noise_dt = cfg.noise_dt > 0.0 ? cfg.noise_dt : dt;
    const long fine = whole_ratio(dt, noise_dt, "sim: dt must be a whole multiple of noise_dt");
    const double sq_noise = std::sqrt(noise_dt);
    const double step_discount = std::exp(-q * dt);

    auto g_diff = stream(cfg.seed, path_index, kDiffusion);
    auto g_jump = stream(cfg.seed, path_index, kJumps);
    auto g_obs = stream(cfg.seed, path_index, kObservations);
    auto g_bridge = stream(cfg.seed, path_index, kBridge);
    boost::random::normal_distribution<double> normal;
    boost::random::exponential_distribution<double> expo;
    boost::random::uniform_01<double> unif;

    auto next_jump_after = [&](double t) { return jump_rate > 0.0 ? t + expo(g_jump) / jump_rate : INFINITY; };
    auto jump_size = [&] {
        double u = unif(g_jump) * jump_rate;
        const auto& js = m.jumps();
        std::size_t j = 0;
        while (j + 1 < js.size() && u >= js[j].eta) u -= js[j++].eta;
        return expo(g_jump) / js[j].beta;
    };
    double next_jump = next_jump_after(0.0);
    double next_obs = expo(g_obs) / lam;

    PathRecord rec;
    double y = cfg.x0;
    double rc_cum = 0.0, rp_cum = 0.0;  // undiscounted, for traces
    auto reflect = [&](double disc) {
        if (y < a) {
            rec.discounted_rc += disc * (a - y);
            rc_cum += a - y;
            y = a;
        }
    };
    auto record = [&](double t) {
        if (trace) trace->push_back({t, y, rc_cum, rp_cum});
    };

    reflect(1.0);
    record(0.0);
    double d0 = 1.0;  // e^{-q t0} at the step start
    double f_prev = f(y);
    // W on the noise grid inside the current step, relative to its start
    std::vector<double> w_grid(static_cast<std::size_t>(fine) + 1, 0.0);
    for (long k = 0; k < n_steps; ++k) {
        const double t0 = static_cast<double>(k) * dt;
        const double t1 = static_cast<double>(k + 1) * dt;
        const double d1 = d0 * step_discount;
        for (long i = 0; i < fine; ++i) w_grid[i + 1] = w_grid[i] + sq_noise * normal(g_diff);

        double s = t0, ds = d0, ws = 0.0;
        while (std::min(next_jump, next_obs) <= t1) {
            const bool is_jump = next_jump <= next_obs;  // jump first on ties
            const double e = is_jump ? next_jump : next_obs;
            // Brownian bridge across the noise cell holding e, pinned at the
            // last event when it falls in the same cell. Every event takes
            // exactly one bridge draw, so runs on other dt grids see the same W(e).
            const long cell = std::clamp(static_cast<long>(std::floor(e / noise_dt)) - k * fine, 0L, fine - 1);
            const double cell_lo = t0 + static_cast<double>(cell) * noise_dt;
            const double l = std::max(cell_lo, s), r = t0 + static_cast<double>(cell + 1) * noise_dt;
            const double wl = l == s ? ws : w_grid[cell], wr = w_grid[cell + 1];
            const double z = normal(g_bridge);
            const double we = r > l ? wl + (wr - wl) * (e - l) / (r - l) + std::sqrt(std::max(0.0, (e - l) * (r - e) / (r - l))) * z
                                    : wr;
            const double h = e - s;
            const double de = std::exp(-q * e);
            y += delta * h + sigma * (we - ws);
            reflect(de);
            const double f_e = f(y);
            rec.discounted_holding += 0.5 * h * (ds * f_prev + de * f_e);
            if (is_jump) {
                y -= jump_size();
                reflect(de);
                next_jump = next_jump_after(e);
            } else {
                if (y < b) {
                    rec.discounted_rp += de * (b - y);
                    rp_cum += b - y;
                    y = b;
                }
                next_obs = e + expo(g_obs) / lam;
            }
            f_prev = f(y);
            s = e;
            ds = de;
            ws = we;
            record(e);
        }
        const double h = t1 - s;
        y += delta * h + sigma * (w_grid[fine] - ws);
        reflect(d1);
        const double f1 = f(y);
        rec.discounted_holding += 0.5 * h * (ds * f_prev + d1 * f1);
        f_prev = f1;
        d0 = d1;
        if (trace && trace_stride > 0 && (k + 1) % static_cast<long>(trace_stride) == 0) record(t1);
    }
    rec.terminal_level = y;
    return rec;
}

namespace {

Estimate summarize(const std::vector<double>& xs)
{
    const double n = static_cast<double>(xs.size());
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= n;
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    const double var = xs.size() > 1 ? ss / (n - 1.0) : 0.0;
    return {mean, std::sqrt(var / n)};
}

struct Columns {
    std::vector<double> total, holding, rc, rp;
    explicit Columns(std::size_t n) : total(n), holding(n), rc(n), rp(n) {}
    void put(std::size_t i, const CostSpec& spec, const PathRecord& r)
    {
        holding[i] = r.discounted_holding;
        rc[i] = r.discounted_rc;
        rp[i] = r.discounted_rp;
        total[i] = r.discounted_holding + spec.K_c() * r.discounted_rc + spec.K_p() * r.discounted_rp;
    }
};

}  // namespace

McValue mc_value(const LevyModel& m, const CostSpec& spec, const SimConfig& cfg)
{
    cfg.validate();
    Columns c(cfg.n_paths);
    parallel_for(cfg.n_paths, [&](std::size_t i) { c.put(i, spec, simulate_path(m, spec, cfg, i)); });
    McValue v;
    v.n = cfg.n_paths;
    v.total = summarize(c.total);
    v.holding = summarize(c.holding);
    v.rc = summarize(c.rc);
    v.rp = summarize(c.rp);
    return v;
}

RefinementStep refinement_difference(const LevyModel& m, const CostSpec& spec, SimConfig cfg)
{
    cfg.validate();
    if (cfg.noise_dt == 0.0) cfg.noise_dt = cfg.dt / 2.0;
    SimConfig half = cfg;
    half.dt = cfg.dt / 2.0;
    half.validate();
    Columns c(cfg.n_paths);
    parallel_for(cfg.n_paths, [&](std::size_t i) {
        const PathRecord r1 = simulate_path(m, spec, cfg, i);
        const PathRecord r2 = simulate_path(m, spec, half, i);
        c.put(i, spec,
              {r1.discounted_holding - r2.discounted_holding, r1.discounted_rc - r2.discounted_rc,
               r1.discounted_rp - r2.discounted_rp, r1.terminal_level - r2.terminal_level});
    });
    return {cfg.dt, summarize(c.total), summarize(c.holding), summarize(c.rc), summarize(c.rp)};
}

BiasBudget estimate_bias(const LevyModel& m, const CostSpec& spec, const SimConfig& cfg, std::size_t pilot_paths)
{
    SimConfig pilot = cfg;
    pilot.n_paths = pilot_paths;
    pilot.seed = cfg.seed ^ 0x9e3779b97f4a7c15ULL;  // pilot paths independent of the main run
    pilot.noise_dt = 0.0;
    const RefinementStep d = refinement_difference(m, spec, pilot);
    const double k = 1.0 / (1.0 - std::sqrt(0.5));
    auto ext = [&](const Estimate& e) { return k * (std::abs(e.mean) + 2.0 * e.se); };
    BiasBudget out;
    out.total = ext(d.total);
    out.holding = ext(d.holding);
    out.rc = ext(d.rc);
    out.rp = ext(d.rp);
    out.truncation_weight = cfg.truncation_weight(spec.q());
    return out;
}

}  // namespace levy_restock
