#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "levy_restock/model.hpp"
#include "levy_restock/policy_cost.hpp"

namespace levy_restock {

// Barriers for the simulated policy; -inf disables a control.
struct SimPolicy {
    double a = -INFINITY;  // reflect at a
    double b = -INFINITY;  // lift to b at observation times

    static SimPolicy hybrid(double a, double b) { return {a, b}; }
    static SimPolicy pure_discounted(double b, double a_far) { return {a_far, b}; }
    static SimPolicy pure_regular(double a, double eps = 1e-4) { return {a, a + eps}; }
    static SimPolicy uncontrolled() { return {}; }
};

struct SimConfig {
    double dt = 1e-3;
    double horizon = 200.0;
    std::size_t n_paths = 20000;
    std::uint64_t seed = 1;
    double x0 = 0.0;
    SimPolicy policy;
    // Resolution of the Brownian increments. 0 means dt. Runs that share seed
    // and noise_dt see the same Brownian path whatever their dt, which is
    // how dt refinement is compared under common random numbers.
    double noise_dt = 0.0;

    // Throws ConfigError on dt <= 0, horizon <= 0, n_paths == 0, a > b,
    // or dt not a whole multiple of noise_dt.
    void validate() const;
    // e^{-q horizon}: relative weight of the cost left out after the horizon
    double truncation_weight(double q) const { return std::exp(-q * horizon); }
};

struct PathRecord {
    double discounted_holding = 0;
    double discounted_rc = 0;
    double discounted_rp = 0;
    double terminal_level = 0;
};

struct TracePoint {
    double t, y, rc_cum, rp_cum;
};

// One path of the controlled process. Identical (cfg, path_index) give
// identical records bit for bit. With trace non-null, appends a point at
// every event (jump, observation) and every trace_stride steps.
PathRecord simulate_path(const LevyModel& m, const CostSpec& spec, const SimConfig& cfg, std::size_t path_index,
                         std::vector<TracePoint>* trace = nullptr, std::size_t trace_stride = 1000);

struct Estimate {
    double mean = 0;
    double se = 0;  // standard error
};

struct McValue {
    Estimate total, holding, rc, rp;  // total = holding + K_c rc + K_p rp
    std::size_t n = 0;
};

// Paths run in parallel; the result does not depend on the thread count.
McValue mc_value(const LevyModel& m, const CostSpec& spec, const SimConfig& cfg);

// Paired difference mc(cfg at dt) - mc(cfg at dt/2) under common noise.
struct RefinementStep {
    double dt;
    Estimate total, holding, rc, rp;  // differences
};
RefinementStep refinement_difference(const LevyModel& m, const CostSpec& spec, SimConfig cfg);

// Bias allowance for comparing mc_value against an exact cost. The
// discretisation part extrapolates one dt-halving step on pilot_paths paths
// under an O(sqrt(dt)) leading term: e(dt) = d / (1 - 2^{-1/2}) with d the
// paired difference, inflated by two of its standard errors. The truncation
// part is e^{-q horizon} E[v(Y_T)]; allowance() bounds E[v(Y_T)] by 1.5 |v(x0)|,
// which holds for starting points inside the band the process settles in.
struct BiasBudget {
    double total = 0, holding = 0, rc = 0, rp = 0;
    double truncation_weight = 0;
    double allowance(double discretisation, double analytic) const
    {
        return discretisation + 1.5 * truncation_weight * std::abs(analytic);
    }
};
BiasBudget estimate_bias(const LevyModel& m, const CostSpec& spec, const SimConfig& cfg,
                         std::size_t pilot_paths = 2000);

}  // namespace levy_restock
