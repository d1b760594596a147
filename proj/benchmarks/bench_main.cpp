#include <benchmark/benchmark.h>

#include "levy_restock/pure_policies.hpp"
#include "levy_restock/sim.hpp"
#include "levy_restock/solver.hpp"

using namespace levy_restock;

namespace {

LevyModel model() { return LevyModel(1.0, 1.0, {{0.2, 1.0}}); }
CostSpec spec(double lambda) { return CostSpec(0.05, lambda, 10.0, 2.0, {{0.0, {0.0, 0.0, 1.0}}}); }

void BM_KernelSet(benchmark::State& st)
{
    const LevyModel m = model();
    for (auto _ : st) benchmark::DoNotOptimize(KernelSet(m, 0.05, 2.0));
}
BENCHMARK(BM_KernelSet)->Unit(benchmark::kMicrosecond);

void BM_Solve(benchmark::State& st)
{
    const double lambda = static_cast<double>(st.range(0)) / 10.0;
    const CostSpec s = spec(lambda);
    const KernelSet ks(model(), s.q(), s.lambda());
    for (auto _ : st) benchmark::DoNotOptimize(solve_barriers(s, ks));
}
// lambda = 0.2, 2 (double precision) and 12 (extended precision)
BENCHMARK(BM_Solve)->Arg(2)->Arg(20)->Arg(120)->Unit(benchmark::kMillisecond);

void BM_PolicyCostEval(benchmark::State& st)
{
    const CostSpec s = spec(2.0);
    const KernelSet ks(model(), s.q(), s.lambda());
    const PolicySolution sol = solve_barriers(s, ks);
    const PolicyCost v = solution_cost(s, ks, sol);
    double x = sol.a_star - 3.0;
    for (auto _ : st) {
        benchmark::DoNotOptimize(v(x));
        x = x > sol.b_star + 5.0 ? sol.a_star - 3.0 : x + 0.05;
    }
}
BENCHMARK(BM_PolicyCostEval);

void BM_PureRegularBarrier(benchmark::State& st)
{
    const CostSpec s = spec(2.0);
    const KernelSet ks(model(), s.q(), s.lambda());
    for (auto _ : st) benchmark::DoNotOptimize(pure_regular_barrier(s, ks, s.K_c()));
}
BENCHMARK(BM_PureRegularBarrier)->Unit(benchmark::kMicrosecond);

// Cost per simulated time step of one path.
void BM_SimulatePath(benchmark::State& st)
{
    const LevyModel m = model();
    const CostSpec s = spec(2.0);
    const KernelSet ks(m, s.q(), s.lambda());
    const PolicySolution sol = solve_barriers(s, ks);
    SimConfig c;
    c.dt = 1e-3;
    c.horizon = 20.0;
    c.x0 = 0.5 * (sol.a_star + sol.b_star);
    c.policy = SimPolicy::hybrid(sol.a_star, sol.b_star);
    std::uint64_t i = 0;
    for (auto _ : st) benchmark::DoNotOptimize(simulate_path(m, s, c, i++));
    st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(c.horizon / c.dt));
}
BENCHMARK(BM_SimulatePath)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
