#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "levy_restock/sim.hpp"
#include "levy_restock/solver.hpp"

namespace levy_restock::cli {

// Where a simulation starts: a solved barrier plus an offset, or a number.
struct StartPoint {
    enum class Anchor { absolute, a_star, b_star, midpoint } anchor = Anchor::midpoint;
    double offset = 0.0;
    std::string text() const;
};

enum class SimPolicyKind { hybrid, pure_discounted, pure_regular };

struct SimSection {
    SimConfig cfg;
    StartPoint start;
    SimPolicyKind policy = SimPolicyKind::hybrid;
    std::size_t pilot_paths = 2000;
    double a_far_gap = 60.0;  // pure discounted: reflect this far below b
};

struct Grid {
    double lo, hi;
    std::size_t n;
    std::vector<double> points() const;
};

// Optional knobs of the figure commands; unset ones get defaults from the
// solved barriers.
struct StudySection {
    std::vector<double> b_offsets{-0.2, 0.2, 0.4};
    std::vector<double> a_offsets{-0.2, -0.1, 0.1, 0.2};
    std::vector<double> gamma_a_offsets{-0.01, -0.005, 0.0, 0.005, 0.01};
    std::vector<double> kc_list{10, 6, 4, 3, 2.5, 2.1};
    std::optional<double> x_ref;
    std::optional<double> compare_C;  // unit price of the pure regular policy; K_c when unset
    double grid_step = 0.05;          // default x grid [a* - 3, b* + 5]
};

struct RunConfig {
    LevyModel model{1.0, 1.0};
    CostSpec costs{0.05, 1.0, 2.0, 1.0, {{0.0, {0.0, 0.0, 1.0}}}};
    SolverOptions solver;
    SimSection sim;
    StudySection study;
    std::string out_path;  // empty: stdout
    enum class Format { csv, json } format = Format::csv;
};

// Throws ConfigError with the offending key in the message.
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::string& path);

// "lo:hi:n"
Grid parse_grid(const std::string& s);
StartPoint parse_start(const std::string& s);

}  // namespace levy_restock::cli
