#pragma once

#include <optional>
#include <string>
#include <vector>

#include "config.hpp"

namespace levy_restock::cli {

struct Flags {
    std::string config_path;
    std::string out;  // empty: output.path from the config, then stdout
    std::optional<std::uint64_t> seed;
    std::optional<Grid> x_grid;
};

// A CSV-shaped result; cells are numbers or strings.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<nlohmann::json>> rows;
};

// Each returns the process exit code: 0 pass, 2 when a check of the command fails.
int cmd_solve(const RunConfig& rc, const Flags& fl);
int cmd_gamma_scan(const RunConfig& rc, const Flags& fl);
int cmd_value(const RunConfig& rc, const Flags& fl);
int cmd_sweep_kc(const RunConfig& rc, const Flags& fl);
int cmd_compare(const RunConfig& rc, const Flags& fl);
int cmd_simulate(const RunConfig& rc, const Flags& fl);
int cmd_verify(const RunConfig& rc, const Flags& fl);
// --out is a directory; writes every figure CSV and summary.json
int cmd_reproduce(const RunConfig& rc, const Flags& fl);

void write_csv(const Table& t, std::ostream& os);

}  // namespace levy_restock::cli
