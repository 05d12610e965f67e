#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace lagtori {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode { exit_pass = 0, exit_check_fail = 1, exit_usage = 2 };

struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct RunConfig {
    std::string subcommand;

    std::optional<double> tol;  // overrides every check tolerance when set
    std::uint64_t seed = 1;
    std::string out;            // primary artifact path; stdout when empty
    bool json = false;

    // energy-homogeneous
    double r1 = 0, r2 = 0, r3 = 0;
    // scan-simplex, solve-tzitzeica, continue-tzitzeica
    int grid = 0;
    // energy-hmk, scan-hmk
    int m = 0, n = 0, k = 0;
    int m_max = 0, n_max = 0, k_min = 0;
    // verify-frames
    std::string family;
    std::vector<double> params;
    int points = 20;
    double h = 1e-3;
    // solve-tzitzeica, continue-tzitzeica
    double L = 0;
    int mode_j = 1, mode_l = 0;
    double eps = 0.3;
    std::string shape = "plane";
    double L_start = 0, L_end = 0;
    int steps = 0;
    std::string out_dir;
    // verify-eigen, verify-nv, flow-nv
    std::string in;
    double dt = 1e-4;
    std::string out_csv;
    std::string scheme = "midpoint";
    int record_every = 100;
};

const std::vector<std::string>& subcommands();

// Throws UsageError naming the first violated constraint.
void validate(const RunConfig& cfg);

// FNV-1a over the canonical key=value listing of the parameters that affect results.
std::uint64_t config_hash(const RunConfig& cfg);
std::string canonical_config(const RunConfig& cfg);
// "# lagtori <version> config=<hash> seed=<seed>"
std::string header_line(const RunConfig& cfg);

// Writes the report to cfg.out (or `out`) and artifacts to their paths; diagnostics go to `err`.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace lagtori
