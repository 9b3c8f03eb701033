#pragma once

#include "coop/coop.hpp"

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace coopcli {

using coop::Rational;

enum class Scheme { Centralized, Decentralized, Bounds };

struct SweepSpec {
    Scheme scheme = Scheme::Centralized;
    int N = 20;
    int K = 10;
    int alpha_max = 5;
    bool grid_is_p = false;         // grid values are p instead of M
    std::vector<Rational> grid;     // M values, or p values when grid_is_p
    int threads = 0;                // 0 = hardware concurrency
};

// One sweep point. Empty optionals are written as empty fields; `inf` marks
// an unbounded value.
struct Row {
    std::string scheme;
    int N = 0, K = 0, alpha_max = 0;
    Rational M, p;
    std::optional<Rational> T_upper, T_lower, lambda, G_c, G_p, R1, R2, R_empty, R_s, R_u, T_no_coop,
        T_no_server, LB_half, LB_cut, LB_coop;
    std::optional<int> alpha;
    bool no_server_infinite = false;
    bool gain_limit = false;
};

Row evaluate_point(Scheme scheme, const coop::SystemConfig& cfg);
std::vector<Row> sweep_rows(const SweepSpec& spec);

std::vector<std::string> csv_header();
void write_csv(std::ostream& os, const std::vector<Row>& rows);
void write_json(std::ostream& os, const std::vector<Row>& rows);

// "a:b:step" (inclusive) or a comma-separated list; entries are rationals.
std::vector<Rational> parse_grid(const std::string& text);

std::string decimal(const Rational& r);

// Full command-line entry point; returns the process exit code
// (0 ok, 1 verification or decode failure, 2 usage error).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace coopcli
