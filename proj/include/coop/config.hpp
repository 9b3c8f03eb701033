#pragma once

#include "coop/rational.hpp"

#include <optional>
#include <stdexcept>
#include <string>

namespace coop {

struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct SystemConfig {
    int N = 1;
    int K = 2;
    Rational M = 0;
    int alpha_max = 1;
    long long F = 1;

    Rational t() const { return Rational(K) * M / N; }
    Rational p() const { return M / N; }
    bool integer_t() const { return is_integer(t()); }
    int t_int() const {
        if (!integer_t()) throw std::domain_error("t = KM/N is not an integer");
        return static_cast<int>(to_ll(num(t())));
    }

    void validate() const {
        if (K < 2) throw ConfigError("K must be at least 2");
        if (K > 32) throw ConfigError("K above 32 is not supported");
        if (N < K) throw ConfigError("need K <= N");
        if (M < 0 || M > N) throw ConfigError("need 0 <= M <= N");
        if (alpha_max < 1 || alpha_max > K / 2) throw ConfigError("need 1 <= alpha_max <= floor(K/2)");
        if (F < 1) throw ConfigError("F must be positive");
    }

    std::string str() const {
        return "N=" + std::to_string(N) + " K=" + std::to_string(K) + " M=" + to_string(M) +
               " alpha_max=" + std::to_string(alpha_max);
    }
};

inline SystemConfig make_config(int N, int K, Rational M, int alpha_max, long long F = 1) {
    SystemConfig c{N, K, std::move(M), alpha_max, F};
    c.validate();
    return c;
}

// Exact rates of one operating point. Fields that do not apply stay empty.
struct RateReport {
    Rational R1 = 0;
    Rational R2 = 0;
    Rational T = 0;
    Rational lambda = 0;
    std::optional<Rational> lambda2;
    std::optional<Rational> R_empty;
    std::optional<Rational> R_s;
    std::optional<Rational> R_u;
    int alpha = 0;
};

}  // namespace coop
