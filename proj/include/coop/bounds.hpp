#pragma once

#include "coop/centralized.hpp"
#include "coop/config.hpp"
#include "coop/decentralized.hpp"
#include "coop/rational.hpp"

#include <cstdio>
#include <optional>
#include <string>
#include <vector>

namespace coop {

struct BoundReport {
    Rational half;  // (1/2)(1 - M/N)
    Rational cut;   // max_s (s - K M / floor(N/s))
    Rational coop;  // max_s (s - s M / floor(N/s)) / (1 + alpha_max)
    Rational T_lower;
};

inline BoundReport lower_bound(int N, int K, const Rational& M, int alpha_max) {
    BoundReport b;
    b.half = (1 - M / N) / 2;
    for (int s = 1; s <= K; ++s) {
        int f = N / s;
        Rational a = s - K * M / f;
        Rational c = (s - s * M / f) / (1 + alpha_max);
        if (s == 1 || a > b.cut) b.cut = a;
        if (s == 1 || c > b.coop) b.coop = c;
    }
    b.T_lower = std::max({b.half, b.cut, b.coop});
    return b;
}

inline BoundReport lower_bound(const SystemConfig& c) { return lower_bound(c.N, c.K, c.M, c.alpha_max); }

// upper / lower, with 0/0 counted as 1 and x/0 as "no finite ratio".
inline std::optional<Rational> gap_ratio(const Rational& upper, const Rational& lower) {
    if (lower == 0) {
        if (upper == 0) return Rational(1);
        return std::nullopt;
    }
    return upper / lower;
}

struct GapPoint {
    int N = 0, K = 0, alpha_max = 0;
    Rational M;
    Rational ratio;
    std::string str() const {
        return "N=" + std::to_string(N) + " K=" + std::to_string(K) + " alpha_max=" + std::to_string(alpha_max) +
               " M=" + to_string(M) + " ratio=" + ratio_text();
    }
    // Exact when short, otherwise a decimal.
    std::string ratio_text() const {
        std::string exact = to_string(ratio);
        if (exact.size() <= 12) return exact;
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.9g", to_double(ratio));
        return buf;
    }
};

struct CentralGapResult {
    std::size_t points = 0;
    GapPoint worst;
    GapPoint worst_high_t;  // t >= K-1
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

inline CentralGapResult verify_gap_centralized(int K_min, int K_max, int N_factor, const Rational& bound,
                                               const Rational& bound_high_t) {
    CentralGapResult res;
    for (int K = K_min; K <= K_max; ++K)
        for (int N = K; N <= N_factor * K; ++N)
            for (int am = 1; am <= K / 2; ++am)
                for (int t = 1; t <= K; ++t) {
                    Rational M = Rational(t * N, K);
                    int a = choose_alpha(K, t, am);
                    Rational up = centralized_rate(K, t, a);
                    Rational lo = lower_bound(N, K, M, am).T_lower;
                    auto r = gap_ratio(up, lo);
                    GapPoint pt{N, K, am, M, r ? *r : Rational(0)};
                    ++res.points;
                    if (!r) {
                        res.violations.push_back("zero lower bound with positive delay at " + pt.str());
                        continue;
                    }
                    if (res.points == 1 || *r > res.worst.ratio) res.worst = pt;
                    if (t >= K - 1 && *r > res.worst_high_t.ratio) res.worst_high_t = pt;
                    if (*r > bound) res.violations.push_back("ratio above " + to_string(bound) + " at " + pt.str());
                    if (t >= K - 1 && *r > bound_high_t)
                        res.violations.push_back("ratio above " + to_string(bound_high_t) + " at " + pt.str());
                }
    return res;
}

enum class DecBranch { Shared, FlexBelow, FlexAbove, MidBelow, MidAbove };

inline const char* branch_name(DecBranch b) {
    switch (b) {
        case DecBranch::Shared: return "alpha_max=1";
        case DecBranch::FlexBelow: return "alpha_max=floor(K/2), p<p_th";
        case DecBranch::FlexAbove: return "alpha_max=floor(K/2), p>=p_th";
        case DecBranch::MidBelow: return "1<alpha_max<floor(K/2), p<p_th";
        case DecBranch::MidAbove: return "1<alpha_max<floor(K/2), p>=p_th";
    }
    return "?";
}

// 2K (2K/(2K+1))^(K-1)
inline Rational small_memory_term(int K) { return 2 * K * rpow(Rational(2 * K, 2 * K + 1), K - 1); }

struct DecGapResult {
    std::size_t points = 0;
    std::vector<std::pair<DecBranch, GapPoint>> worst;  // one entry per branch seen
    std::vector<std::string> violations;
    std::vector<std::string> flags;  // middle branch below p_th: reported only
    bool ok() const { return violations.empty(); }
};

inline DecGapResult verify_gap_decentralized(int K_min, int K_max, const std::vector<int>& N_factors, int p_steps) {
    DecGapResult res;
    auto record = [&](DecBranch b, const GapPoint& pt) {
        for (auto& w : res.worst)
            if (w.first == b) {
                if (pt.ratio > w.second.ratio) w.second = pt;
                return;
            }
        res.worst.push_back({b, pt});
    };
    for (int K = K_min; K <= K_max; ++K)
        for (int fac : N_factors) {
            int N = fac * K;
            for (int i = 1; i < p_steps; ++i) {
                Rational p(i, p_steps);
                Rational M = p * N;
                bool below = below_threshold(K, p);
                for (int am = 1; am <= K / 2; ++am) {
                    Rational up = decentralized_formula(rate_components(K, p, am));
                    Rational lo = lower_bound(N, K, M, am).T_lower;
                    auto r = gap_ratio(up, lo);
                    GapPoint pt{N, K, am, M, r ? *r : Rational(0)};
                    ++res.points;
                    if (!r) {
                        res.violations.push_back("zero lower bound with positive delay at " + pt.str());
                        continue;
                    }
                    auto check = [&](DecBranch b, const Rational& bound, bool hard) {
                        record(b, pt);
                        if (*r <= bound) return;
                        std::string msg = std::string(branch_name(b)) + ": ratio above " + to_string(bound) +
                                          " at " + pt.str();
                        (hard ? res.violations : res.flags).push_back(msg);
                    };
                    if (am == 1) check(DecBranch::Shared, 24, true);
                    if (am == K / 2) {
                        if (below)
                            check(DecBranch::FlexBelow, std::max(Rational(6), small_memory_term(K)), true);
                        else
                            check(DecBranch::FlexAbove, 6, true);
                    }
                    if (am > 1 && am < K / 2) {
                        if (below)
                            check(DecBranch::MidBelow, std::min(Rational(12 * (1 + am)), small_memory_term(K)), false);
                        else
                            check(DecBranch::MidAbove, 77, true);
                    }
                }
            }
        }
    return res;
}

struct ThresholdResult {
    std::vector<Interval> p_th;  // index K - K_min
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

// p_th strictly decreasing in K and R_u >= R_empty above it.
inline ThresholdResult verify_threshold(int K_min, int K_max) {
    ThresholdResult res;
    for (int K = K_min; K <= K_max; ++K) res.p_th.push_back(p_threshold(K));
    for (std::size_t i = 1; i < res.p_th.size(); ++i)
        if (!(res.p_th[i].hi < res.p_th[i - 1].lo))
            res.violations.push_back("p_th not decreasing at K=" + std::to_string(K_min + static_cast<int>(i)));
    return res;
}

struct RuBoundResult {
    std::size_t points = 0;
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

inline RuBoundResult verify_ru_bound(int K_min, int K_max, int p_steps) {
    RuBoundResult res;
    for (int K = K_min; K <= K_max; ++K)
        for (int i = 1; i < p_steps; ++i) {
            Rational p(i, p_steps);
            Components any = rate_components(K, p, 1);
            if (!(*bound_shared(K, p) < 4 * any.R_s))
                res.violations.push_back("shared bound not below 4 R_s at K=" + std::to_string(K) + " p=" + to_string(p));
            for (int am = 1; am <= K / 2; ++am) {
                ++res.points;
                Rational Ru = rate_components(K, p, am).R_u;
                auto b = ru_upper_bound(K, p, am);
                if (b.value && Ru > *b.value)
                    res.violations.push_back(std::string(bound_name(b.kind)) + " bound below R_u at K=" +
                                             std::to_string(K) + " alpha_max=" + std::to_string(am) +
                                             " p=" + to_string(p));
            }
        }
    return res;
}

// R_u >= R_empty on the grid points with p >= p_th.
inline std::vector<std::string> verify_threshold_load(int K_min, int K_max, int p_steps) {
    std::vector<std::string> bad;
    for (int K = K_min; K <= K_max; ++K)
        for (int i = 1; i <= p_steps; ++i) {
            Rational p(i, p_steps);
            if (below_threshold(K, p)) continue;
            for (int am = 1; am <= K / 2; ++am) {
                auto c = rate_components(K, p, am);
                if (c.R_u < c.R_empty)
                    bad.push_back("R_u < R_empty at K=" + std::to_string(K) + " alpha_max=" + std::to_string(am) +
                                  " p=" + to_string(p));
            }
        }
    return bad;
}

}  // namespace coop
