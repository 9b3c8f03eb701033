#include "coop/coop.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace coop;

namespace {

// Closed form of the delay at integer t, written out independently of the library.
double delay_oracle(int K, int t, int alpha) {
    int m = std::min(K / alpha - 1, t);
    return double(K - t) / double(1 + t + alpha * m);
}

int argmin_oracle(int K, int t, int alpha_max) {
    int best = 1;
    for (int a = 2; a <= alpha_max; ++a)
        if (delay_oracle(K, t, a) < delay_oracle(K, t, best) - 1e-12) best = a;
    return best;
}

}  // namespace

TEST(CentralizedRate, ChooseAlphaExamples) {
    EXPECT_EQ(choose_alpha(10, 4, 5), 2);  // N=100, K=10, M=40
    auto c = make_config(20, 10, 4, 5);
    EXPECT_EQ(choose_alpha(c), 3);
    EXPECT_EQ(centralized_delay(c).T, make_rational(8, 9));
    for (int K = 2; K <= 12; ++K) EXPECT_EQ(choose_alpha(K, K - 1, K / 2), 1);
}

TEST(CentralizedRate, MatchesOracleEverywhere) {
    for (int K = 2; K <= 16; ++K)
        for (int t = 0; t <= K; ++t)
            for (int am = 1; am <= K / 2; ++am) {
                int a = choose_alpha(K, t, am);
                EXPECT_EQ(a, argmin_oracle(K, t, am)) << K << " " << t << " " << am;
                EXPECT_NEAR(to_double(centralized_rate(K, t, a)), delay_oracle(K, t, a), 1e-12);
            }
}

TEST(CentralizedRate, Trivial) {
    EXPECT_EQ(centralized_delay(make_config(10, 10, 10, 5)).T, 0);
    EXPECT_EQ(centralized_delay(make_config(20, 10, 0, 5)).T, 10);
    // t >= K-1 and alpha = 1
    EXPECT_EQ(centralized_delay(make_config(10, 10, 9, 5)).T, make_rational(1, 19));
}

TEST(CentralizedRate, RatesBalanceAtIntegerT) {
    for (int K = 2; K <= 12; ++K)
        for (int t = 1; t < K; ++t)
            for (int a = 1; a <= K / 2; ++a) {
                auto c = make_config(K, K, t, K / 2);
                auto r = centralized_rates(c, a);
                EXPECT_EQ(r.R1, r.R2);
                EXPECT_EQ(r.T, centralized_rate(K, t, a));
            }
}

TEST(CentralizedRate, ZeroMemoryHasNoUserLoad) {
    auto r = centralized_rates(make_config(6, 6, 0, 3), 2);
    EXPECT_EQ(r.R1, 6);
    EXPECT_EQ(r.R2, 0);
    EXPECT_EQ(r.T, 6);
}

TEST(CentralizedRate, ExplicitShareWorkedExample) {
    auto c = make_config(6, 6, 4, 3);
    auto r = centralized_rates(c, 2, make_rational(1, 3));
    EXPECT_EQ(r.R1, make_rational(2, 15));
    EXPECT_EQ(r.R2, make_rational(1, 3));
    EXPECT_EQ(r.T, make_rational(1, 3));
    // the balancing share does better
    EXPECT_EQ(centralized_rates(c, 2).T, make_rational(2, 9));
}

TEST(SplitPlanTest, WorkedExample) {
    auto p = make_split_plan(6, 4, 2, make_rational(1, 3));
    EXPECT_EQ(p.m, 2);
    EXPECT_EQ(p.L1, 2);
    EXPECT_EQ(p.lambda, make_rational(1, 3));
    EXPECT_EQ(make_split_plan(6, 4, 2).lambda, make_rational(5, 9));
    EXPECT_THROW(make_split_plan(6, 4, 2, Rational(2)), std::domain_error);
    EXPECT_THROW(make_split_plan(6, 4, 4), std::domain_error);
}

TEST(SplitPlanTest, LambdaBranches) {
    for (int K = 2; K <= 12; ++K) EXPECT_EQ(make_split_plan(K, K - 1, 1).lambda, Rational(K, 2 * K - 1));
    for (int K = 4; K <= 12; ++K)
        for (int a = 1; a <= K / 2; ++a)
            for (int t = 1; t <= K / a - 1; ++t)
                EXPECT_EQ(make_split_plan(K, t, a).lambda, Rational(1 + t, a * t + 1 + t));
}

TEST(SplitPlanTest, L1IsMinimal) {
    for (int K = 2; K <= 12; ++K)
        for (int t = 1; t < K; ++t)
            for (int a = 1; a <= K / 2; ++a) {
                auto p = make_split_plan(K, t, a);
                long long d = static_cast<long long>(a) * p.m;
                long long oracle = 1;
                while ((binom(K - 1, t) * K * oracle) % d != 0) ++oracle;
                EXPECT_EQ(p.L1, oracle) << K << " " << t << " " << a;
            }
}

TEST(AlphaStar, Branches) {
    EXPECT_EQ(alpha_star_piecewise(10, 9, 5), 1);
    EXPECT_EQ(alpha_star_piecewise(10, 1, 5), 5);
    EXPECT_EQ(alpha_star_piecewise(10, 4, 5), 2);
    EXPECT_EQ(*alpha_star_text_variant(10, 4, 5), make_rational(10, 3));
    EXPECT_EQ(*alpha_star_text_variant(10, 1, 5), 5);  // t = 1 always falls in the alpha_max branch
}

TEST(AlphaStar, ArgminNeverWorse) {
    for (int K = 2; K <= 20; ++K)
        for (int am = 1; am <= K / 2; ++am)
            for (int t = 1; t <= K; ++t) {
                Rational best = centralized_rate(K, t, choose_alpha(K, t, am));
                Rational star = alpha_star_piecewise(K, t, am);
                for (BigInt v : {floor_of(star), ceil_of(star)}) {
                    int a = std::clamp(static_cast<int>(to_ll(v)), 1, am);
                    EXPECT_LE(best, centralized_rate(K, t, a));
                }
            }
}

TEST(Envelope, NonIntegerT) {
    for (int K = 3; K <= 10; ++K)
        for (int am = 1; am <= K / 2; ++am) {
            auto pts = centralized_points(K, am);
            for (int i = 0; i < K; ++i)
                for (int q = 1; q <= 3; ++q) {
                    Rational t = i + Rational(q, 4);
                    Rational v = convex_envelope(pts, t);
                    Rational chord = pts[i] + (pts[i + 1] - pts[i]) * Rational(q, 4);
                    EXPECT_LE(v, chord);
                    EXPECT_GE(v, 0);
                }
            // convexity on a quarter grid
            std::vector<Rational> f;
            for (int j = 0; j <= 4 * K; ++j) f.push_back(convex_envelope(pts, Rational(j, 4)));
            for (std::size_t j = 1; j + 1 < f.size(); ++j) EXPECT_GE(f[j - 1] + f[j + 1], 2 * f[j]);
        }
    EXPECT_THROW(convex_envelope(centralized_points(4, 2), Rational(5)), std::domain_error);
}

TEST(Envelope, DelayAtFractionalMemory) {
    auto c = make_config(20, 10, 3, 5);  // t = 3/2
    auto lo = centralized_delay(make_config(20, 10, 2, 5)).T;
    auto hi = centralized_delay(make_config(20, 10, 4, 5)).T;
    EXPECT_LE(centralized_delay(c).T, (lo + hi) / 2);
}

TEST(Gains, MatchDelayRatios) {
    for (int K = 2; K <= 12; ++K)
        for (int t = 1; t < K; ++t)
            for (int a = 1; a <= K / 2; ++a) {
                auto g = centralized_gains(K, t, a);
                Rational T = centralized_rate(K, t, a);
                EXPECT_EQ(g.G_c, T / Rational(K - t, 1 + t));
                EXPECT_EQ(g.G_p, T / Rational(K - t, t));
            }
    EXPECT_EQ(centralized_gains(10, 9, 1).G_c, make_rational(10, 19));
    EXPECT_THROW(centralized_gains(10, 0, 1), std::domain_error);
}

TEST(Baselines, Values) {
    auto c = make_config(20, 10, 4, 5);
    EXPECT_EQ(baseline_no_cooperation(c), make_rational(8, 3));
    EXPECT_EQ(*baseline_no_server(c), Rational(4));
    EXPECT_FALSE(baseline_no_server(make_config(20, 10, 0, 5)).has_value());
}

TEST(ServerSchedule, Shape) {
    auto s = build_server_schedule(6, 4);
    ASSERT_EQ(s.size(), 6u);
    for (auto& x : s) {
        EXPECT_EQ(x.sender, 0);
        EXPECT_EQ(x.pieces.size(), 5u);
    }
    EXPECT_EQ(build_server_schedule(4, 2).size(), 4u);
    EXPECT_TRUE(build_server_schedule(4, 4).empty());
}

TEST(UserSchedule, WorkedExampleShape) {
    auto c = make_config(6, 6, 4, 3);
    auto run = build_centralized_schedule(c, 2, identity_demands(6), make_rational(1, 3));
    EXPECT_EQ(run.schedule.user_symbol_count(), 30u);
    EXPECT_EQ(pico_count_of(run.schedule), 2);
    for (auto& sl : run.schedule.user_slots) {
        EXPECT_LE(sl.groups.size(), 2u);
        for (auto& g : sl.groups)
            for (auto& x : g.symbols) EXPECT_EQ(x.pieces.size(), 2u);
    }
    EXPECT_EQ(check_schedule(run.schedule, 2), "");
    auto loads = measure_fluid(run.schedule);
    EXPECT_EQ(loads.server, make_rational(2, 15));
    EXPECT_EQ(loads.user, make_rational(1, 3));
    EXPECT_EQ(centralized_required_F(c, 2, make_rational(1, 3)), 45);
}

TEST(UserSchedule, FluidMatchesClosedForm) {
    for (int K = 2; K <= 7; ++K)
        for (int t = 0; t <= K; ++t)
            for (int a = 1; a <= K / 2; ++a) {
                auto c = make_config(K, K, t, K / 2);
                auto run = build_centralized_schedule(c, a, identity_demands(K));
                EXPECT_EQ(check_schedule(run.schedule, a), "") << K << " " << t << " " << a;
                auto loads = measure_fluid(run.schedule);
                Rational T = Rational(K - t, 1 + t + a * multicast_size(K, a, t));
                EXPECT_EQ(loads.T(), T) << K << " " << t << " " << a;
            }
}

TEST(UserSchedule, StubbornConfigsStillSchedule) {
    for (auto [K, t, a] : {std::tuple{7, 1, 3}, {8, 1, 2}, {8, 2, 2}}) {
        auto c = make_config(K, K, t, K / 2);
        auto run = build_centralized_schedule(c, a, identity_demands(K));
        EXPECT_EQ(check_schedule(run.schedule, a), "");
        EXPECT_EQ(measure_fluid(run.schedule).T(), centralized_rate(K, t, a));
    }
}
