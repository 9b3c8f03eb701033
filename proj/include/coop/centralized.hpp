#pragma once

#include "coop/combinatorics.hpp"
#include "coop/config.hpp"
#include "coop/maxflow.hpp"
#include "coop/rational.hpp"
#include "coop/schedule.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace coop {

struct SchedulingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Number of pico-files each sender XORs together: min{floor(K/alpha)-1, t}.
inline int multicast_size(int K, int alpha, int t) { return std::min(K / alpha - 1, t); }

// Closed-form delay of the centralized scheme at integer t for a fixed alpha.
inline Rational centralized_rate(int K, int t, int alpha) {
    int m = multicast_size(K, alpha, t);
    return Rational(K - t, 1 + t + alpha * m);
}

inline Rational centralized_lambda(int K, int t, int alpha) {
    int m = multicast_size(K, alpha, t);
    return Rational(1 + t, alpha * m + 1 + t);
}

// Exhaustive argmin over alpha in [1, alpha_max]; ties go to the smallest alpha.
inline int choose_alpha(int K, int t, int alpha_max) {
    int best = 1;
    Rational best_rate = centralized_rate(K, t, 1);
    for (int a = 2; a <= alpha_max; ++a) {
        Rational r = centralized_rate(K, t, a);
        if (r < best_rate) {
            best_rate = r;
            best = a;
        }
    }
    return best;
}

inline int choose_alpha(const SystemConfig& c) { return choose_alpha(c.K, c.t_int(), c.alpha_max); }

// Piecewise analytic alpha*: 1 if t >= K-1, alpha_max if t <= floor(K/alpha_max)-1, else K/(t+1).
inline Rational alpha_star_piecewise(int K, int t, int alpha_max) {
    if (t >= K - 1) return 1;
    if (t <= K / alpha_max - 1) return alpha_max;
    return Rational(K, t + 1);
}

// The same middle branch written as K/(t-1); undefined at t = 1.
inline std::optional<Rational> alpha_star_text_variant(int K, int t, int alpha_max) {
    if (t >= K - 1) return Rational(1);
    if (t <= K / alpha_max - 1) return Rational(alpha_max);
    if (t == 1) return std::nullopt;
    return Rational(K, t - 1);
}

struct SplitPlan {
    Rational lambda;
    long long L1 = 1;
    int alpha = 1;
    int m = 0;
};

// lambda defaults to the balancing value; an explicit share may be given instead.
inline SplitPlan make_split_plan(int K, int t, int alpha, std::optional<Rational> lambda = {}) {
    if (alpha < 1 || alpha > K / 2) throw std::domain_error("alpha out of range");
    if (lambda && (*lambda < 0 || *lambda > 1)) throw std::domain_error("lambda must lie in [0,1]");
    SplitPlan p;
    p.alpha = alpha;
    p.m = multicast_size(K, alpha, t);
    p.lambda = lambda ? *lambda : centralized_lambda(K, t, alpha);
    long long d = static_cast<long long>(alpha) * p.m;
    if (d == 0) {
        p.L1 = 1;
    } else {
        long long numer = to_ll(binom(K - 1, t) * K % d);
        p.L1 = d / std::gcd(numer, d);
    }
    return p;
}

inline SplitPlan make_split_plan(const SystemConfig& c, int alpha, std::optional<Rational> lambda = {}) {
    if (alpha > c.alpha_max) throw std::domain_error("alpha exceeds alpha_max");
    return make_split_plan(c.K, c.t_int(), alpha, std::move(lambda));
}

// Server and user loads for an arbitrary server share lambda at integer t.
// With no user multicast possible (t = 0) the user load is zero.
inline std::pair<Rational, Rational> split_rates(int K, int t, int alpha, const Rational& lambda) {
    int m = multicast_size(K, alpha, t);
    Rational R1 = lambda * Rational(K - t, t + 1);
    Rational R2 = m > 0 ? (1 - lambda) * Rational(K - t, alpha * m) : Rational(0);
    return {R1, R2};
}

// Lower convex envelope of the integer-t points (i, T_i) evaluated at a real t.
inline Rational convex_envelope(const std::vector<Rational>& pts, const Rational& t) {
    const int n = static_cast<int>(pts.size()) - 1;
    if (t < 0 || t > n) throw std::domain_error("t outside the envelope range");
    if (is_integer(t)) {
        // The envelope may still undercut the point itself.
        int ti = static_cast<int>(to_ll(num(t)));
        Rational best = pts[ti];
        for (int i = 0; i < ti; ++i)
            for (int j = ti + 1; j <= n; ++j)
                best = std::min(best, pts[i] + (pts[j] - pts[i]) * Rational(ti - i, j - i));
        return best;
    }
    int lo = static_cast<int>(to_ll(floor_of(t)));
    Rational best;
    bool have = false;
    for (int i = 0; i <= lo; ++i)
        for (int j = lo + 1; j <= n; ++j) {
            Rational v = pts[i] + (pts[j] - pts[i]) * (t - i) / (j - i);
            if (!have || v < best) {
                best = v;
                have = true;
            }
        }
    return best;
}

// Integer-t delays for t = 0..K, each minimized over alpha (or at a fixed alpha).
inline std::vector<Rational> centralized_points(int K, int alpha_max, std::optional<int> fixed_alpha = {}) {
    std::vector<Rational> pts;
    for (int t = 0; t <= K; ++t) {
        int a = fixed_alpha ? *fixed_alpha : choose_alpha(K, t, alpha_max);
        pts.push_back(centralized_rate(K, t, a));
    }
    return pts;
}

// Rates at a fixed alpha. At non-integer t this is the envelope of the fixed-alpha points.
inline RateReport centralized_rates(const SystemConfig& c, int alpha) {
    RateReport r;
    r.alpha = alpha;
    if (c.integer_t()) {
        int t = c.t_int();
        r.lambda = centralized_lambda(c.K, t, alpha);
        std::tie(r.R1, r.R2) = split_rates(c.K, t, alpha, r.lambda);
        r.T = centralized_rate(c.K, t, alpha);
    } else {
        r.T = convex_envelope(centralized_points(c.K, c.alpha_max, alpha), c.t());
        r.R1 = r.R2 = r.T;
    }
    return r;
}

inline RateReport centralized_rates(const SystemConfig& c, int alpha, const Rational& lambda) {
    RateReport r;
    r.alpha = alpha;
    r.lambda = lambda;
    std::tie(r.R1, r.R2) = split_rates(c.K, c.t_int(), alpha, lambda);
    r.T = std::max(r.R1, r.R2);
    return r;
}

// Best achievable delay: argmin alpha at integer t, envelope otherwise.
inline RateReport centralized_delay(const SystemConfig& c) {
    if (c.integer_t()) return centralized_rates(c, choose_alpha(c));
    RateReport r;
    r.alpha = 0;
    r.T = convex_envelope(centralized_points(c.K, c.alpha_max), c.t());
    r.R1 = r.R2 = r.T;
    return r;
}

struct Gains {
    Rational G_c;
    Rational G_p;
};

inline Gains centralized_gains(int K, int t, int alpha) {
    if (t == 0) throw std::domain_error("parallel gain undefined at t = 0");
    int m = multicast_size(K, alpha, t);
    Gains g;
    g.G_c = 1 / (1 + Rational(alpha * m, 1 + t));
    g.G_p = 1 / (1 + Rational(1, t) + Rational(alpha * m, t));
    return g;
}

// Reference curves: server-only coded caching and user-only (D2D) delivery.
inline Rational baseline_no_cooperation(const SystemConfig& c) {
    Rational t = c.t();
    return (c.K - t) / (1 + t);
}

inline std::optional<Rational> baseline_no_server(const SystemConfig& c) {
    if (c.M == 0) return std::nullopt;  // infinite
    return Rational(c.N) / c.M * (1 - c.p());
}

inline std::vector<XorSymbol> build_server_schedule(int K, int t) {
    std::vector<XorSymbol> out;
    if (t + 1 > K) return out;
    for (SubsetId S : enumerate_subsets(K, t + 1)) {
        XorSymbol x;
        x.sender = 0;
        x.receivers = S;
        for (int k : S.members()) x.pieces.push_back({k, S.without(k), Part::Server, 0, 1});
        out.push_back(std::move(x));
    }
    return out;
}

struct UserSchedule {
    std::vector<UserSlot> slots;
    long long pico_count = 0;  // L1 actually used
    std::string strategy;
};

namespace detail {

inline std::uint64_t below(std::mt19937_64& g, std::uint64_t n) { return g() % n; }

inline std::vector<int> slot_sequence(const std::string& strategy, int beta, long long Y) {
    std::vector<int> idx(Y);
    if (strategy == "stride" && Y <= beta) {
        for (long long i = 0; i < Y; ++i) idx[i] = static_cast<int>(i * beta / Y);
        return idx;
    }
    std::vector<int> perm(beta);
    std::iota(perm.begin(), perm.end(), 0);
    if (strategy.rfind("shuffle", 0) == 0) {
        std::mt19937_64 g(std::stoull(strategy.substr(7)));
        for (int i = beta - 1; i > 0; --i) std::swap(perm[i], perm[below(g, i + 1)]);
    }
    for (long long i = 0; i < Y; ++i) idx[i] = perm[i % beta];
    return idx;
}

// Tries to build the user slots for a given pico count L and partition sequence.
inline std::optional<std::vector<UserSlot>> try_user_schedule(int K, int t, int m, long long L,
                                                             const std::vector<GroupPartition>& parts,
                                                             const std::vector<int>& seq) {
    const int c = m + 1;
    std::map<std::uint32_t, long long> app;
    for (int i : seq)
        for (auto g : parts[i].groups) ++app[g.mask];

    struct Item {
        int j;
        SubsetId T;
    };
    std::vector<Item> items;
    for (int j = 1; j <= K; ++j)
        for (SubsetId T : subsets_of(SubsetId::full(K).without(j), t)) items.push_back({j, T});

    std::vector<std::uint32_t> groups;
    for (auto& [g, a] : app) groups.push_back(g);
    const int n_items = static_cast<int>(items.size());
    const int n_groups = static_cast<int>(groups.size());
    // nodes: 0 source, 1 sink, items, (group, member) pairs, groups
    MaxFlow mf(2 + n_items + n_groups * c + n_groups);
    auto item_node = [&](int i) { return 2 + i; };
    auto pair_node = [&](int g, int r) { return 2 + n_items + g * c + r; };
    auto group_node = [&](int g) { return 2 + n_items + n_groups * c + g; };
    std::map<std::uint32_t, int> gindex;
    for (int g = 0; g < n_groups; ++g) gindex[groups[g]] = g;

    for (int g = 0; g < n_groups; ++g) {
        long long a = app[groups[g]];
        for (int r = 0; r < c; ++r) mf.add_edge(pair_node(g, r), group_node(g), a);
        mf.add_edge(group_node(g), 1, (c - 1) * a);
    }
    struct Link {
        int item, g, r, edge;
    };
    std::vector<Link> links;
    for (int i = 0; i < n_items; ++i) {
        mf.add_edge(0, item_node(i), L);
        const auto& it = items[i];
        // candidate groups: C with j in C and C\{j} inside T
        for (SubsetId rest : subsets_of(it.T, c - 1)) {
            SubsetId C = rest.with(it.j);
            auto f = gindex.find(C.mask);
            if (f == gindex.end()) continue;
            auto mem = C.members();
            int r = static_cast<int>(std::find(mem.begin(), mem.end(), it.j) - mem.begin());
            links.push_back({i, f->second, r, mf.add_edge(item_node(i), pair_node(f->second, r), L)});
        }
    }
    long long need = static_cast<long long>(n_items) * L;
    if (mf.run(0, 1) != need) return std::nullopt;

    // Queue of pico-files per (group, member).
    std::vector<std::vector<FragmentRef>> queue(static_cast<std::size_t>(n_groups) * c);
    std::vector<long long> layer(n_items, 0);
    for (auto& lk : links) {
        long long f = mf.flow_on(lk.edge);
        for (long long u = 0; u < f; ++u) {
            queue[lk.g * c + lk.r].push_back(
                {items[lk.item].j, items[lk.item].T, Part::User, static_cast<int>(layer[lk.item]++),
                 static_cast<int>(L)});
        }
    }
    // Senders per group: member r sends (appearances - receptions) times, rotating in ascending order.
    std::vector<std::vector<int>> senders(n_groups);
    for (int g = 0; g < n_groups; ++g) {
        long long a = app[groups[g]];
        std::vector<long long> left(c);
        for (int r = 0; r < c; ++r) left[r] = a - static_cast<long long>(queue[g * c + r].size());
        while (static_cast<long long>(senders[g].size()) < a) {
            for (int r = 0; r < c; ++r)
                if (left[r] > 0) {
                    senders[g].push_back(r);
                    --left[r];
                }
        }
    }
    std::vector<std::size_t> next_sender(n_groups, 0);
    std::vector<std::size_t> next_pico(static_cast<std::size_t>(n_groups) * c, 0);
    std::vector<UserSlot> slots;
    for (int pi : seq) {
        UserSlot slot;
        slot.round = t + 1;
        for (auto G : parts[pi].groups) {
            int g = gindex[G.mask];
            auto mem = G.members();
            int r = senders[g][next_sender[g]++];
            XorSymbol x;
            x.sender = mem[r];
            x.receivers = G.without(mem[r]);
            for (int q = 0; q < c; ++q) {
                if (q == r) continue;
                x.pieces.push_back(queue[g * c + q][next_pico[g * c + q]++]);
            }
            slot.groups.push_back(GroupTx{G, {std::move(x)}});
        }
        slots.push_back(std::move(slot));
    }
    return slots;
}

}  // namespace detail

inline UserSchedule build_user_schedule(int K, int t, const SplitPlan& plan) {
    UserSchedule out;
    if (t == 0 || t >= K || plan.lambda == 1) return out;
    const int alpha = plan.alpha;
    const int m = plan.m;
    auto parts = enumerate_equal_partitions(K, m + 1, alpha);
    const int beta = static_cast<int>(parts.size());
    const long long items = to_ll(binom(K - 1, t)) * K;
    const long long d = static_cast<long long>(alpha) * m;

    auto attempt = [&](long long L, const std::string& strat) -> bool {
        long long Y = items * L / d;
        auto seq = detail::slot_sequence(strat, beta, Y);
        auto slots = detail::try_user_schedule(K, t, m, L, parts, seq);
        if (!slots) return false;
        out.slots = std::move(*slots);
        out.pico_count = L;
        out.strategy = strat;
        return true;
    };
    for (long long f = 1; f <= 12; ++f)
        for (const char* s : {"cyclic", "stride", "shuffle1", "shuffle2", "shuffle3"})
            if (attempt(plan.L1 * f, s)) return out;
    // Every partition used equally often; always feasible by symmetry.
    long long x = 1;
    while ((x * beta * d) % items != 0) ++x;
    if (attempt(x * beta * d / items, "cyclic")) {
        out.strategy = "symmetric";
        return out;
    }
    throw SchedulingError("no user schedule found for K=" + std::to_string(K) + " t=" + std::to_string(t) +
                          " alpha=" + std::to_string(alpha));
}

struct CentralizedRun {
    SplitPlan plan;
    DeliverySchedule schedule;
    std::string strategy;
};

inline DeliverySchedule centralized_schedule_shell(int K, int t, const std::vector<int>& demands,
                                                   const Rational& lambda) {
    DeliverySchedule sch;
    sch.K = K;
    sch.demands = demands;
    sch.split.lambda = lambda;
    sch.subfile_size.assign(K + 1, Rational(0));
    sch.subfile_size[t] = Rational(1) / Rational(binom(K, t));
    return sch;
}

inline CentralizedRun build_centralized_schedule(const SystemConfig& c, int alpha, const std::vector<int>& demands,
                                                 std::optional<Rational> lambda = {}) {
    const int t = c.t_int();
    CentralizedRun run;
    run.plan = make_split_plan(c, alpha, std::move(lambda));
    run.schedule = centralized_schedule_shell(c.K, t, demands, run.plan.lambda);
    if (t < c.K) {
        run.schedule.server = build_server_schedule(c.K, t);
        auto us = build_user_schedule(c.K, t, run.plan);
        run.schedule.user_slots = std::move(us.slots);
        run.strategy = us.strategy;
    }
    return run;
}

// Smallest F for which every server piece and pico-file is a whole number of bits.
inline BigInt centralized_required_F(int K, int t, const Rational& lambda, long long pico_count) {
    BigInt C = binom(K, t);
    auto need = [&](const Rational& frac) -> BigInt {
        // F * frac / C must be integral
        Rational per = frac / Rational(C);
        if (per == 0) return 1;
        return den(per);
    };
    BigInt a = need(lambda);
    BigInt b = need((1 - lambda) / pico_count);
    BigInt c = need(Rational(1));
    return lcm(lcm(a, b), c);
}

}  // namespace coop
