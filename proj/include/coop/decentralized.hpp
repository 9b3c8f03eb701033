#pragma once

#include "coop/combinatorics.hpp"
#include "coop/config.hpp"
#include "coop/rational.hpp"
#include "coop/schedule.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <tuple>
#include <vector>

namespace coop {

struct Components {
    Rational R_empty;  // uncached parts, sent by the server
    Rational R_s;      // server-only multicast rate
    Rational R_u;      // user-only parallel delivery rate of the cached parts
};

inline void check_p(const Rational& p) {
    if (p < 0 || p > 1) throw std::domain_error("p must lie in [0,1]");
}

inline Components rate_components(int K, const Rational& p, int alpha_max) {
    check_p(p);
    if (alpha_max < 1 || alpha_max > K / 2) throw std::domain_error("alpha_max out of range");
    const Rational q = 1 - p;
    Components c;
    c.R_empty = K * rpow(q, K);
    // (q/p)(1 - q^K) written as q * sum_{i<K} q^i, which is also right at p = 0
    Rational geo = 0;
    for (int i = 0; i < K; ++i) geo += rpow(q, i);
    c.R_s = q * geo;
    c.R_u = 0;
    const int split = (K + alpha_max - 1) / alpha_max;  // ceil(K/alpha_max)
    for (int s = 2; s <= K; ++s) {
        Rational w = rpow(p, s - 1) * rpow(q, K - s + 1);
        if (w == 0) continue;
        if (s <= split - 1)
            c.R_u += Rational(binom(K, s) * s, BigInt(s - 1) * alpha_max) * w;
        else
            c.R_u += Rational(binom(K - 1, s - 1) * K, BigInt(f_ks(K, s))) * w;
    }
    return c;
}

struct Allocation {
    Rational lambda;  // server share of every cached subfile
    Rational R1;      // server load: R_empty + lambda (R_s - R_empty)
    Rational R2;      // user load: (1 - lambda) R_u
    Rational T;
};

inline Allocation allocate(const Components& c) {
    Allocation a;
    Rational denom = c.R_s + c.R_u - c.R_empty;
    if (c.R_u < c.R_empty || denom == 0) {
        a.lambda = 0;
    } else {
        a.lambda = (c.R_u - c.R_empty) / denom;
    }
    a.R1 = c.R_empty + a.lambda * (c.R_s - c.R_empty);
    a.R2 = (1 - a.lambda) * c.R_u;
    a.T = std::max(a.R1, a.R2);
    return a;
}

// T = max{R_empty, R_s R_u / (R_s + R_u - R_empty)}.
inline Rational decentralized_formula(const Components& c) {
    Rational denom = c.R_s + c.R_u - c.R_empty;
    if (c.R_u < c.R_empty || denom == 0) return c.R_empty;
    return std::max(c.R_empty, c.R_s * c.R_u / denom);
}

inline RateReport decentralized_delay(const SystemConfig& cfg) {
    Components c = rate_components(cfg.K, cfg.p(), cfg.alpha_max);
    Allocation a = allocate(c);
    RateReport r;
    r.R1 = a.R1;
    r.R2 = a.R2;
    r.T = a.T;
    r.lambda = a.lambda;
    r.R_empty = c.R_empty;
    r.R_s = c.R_s;
    r.R_u = c.R_u;
    return r;
}

struct CaseInfo {
    int id = 0;       // 1, 2 or 3
    int alpha_D = 0;  // groups actually sending in parallel
};

inline CaseInfo select_case(int K, int s, int alpha_max) {
    if (s < 2 || s > K) throw std::domain_error("round size s must lie in 2..K");
    const int up = (K + s - 1) / s;
    if (up > alpha_max) return {1, alpha_max};
    if (K % s < 2) return {2, K / s};
    return {3, up};
}

// Share of the user part delivered inside the size-s groups in a remainder round.
inline Rational lambda2_split(int K, int s) {
    if (s < 2 || K % s < 2) throw std::domain_error("lambda2 needs K mod s >= 2");
    Rational ratio((K / s) * (s - 1), K % s - 1);
    return ratio / (1 + ratio);
}

struct DecGains {
    Rational G_c;
    Rational G_p;
    bool limit = false;  // true when returned as the p -> 1 limit
};

inline DecGains decentralized_gains(int K, const Rational& p, int alpha_max) {
    check_p(p);
    if (p == 0) throw std::domain_error("gains undefined at p = 0");
    DecGains g;
    if (p == 1) {
        g.G_c = Rational(K, 2 * K - 1);
        g.G_p = g.G_c;
        g.limit = true;
        return g;
    }
    Components c = rate_components(K, p, alpha_max);
    g.G_c = std::max(c.R_empty / c.R_s, c.R_u / (c.R_s + c.R_u - c.R_empty));
    g.G_p = g.G_c * (1 - rpow(1 - p, K));
    return g;
}

// Closed-form upper bounds on R_u. Empty at p = 0 (unbounded form).
inline std::optional<Rational> bound_shared(int K, const Rational& p) {
    check_p(p);
    if (p == 0) return std::nullopt;
    const Rational q = 1 - p;
    return q / p *
           (1 - Rational(5, 2) * K * p * rpow(q, K - 1) - 4 * rpow(q, K) +
            3 * (1 - rpow(q, K + 1)) / ((K + 1) * p));
}

inline std::optional<Rational> bound_flexible(int K, const Rational& p) {
    check_p(p);
    if (p == 0) return std::nullopt;
    if (K < 3) throw std::domain_error("flexible bound needs K >= 3");
    const Rational q = 1 - p;
    return Rational(K) * q / (K - 1) *
           (1 - rpow(q, K - 1) + 2 / p / (K - 2) * (1 - rpow(q, K) - K * p * rpow(q, K - 1)));
}

enum class BoundKind { Shared, Flexible, Mixed };

inline const char* bound_name(BoundKind k) {
    switch (k) {
        case BoundKind::Shared: return "shared";
        case BoundKind::Flexible: return "flexible";
        case BoundKind::Mixed: return "mixed";
    }
    return "?";
}

struct RuBound {
    BoundKind kind;
    std::optional<Rational> value;  // empty means +infinity
};

inline RuBound ru_upper_bound(int K, const Rational& p, int alpha_max) {
    if (alpha_max == 1) return {BoundKind::Shared, bound_shared(K, p)};
    if (alpha_max == K / 2) return {BoundKind::Flexible, bound_flexible(K, p)};
    auto s = bound_shared(K, p);
    auto f = bound_flexible(K, p);
    if (!s || !f) return {BoundKind::Mixed, std::nullopt};
    return {BoundKind::Mixed, *s / alpha_max + *f};
}

// p < p_th exactly when (K+1)(1-p)^(K-1) > 1.
inline bool below_threshold(int K, const Rational& p) { return (K + 1) * rpow(1 - p, K - 1) > 1; }

struct Interval {
    Rational lo;
    Rational hi;
    double mid() const { return to_double((lo + hi) / 2); }
};

// p_th = 1 - (1/(K+1))^(1/(K-1)), enclosed in an interval narrower than 1e-9.
inline Interval p_threshold(int K) {
    if (K < 2) throw std::domain_error("p_th needs K >= 2");
    Interval iv{0, 1};
    const Rational width(1, 2000000000);
    while (iv.hi - iv.lo >= width) {
        Rational m = (iv.lo + iv.hi) / 2;
        if (below_threshold(K, m))
            iv.lo = m;
        else
            iv.hi = m;
    }
    return iv;
}

inline std::vector<Rational> decentral_subfile_sizes(int K, const Rational& p) {
    std::vector<Rational> out;
    for (int i = 0; i <= K; ++i) out.push_back(rpow(p, i) * rpow(1 - p, K - i));
    return out;
}

struct RoundInfo {
    int s = 0;
    CaseInfo kase;
    std::size_t partitions = 0;
    long long fragments = 0;       // pieces per user part (u or u1)
    long long fragments_rem = 0;   // pieces per u2 part (remainder rounds)
};

struct DecentralizedRun {
    Components comp;
    Allocation alloc;
    DeliverySchedule schedule;
    std::vector<RoundInfo> rounds;
};

inline std::vector<XorSymbol> decentral_server_symbols(int K, bool with_share) {
    std::vector<XorSymbol> out;
    for (int k = 1; k <= K; ++k)
        out.push_back(XorSymbol{0, SubsetId{}.with(k), {FragmentRef{k, SubsetId{}, Part::Whole, 0, 1}}});
    if (!with_share) return out;
    for (int sz = 2; sz <= K; ++sz)
        for (SubsetId S : enumerate_subsets(K, sz)) {
            XorSymbol x{0, S, {}};
            for (int k : S.members()) x.pieces.push_back({k, S.without(k), Part::Server, 0, 1});
            out.push_back(std::move(x));
        }
    return out;
}

// All delivery rounds s = 2..K of the parallel user delivery.
inline std::vector<UserSlot> decentral_user_slots(int K, int alpha_max, std::vector<RoundInfo>* info = nullptr,
                                                  int only_round = 0) {
    std::vector<UserSlot> slots;
    using Key = std::tuple<int, std::uint32_t, int>;
    std::map<Key, int> counter;  // next fragment index per (receiver, S, part)
    auto take = [&](int j, SubsetId S, Part part, int count) {
        int& c = counter[{j, S.mask, static_cast<int>(part)}];
        if (c >= count) throw std::logic_error("fragment index exhausted");
        return FragmentRef{j, S.without(j), part, c++, count};
    };
    // inner-group coding: every member sends the XOR of one piece for each other member
    auto code_group = [&](SubsetId G, SubsetId S, Part part, int count, std::vector<XorSymbol>& out) {
        for (int k : G.members()) {
            XorSymbol x{k, G.without(k), {}};
            for (int j : G.members())
                if (j != k) x.pieces.push_back(take(j, S, part, count));
            out.push_back(std::move(x));
        }
    };
    for (int s = 2; s <= K; ++s) {
        if (only_round && s != only_round) continue;
        CaseInfo ci = select_case(K, s, alpha_max);
        std::vector<GroupPartition> parts = ci.id == 3 ? enumerate_remainder_partitions(K, s)
                                                       : enumerate_equal_partitions(K, s, ci.alpha_D);
        std::map<std::uint32_t, int> appear;
        for (auto& P : parts)
            for (auto g : P.groups) ++appear[g.mask];
        RoundInfo ri{s, ci, parts.size(), 0, 0};
        const int star = K % s;
        for (auto& P : parts) {
            UserSlot slot;
            slot.round = s;
            for (SubsetId G : P.groups) {
                GroupTx tx{G, {}};
                int n = appear[G.mask];
                if (G.size() == s) {
                    int count = (s - 1) * n;
                    ri.fragments = count;
                    code_group(G, G, ci.id == 3 ? Part::User1 : Part::User, count, tx.symbols);
                } else {
                    // remainder group: serves every S of size s containing it
                    int count = (star - 1) * static_cast<int>(to_ll(binom(s - 1, star - 1))) * n;
                    ri.fragments_rem = count;
                    for (SubsetId extra : subsets_of(SubsetId::full(K).minus(G), s - star))
                        code_group(G, G.unite(extra), Part::User2, count, tx.symbols);
                }
                slot.groups.push_back(std::move(tx));
            }
            slots.push_back(std::move(slot));
        }
        if (info) info->push_back(ri);
    }
    return slots;
}

inline DecentralizedRun build_decentralized_schedule(int K, const Rational& p, int alpha_max,
                                                     const std::vector<int>& demands) {
    DecentralizedRun run;
    run.comp = rate_components(K, p, alpha_max);
    run.alloc = allocate(run.comp);
    auto& sch = run.schedule;
    sch.K = K;
    sch.demands = demands;
    sch.split.lambda = run.alloc.lambda;
    sch.split.lambda2.assign(K + 1, Rational(1));
    for (int s = 2; s <= K; ++s)
        if (select_case(K, s, alpha_max).id == 3) sch.split.lambda2[s] = lambda2_split(K, s);
    sch.subfile_size = decentral_subfile_sizes(K, p);
    sch.server = decentral_server_symbols(K, run.alloc.lambda > 0);
    if (run.alloc.lambda < 1) sch.user_slots = decentral_user_slots(K, alpha_max, &run.rounds);
    return run;
}

}  // namespace coop
