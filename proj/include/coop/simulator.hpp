#pragma once

#include "coop/centralized.hpp"
#include "coop/combinatorics.hpp"
#include "coop/config.hpp"
#include "coop/decentralized.hpp"
#include "coop/rational.hpp"
#include "coop/schedule.hpp"

#include <cstdint>
#include <ostream>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

namespace coop {

// Uniform integer in [0, n) from raw 64-bit draws (rejection sampling), so runs
// do not depend on the standard library's distribution implementation.
inline std::uint64_t uniform_below(std::mt19937_64& g, std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
        x = g();
    } while (x >= limit);
    return x % n;
}

// N files of F bits each, one bit per byte.
class BitLibrary {
public:
    BitLibrary(int N, long long F, std::uint64_t seed) : F_(F), files_(N) {
        std::mt19937_64 g(seed);
        for (auto& f : files_) {
            f.resize(F);
            for (long long i = 0; i < F; i += 64) {
                std::uint64_t w = g();
                for (long long b = i; b < std::min(F, i + 64); ++b, w >>= 1) f[b] = w & 1u;
            }
        }
    }
    int N() const { return static_cast<int>(files_.size()); }
    long long F() const { return F_; }
    std::uint8_t bit(int file, long long i) const { return files_[file - 1][i]; }
    const std::vector<std::uint8_t>& file(int n) const { return files_[n - 1]; }

private:
    long long F_;
    std::vector<std::vector<std::uint8_t>> files_;
};

// Which bits each user holds, plus the bit positions of every subfile W_{n,T}.
struct Placement {
    int K = 0;
    int N = 0;
    long long F = 0;
    std::vector<std::vector<std::vector<std::uint8_t>>> cached;  // [user-1][file-1][bit]
    std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> subfiles;  // key: file << 32 | mask

    static std::uint64_t key(int file, SubsetId T) { return (static_cast<std::uint64_t>(file) << 32) | T.mask; }
    const std::vector<std::uint32_t>& subfile(int file, SubsetId T) const {
        static const std::vector<std::uint32_t> none;
        auto it = subfiles.find(key(file, T));
        return it == subfiles.end() ? none : it->second;
    }

    void index_subfiles() {
        subfiles.clear();
        for (int n = 1; n <= N; ++n)
            for (long long i = 0; i < F; ++i) {
                SubsetId T;
                for (int k = 1; k <= K; ++k)
                    if (cached[k - 1][n - 1][i]) T = T.with(k);
                subfiles[key(n, T)].push_back(static_cast<std::uint32_t>(i));
            }
    }
};

// Deterministic placement: the file is cut into C(K,t) equal ranges in
// lexicographic order of T, and user k keeps every range whose T contains k.
inline Placement centralized_placement(int N, int K, int t, long long F) {
    Placement pl{K, N, F, {}, {}};
    pl.cached.assign(K, std::vector<std::vector<std::uint8_t>>(N, std::vector<std::uint8_t>(F, 0)));
    auto subsets = enumerate_subsets(K, t);
    const long long piece = F / static_cast<long long>(subsets.size());
    for (std::size_t i = 0; i < subsets.size(); ++i)
        for (int k : subsets[i].members())
            for (int n = 0; n < N; ++n)
                for (long long b = static_cast<long long>(i) * piece; b < static_cast<long long>(i + 1) * piece; ++b)
                    pl.cached[k - 1][n][b] = 1;
    pl.index_subfiles();
    return pl;
}

// Each user keeps floor(MF/N) bits of every file, drawn without replacement.
inline Placement random_placement(int N, int K, const Rational& M, long long F, std::uint64_t seed) {
    Placement pl{K, N, F, {}, {}};
    pl.cached.assign(K, std::vector<std::vector<std::uint8_t>>(N, std::vector<std::uint8_t>(F, 0)));
    const long long keep = to_ll(floor_of(M * F / N));
    std::mt19937_64 g(seed ^ 0x9E3779B97F4A7C15ULL);
    std::vector<std::uint32_t> idx(F);
    for (int k = 0; k < K; ++k)
        for (int n = 0; n < N; ++n) {
            for (long long i = 0; i < F; ++i) idx[i] = static_cast<std::uint32_t>(i);
            for (long long i = 0; i < keep; ++i) {
                long long j = i + static_cast<long long>(uniform_below(g, static_cast<std::uint64_t>(F - i)));
                std::swap(idx[i], idx[j]);
                pl.cached[k][n][idx[i]] = 1;
            }
        }
    pl.index_subfiles();
    return pl;
}

struct Constituent {
    int file = 0;
    std::vector<std::uint32_t> positions;
};

struct TxRecord {
    int slot = 0;
    int sender = 0;  // 0 = server
    SubsetId receivers;
    long long bits = 0;
    std::vector<Constituent> header;
    std::vector<std::uint8_t> payload;
};

struct TransmissionLog {
    long long F = 0;
    std::vector<TxRecord> records;
    long long server_bits = 0;
    long long user_time_bits = 0;  // sum over slots of the longest group
    std::vector<long long> sent_by;  // index 0 = server, k = user k

    Rational R1() const { return Rational(server_bits, F); }
    Rational R2() const { return Rational(user_time_bits, F); }
    Rational T() const { return std::max(R1(), R2()); }
};

// Bit positions of one fragment: parts are consecutive ranges of the subfile
// (server share first, then the user share, itself split u1 | u2).
inline std::vector<std::uint32_t> fragment_bits(const DeliverySchedule& sch, const Placement& pl, const FragmentRef& f) {
    const auto& all = pl.subfile(sch.demands[f.receiver - 1], f.subset);
    const long long n = static_cast<long long>(all.size());
    const long long s_len = to_ll(floor_of(sch.split.lambda * n));
    const long long u_len = n - s_len;
    const long long u1_len = to_ll(floor_of(sch.split.l2(f.subset.size() + 1) * u_len));
    long long a = 0, b = n;
    switch (f.part) {
        case Part::Whole: break;
        case Part::Server: b = s_len; break;
        case Part::User: a = s_len; break;
        case Part::User1: a = s_len; b = s_len + u1_len; break;
        case Part::User2: a = s_len + u1_len; break;
    }
    const long long len = b - a;
    const long long lo = a + len * f.index / f.count;
    const long long hi = a + len * (f.index + 1) / f.count;
    return {all.begin() + lo, all.begin() + hi};
}

// Turns an abstract schedule into bit-level transmissions. Empty symbols are dropped.
inline TransmissionLog materialize(const DeliverySchedule& sch, const Placement& pl, const BitLibrary* lib,
                                   bool keep_payload = true) {
    TransmissionLog log;
    log.F = pl.F;
    log.sent_by.assign(sch.K + 1, 0);
    auto make = [&](const XorSymbol& s, int slot) {
        TxRecord r;
        r.slot = slot;
        r.sender = s.sender;
        r.receivers = s.receivers;
        for (auto& f : s.pieces) {
            Constituent c{sch.demands[f.receiver - 1], fragment_bits(sch, pl, f)};
            r.bits = std::max<long long>(r.bits, static_cast<long long>(c.positions.size()));
            r.header.push_back(std::move(c));
        }
        if (keep_payload && lib) {
            r.payload.assign(r.bits, 0);
            for (auto& c : r.header)
                for (std::size_t b = 0; b < c.positions.size(); ++b) r.payload[b] ^= lib->bit(c.file, c.positions[b]);
        }
        if (!keep_payload) r.header.clear();
        return r;
    };
    int slot = 0;
    for (auto& s : sch.server) {
        TxRecord r = make(s, slot);
        if (r.bits == 0) continue;
        log.server_bits += r.bits;
        log.sent_by[0] += r.bits;
        log.records.push_back(std::move(r));
        ++slot;
    }
    slot = 0;
    for (auto& us : sch.user_slots) {
        long long longest = 0;
        bool any = false;
        for (auto& g : us.groups) {
            long long tot = 0;
            for (auto& s : g.symbols) {
                TxRecord r = make(s, slot);
                if (r.bits == 0) continue;
                tot += r.bits;
                log.sent_by[s.sender] += r.bits;
                log.records.push_back(std::move(r));
                any = true;
            }
            longest = std::max(longest, tot);
        }
        log.user_time_bits += longest;
        if (any) ++slot;
    }
    return log;
}

struct DecodeResult {
    bool ok = true;
    std::string failure;  // first problem found
};

// Rebuilds every user's knowledge from its cache and the records it hears
// (server broadcasts and symbols addressed to it), peeling one unknown bit per
// payload position at a time, then compares against the library.
inline DecodeResult brute_force_decode_check(const std::vector<TxRecord>& records, const Placement& pl,
                                             const std::vector<int>& demands, const BitLibrary& lib) {
    const int K = pl.K;
    for (int k = 1; k <= K; ++k) {
        std::vector<std::vector<std::uint8_t>> known(pl.N), value(pl.N);
        for (int n = 1; n <= pl.N; ++n) {
            known[n - 1] = pl.cached[k - 1][n - 1];
            value[n - 1].assign(pl.F, 0);
            for (long long i = 0; i < pl.F; ++i)
                if (known[n - 1][i]) value[n - 1][i] = lib.bit(n, i);
        }
        std::vector<const TxRecord*> heard;
        for (auto& r : records)
            if (r.sender == 0 || r.receivers.contains(k)) heard.push_back(&r);
        bool progress = true;
        while (progress) {
            progress = false;
            for (const TxRecord* r : heard) {
                for (long long b = 0; b < r->bits; ++b) {
                    int unknown = -1;
                    int n_unknown = 0;
                    std::uint8_t acc = r->payload[b];
                    for (std::size_t ci = 0; ci < r->header.size(); ++ci) {
                        const auto& c = r->header[ci];
                        if (b >= static_cast<long long>(c.positions.size())) continue;
                        std::uint32_t pos = c.positions[b];
                        if (known[c.file - 1][pos]) {
                            acc ^= value[c.file - 1][pos];
                        } else {
                            ++n_unknown;
                            unknown = static_cast<int>(ci);
                        }
                    }
                    if (n_unknown == 1) {
                        const auto& c = r->header[unknown];
                        known[c.file - 1][c.positions[b]] = 1;
                        value[c.file - 1][c.positions[b]] = acc;
                        progress = true;
                    }
                }
            }
        }
        const int d = demands[k - 1];
        for (long long i = 0; i < pl.F; ++i) {
            if (!known[d - 1][i])
                return {false, "user " + std::to_string(k) + " cannot recover bit " + std::to_string(i) + " of file " +
                                   std::to_string(d)};
            if (value[d - 1][i] != lib.bit(d, i))
                return {false, "user " + std::to_string(k) + " decodes bit " + std::to_string(i) + " of file " +
                                   std::to_string(d) + " incorrectly"};
        }
    }
    return {};
}

// One line per record: slot,sender,receivers,bits (sender "S" for the server).
inline void write_log(std::ostream& os, const TransmissionLog& log) {
    for (auto& r : log.records) {
        os << r.slot << ',' << (r.sender == 0 ? std::string("S") : std::to_string(r.sender)) << ',';
        bool first = true;
        for (int u : r.receivers.members()) {
            os << (first ? "" : ";") << u;
            first = false;
        }
        os << ',' << r.bits << '\n';
    }
}

// Same format for a fluid schedule; bits are exact rationals (size times F).
inline void write_fluid_log(std::ostream& os, const DeliverySchedule& sch, long long F) {
    auto line = [&](int slot, const XorSymbol& s) {
        os << slot << ',' << (s.sender == 0 ? std::string("S") : std::to_string(s.sender)) << ',';
        bool first = true;
        for (int u : s.receivers.members()) {
            os << (first ? "" : ";") << u;
            first = false;
        }
        os << ',' << to_string(sch.fluid_symbol(s) * F) << '\n';
    };
    int slot = 0;
    for (auto& s : sch.server) line(slot++, s);
    slot = 0;
    for (auto& us : sch.user_slots) {
        for (auto& g : us.groups)
            for (auto& s : g.symbols) line(slot, s);
        ++slot;
    }
}

struct SimResult {
    TransmissionLog log;
    DecodeResult decode;
    RateReport closed_form;
    Rational R1, R2, T;
    std::string strategy;       // centralized: how the user slots were found
    long long pico_count = 0;   // centralized: L1 actually used
    std::vector<RoundInfo> rounds;  // decentralized
};

inline std::vector<int> identity_demands(int K) {
    std::vector<int> d(K);
    for (int k = 0; k < K; ++k) d[k] = k + 1;
    return d;
}

inline void check_demands(const std::vector<int>& demands, int K, int N) {
    if (static_cast<int>(demands.size()) != K) throw ConfigError("need one demand per user");
    std::vector<bool> used(N + 1, false);
    for (int d : demands) {
        if (d < 1 || d > N) throw ConfigError("demand outside 1..N");
        if (used[d]) throw ConfigError("demands must be distinct");
        used[d] = true;
    }
}

// Number of pico-files per user mini-file in a centralized schedule (1 if none).
inline long long pico_count_of(const DeliverySchedule& sch) {
    for (auto& s : sch.user_slots)
        for (auto& g : s.groups)
            for (auto& x : g.symbols)
                if (!x.pieces.empty()) return x.pieces.front().count;
    return 1;
}

// Required file size for a centralized run at this alpha.
inline BigInt centralized_required_F(const SystemConfig& c, int alpha, std::optional<Rational> lambda = {}) {
    const int t = c.t_int();
    if (t == c.K) return 1;
    auto run = build_centralized_schedule(c, alpha, identity_demands(c.K), std::move(lambda));
    long long pico = pico_count_of(run.schedule);
    return centralized_required_F(c.K, t, run.plan.lambda, pico);
}

inline SimResult run_centralized(const SystemConfig& c, int alpha, const std::vector<int>& demands, std::uint64_t seed,
                                 std::optional<Rational> lambda = {}) {
    c.validate();
    check_demands(demands, c.K, c.N);
    const int t = c.t_int();
    SimResult res;
    auto run = build_centralized_schedule(c, alpha, demands, lambda);
    res.strategy = run.strategy;
    long long pico = pico_count_of(run.schedule);
    res.pico_count = run.schedule.user_slots.empty() ? 0 : pico;
    BigInt need = t == c.K ? BigInt(1) : centralized_required_F(c.K, t, run.plan.lambda, pico);
    if (BigInt(c.F) % need != 0)
        throw ConfigError("F must be a multiple of " + need.str() + " for this configuration");
    BitLibrary lib(c.N, c.F, seed);
    Placement pl = centralized_placement(c.N, c.K, t, c.F);
    res.log = materialize(run.schedule, pl, &lib);
    res.decode = brute_force_decode_check(res.log.records, pl, demands, lib);
    res.closed_form = lambda ? centralized_rates(c, alpha, *lambda) : centralized_rates(c, alpha);
    res.R1 = res.log.R1();
    res.R2 = res.log.R2();
    res.T = res.log.T();
    return res;
}

enum class Mode { Fluid, Bits };

struct DecentralOptions {
    Mode mode = Mode::Fluid;
    bool decode = true;  // bits mode: run the decoder
};

inline SimResult run_decentralized(const SystemConfig& c, const std::vector<int>& demands, std::uint64_t seed,
                                   DecentralOptions opt = {}) {
    c.validate();
    check_demands(demands, c.K, c.N);
    SimResult res;
    auto run = build_decentralized_schedule(c.K, c.p(), c.alpha_max, demands);
    res.rounds = run.rounds;
    res.closed_form = decentralized_delay(c);
    if (opt.mode == Mode::Fluid) {
        auto loads = measure_fluid(run.schedule);
        std::string err = check_schedule(run.schedule, c.alpha_max);
        res.decode = {err.empty(), err};
        res.R1 = loads.server;
        res.R2 = loads.user;
        res.T = loads.T();
        return res;
    }
    Placement pl = random_placement(c.N, c.K, c.M, c.F, seed);
    if (opt.decode) {
        BitLibrary lib(c.N, c.F, seed);
        res.log = materialize(run.schedule, pl, &lib);
        res.decode = brute_force_decode_check(res.log.records, pl, demands, lib);
    } else {
        res.log = materialize(run.schedule, pl, nullptr, false);
        res.decode = {true, "not checked"};
    }
    res.R1 = res.log.R1();
    res.R2 = res.log.R2();
    res.T = res.log.T();
    return res;
}

}  // namespace coop
