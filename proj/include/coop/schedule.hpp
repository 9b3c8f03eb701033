#pragma once

#include "coop/combinatorics.hpp"
#include "coop/rational.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

namespace coop {

// Which slice of a subfile W_{d_k,T} a fragment belongs to.
//   Whole  - the entire subfile (uncached content sent by the server)
//   Server - the lambda share sent by the server
//   User   - the user share
//   User1  - user share, part delivered inside size-s groups (remainder rounds)
//   User2  - user share, part delivered by the remainder group
enum class Part { Whole, Server, User, User1, User2 };

inline const char* part_name(Part p) {
    switch (p) {
        case Part::Whole: return "whole";
        case Part::Server: return "s";
        case Part::User: return "u";
        case Part::User1: return "u1";
        case Part::User2: return "u2";
    }
    return "?";
}

struct FragmentRef {
    int receiver = 0;  // user k; the file is demands[k-1]
    SubsetId subset;   // T, the users caching the subfile
    Part part = Part::Whole;
    int index = 0;     // which of the `count` equal pieces
    int count = 1;

    auto key() const { return std::tuple(receiver, subset.mask, static_cast<int>(part), index, count); }
    friend bool operator<(const FragmentRef& a, const FragmentRef& b) { return a.key() < b.key(); }
    friend bool operator==(const FragmentRef& a, const FragmentRef& b) { return a.key() == b.key(); }
};

// One coded packet: XOR of its pieces, zero-padded to the longest.
struct XorSymbol {
    int sender = 0;  // 0 is the server, 1..K are users
    SubsetId receivers;
    std::vector<FragmentRef> pieces;
};

struct GroupTx {
    SubsetId group;
    std::vector<XorSymbol> symbols;  // sent one after another inside the group
};

// Disjoint groups transmitting in parallel.
struct UserSlot {
    int round = 0;
    std::vector<GroupTx> groups;
};

// How each subfile is cut into parts.
struct SplitRule {
    Rational lambda = 0;
    std::vector<Rational> lambda2;  // indexed by s = |T|+1; used for User1/User2

    Rational fraction(SubsetId T, Part part) const {
        switch (part) {
            case Part::Whole: return 1;
            case Part::Server: return lambda;
            case Part::User: return 1 - lambda;
            case Part::User1: return (1 - lambda) * l2(T.size() + 1);
            case Part::User2: return (1 - lambda) * (1 - l2(T.size() + 1));
        }
        return 0;
    }
    Rational l2(int s) const {
        return s < static_cast<int>(lambda2.size()) ? lambda2[s] : Rational(1);
    }
};

struct DeliverySchedule {
    int K = 0;
    std::vector<int> demands;           // 1-based file index per user
    SplitRule split;
    std::vector<Rational> subfile_size;  // fluid size / F, indexed by |T|
    std::vector<XorSymbol> server;
    std::vector<UserSlot> user_slots;

    Rational fluid_size(const FragmentRef& f) const {
        return subfile_size[f.subset.size()] * split.fraction(f.subset, f.part) / f.count;
    }
    Rational fluid_symbol(const XorSymbol& s) const {
        Rational best = 0;
        for (auto& f : s.pieces) best = std::max(best, fluid_size(f));
        return best;
    }
    std::size_t user_symbol_count() const {
        std::size_t n = 0;
        for (auto& sl : user_slots)
            for (auto& g : sl.groups) n += g.symbols.size();
        return n;
    }
};

struct FluidLoads {
    Rational server = 0;  // R1
    Rational user = 0;    // R2: sum of slot durations
    Rational T() const { return std::max(server, user); }
};

inline FluidLoads measure_fluid(const DeliverySchedule& sch) {
    FluidLoads out;
    for (auto& s : sch.server) out.server += sch.fluid_symbol(s);
    for (auto& slot : sch.user_slots) {
        Rational dur = 0;
        for (auto& g : slot.groups) {
            Rational tot = 0;
            for (auto& s : g.symbols) tot += sch.fluid_symbol(s);
            dur = std::max(dur, tot);
        }
        out.user += dur;
    }
    return out;
}

// Per-round user load (sum of slot durations of that round).
inline std::map<int, Rational> fluid_round_loads(const DeliverySchedule& sch) {
    std::map<int, Rational> out;
    for (auto& slot : sch.user_slots) {
        Rational dur = 0;
        for (auto& g : slot.groups) {
            Rational tot = 0;
            for (auto& s : g.symbols) tot += sch.fluid_symbol(s);
            dur = std::max(dur, tot);
        }
        out[slot.round] += dur;
    }
    return out;
}

// Structural checks on a schedule: parallelism limits, side information, and that
// each user's demanded content is delivered exactly once.
// Returns an empty string when everything holds, otherwise the first problem found.
inline std::string check_schedule(const DeliverySchedule& sch, int alpha_max) {
    const int K = sch.K;
    std::map<FragmentRef, int> seen;
    auto note = [&](const XorSymbol& s) -> std::string {
        if (s.sender != 0 && !s.receivers.disjoint(SubsetId{}.with(s.sender)))
            return "sender " + std::to_string(s.sender) + " listed as its own receiver";
        for (auto& f : s.pieces) {
            if (!s.receivers.contains(f.receiver))
                return "piece for user " + std::to_string(f.receiver) + " not addressed to it";
            if (f.subset.contains(f.receiver)) return "piece already cached by its receiver";
            if (s.sender != 0 && !f.subset.contains(s.sender))
                return "sender " + std::to_string(s.sender) + " does not cache a piece it sends";
            for (auto& g : s.pieces)
                if (&g != &f && !g.subset.contains(f.receiver))
                    return "user " + std::to_string(f.receiver) + " lacks side information in a symbol";
            if (sch.fluid_size(f) > 0) ++seen[f];
        }
        return {};
    };
    for (auto& s : sch.server) {
        if (s.sender != 0) return "server symbol with a user sender";
        if (auto e = note(s); !e.empty()) return e;
    }
    for (auto& slot : sch.user_slots) {
        if (static_cast<int>(slot.groups.size()) > alpha_max) return "slot exceeds alpha_max groups";
        SubsetId used;
        for (auto& g : slot.groups) {
            if (!used.disjoint(g.group)) return "overlapping groups in a slot";
            used = used.unite(g.group);
            for (auto& s : g.symbols) {
                if (!g.group.contains(s.sender)) return "sender outside its group";
                if (!g.group.contains(s.receivers)) return "receiver outside the sender's group";
                if (auto e = note(s); !e.empty()) return e;
            }
        }
    }
    for (auto& [f, n] : seen)
        if (n != 1) return "fragment delivered " + std::to_string(n) + " times";
    // Every demanded subfile must be fully covered.
    std::map<std::tuple<int, std::uint32_t, int>, std::pair<int, int>> parts;  // -> (pieces seen, count)
    for (auto& [f, n] : seen) {
        auto& e = parts[{f.receiver, f.subset.mask, static_cast<int>(f.part)}];
        if (e.second && e.second != f.count) return "inconsistent fragment counts";
        e.first += 1;
        e.second = f.count;
    }
    for (int k = 1; k <= K; ++k) {
        for (int sz = 0; sz < K; ++sz) {
            if (sch.subfile_size[sz] == 0) continue;
            for (SubsetId T : subsets_of(SubsetId::full(K).without(k), sz)) {
                Rational covered = 0;
                for (Part p : {Part::Whole, Part::Server, Part::User, Part::User1, Part::User2}) {
                    auto it = parts.find({k, T.mask, static_cast<int>(p)});
                    if (it == parts.end()) continue;
                    if (it->second.first != it->second.second)
                        return "user " + std::to_string(k) + " misses pieces of " + T.str();
                    covered += sch.split.fraction(T, p);
                }
                if (covered != 1)
                    return "user " + std::to_string(k) + " receives " + to_string(covered) + " of subfile " + T.str();
            }
        }
    }
    return {};
}

}  // namespace coop
