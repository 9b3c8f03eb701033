#pragma once

#include "coop/rational.hpp"

#include <bit>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace coop {

constexpr int kMaxUsers = 32;

// A set of users drawn from {1..K}, stored as a bitmask (user k -> bit k-1).
struct SubsetId {
    std::uint32_t mask = 0;

    static SubsetId of(std::initializer_list<int> users) {
        SubsetId s;
        for (int u : users) s = s.with(u);
        return s;
    }
    static SubsetId full(int K) {
        return SubsetId{K >= 32 ? 0xFFFFFFFFu : ((1u << K) - 1u)};
    }

    int size() const { return std::popcount(mask); }
    bool empty() const { return mask == 0; }
    bool contains(int user) const { return (mask >> (user - 1)) & 1u; }
    bool contains(SubsetId other) const { return (other.mask & ~mask) == 0; }
    bool disjoint(SubsetId other) const { return (mask & other.mask) == 0; }
    SubsetId with(int user) const { return SubsetId{mask | (1u << (user - 1))}; }
    SubsetId without(int user) const { return SubsetId{mask & ~(1u << (user - 1))}; }
    SubsetId unite(SubsetId o) const { return SubsetId{mask | o.mask}; }
    SubsetId minus(SubsetId o) const { return SubsetId{mask & ~o.mask}; }
    int smallest() const { return mask ? std::countr_zero(mask) + 1 : 0; }

    std::vector<int> members() const {
        std::vector<int> out;
        for (std::uint32_t m = mask; m; m &= m - 1) out.push_back(std::countr_zero(m) + 1);
        return out;
    }

    std::string str() const {
        std::string s = "{";
        bool first = true;
        for (int u : members()) {
            if (!first) s += ",";
            s += std::to_string(u);
            first = false;
        }
        return s + "}";
    }

    friend bool operator==(SubsetId a, SubsetId b) { return a.mask == b.mask; }
    // Lexicographic on the ascending member lists.
    friend bool operator<(SubsetId a, SubsetId b) {
        if (a.mask == b.mask) return false;
        std::uint32_t diff = a.mask ^ b.mask;
        std::uint32_t low = diff & (~diff + 1);  // lowest differing user
        if (a.mask & low) {
            // a has the smaller user at the first difference, unless b is a prefix of a
            return !((b.mask & ~(low - 1)) == 0);
        }
        return (a.mask & ~(low - 1)) == 0;
    }
};

struct SubsetHash {
    std::size_t operator()(SubsetId s) const { return std::hash<std::uint32_t>{}(s.mask); }
};

struct GroupPartition {
    std::vector<SubsetId> groups;  // sorted by smallest member
    int round_index = 0;

    SubsetId users() const {
        SubsetId u;
        for (auto g : groups) u = u.unite(g);
        return u;
    }
    bool has_group(SubsetId g) const {
        for (auto x : groups)
            if (x == g) return true;
        return false;
    }
    std::string str() const {
        std::string s;
        for (std::size_t i = 0; i < groups.size(); ++i) s += (i ? " " : "") + groups[i].str();
        return s;
    }
};

inline void check_users(int K) {
    if (K < 1 || K > kMaxUsers) throw std::domain_error("user count must lie in 1..32");
}

inline std::vector<SubsetId> enumerate_subsets(int K, int size) {
    check_users(K);
    if (size < 0 || size > K) throw std::domain_error("subset size out of range");
    std::vector<SubsetId> out;
    std::vector<int> idx(size);
    for (int i = 0; i < size; ++i) idx[i] = i + 1;
    while (true) {
        SubsetId s;
        for (int u : idx) s = s.with(u);
        out.push_back(s);
        int i = size - 1;
        while (i >= 0 && idx[i] == K - size + i + 1) --i;
        if (i < 0) break;
        ++idx[i];
        for (int j = i + 1; j < size; ++j) idx[j] = idx[j - 1] + 1;
    }
    return out;
}

// Subsets of `pool` with the given size, lexicographic.
inline std::vector<SubsetId> subsets_of(SubsetId pool, int size) {
    auto m = pool.members();
    std::vector<SubsetId> out;
    if (size < 0 || size > static_cast<int>(m.size())) return out;
    std::vector<int> idx(size);
    for (int i = 0; i < size; ++i) idx[i] = i;
    const int n = static_cast<int>(m.size());
    while (true) {
        SubsetId s;
        for (int i : idx) s = s.with(m[i]);
        out.push_back(s);
        int i = size - 1;
        while (i >= 0 && idx[i] == n - size + i) --i;
        if (i < 0) break;
        ++idx[i];
        for (int j = i + 1; j < size; ++j) idx[j] = idx[j - 1] + 1;
    }
    return out;
}

namespace detail {

// Groups are emitted in increasing order of their smallest member, which makes
// every unordered partition appear exactly once.
inline void equal_parts_rec(SubsetId avail, int s, int remaining, int last_leader,
                            std::vector<SubsetId>& cur, std::vector<GroupPartition>& out) {
    if (remaining == 0) {
        out.push_back(GroupPartition{cur, 0});
        return;
    }
    for (int leader : avail.members()) {
        if (leader <= last_leader) continue;
        // enough users above the leader must remain for all later groups
        SubsetId above{avail.mask & ~((1u << leader) - 1u)};
        if (above.size() + 1 < remaining * s) break;
        for (SubsetId rest : subsets_of(above, s - 1)) {
            SubsetId g = rest.with(leader);
            cur.push_back(g);
            equal_parts_rec(avail.minus(g), s, remaining - 1, leader, cur, out);
            cur.pop_back();
        }
    }
}

inline void covering_parts_rec(SubsetId avail, std::vector<int>& sizes, std::vector<SubsetId>& cur,
                               std::vector<GroupPartition>& out) {
    if (avail.empty()) {
        out.push_back(GroupPartition{cur, 0});
        return;
    }
    int leader = avail.smallest();
    SubsetId rest_pool = avail.without(leader);
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        if (sizes[i] == 0) continue;
        if (i > 0 && sizes[i] == sizes[i - 1]) continue;  // sizes kept sorted; skip duplicates
        int sz = sizes[i];
        sizes[i] = 0;
        std::vector<int> next;
        for (int x : sizes)
            if (x) next.push_back(x);
        for (SubsetId rest : subsets_of(rest_pool, sz - 1)) {
            SubsetId g = rest.with(leader);
            cur.push_back(g);
            covering_parts_rec(avail.minus(g), next, cur, out);
            cur.pop_back();
        }
        sizes[i] = sz;
    }
}

}  // namespace detail

inline std::vector<GroupPartition> enumerate_equal_partitions(int K, int s, int alpha_D) {
    check_users(K);
    if (s < 2) throw std::domain_error("group size must be at least 2");
    if (alpha_D < 1 || alpha_D * s > K) throw std::domain_error("alpha_D * s exceeds K");
    std::vector<GroupPartition> out;
    std::vector<SubsetId> cur;
    detail::equal_parts_rec(SubsetId::full(K), s, alpha_D, 0, cur, out);
    return out;
}

inline std::vector<GroupPartition> enumerate_remainder_partitions(int K, int s) {
    check_users(K);
    if (s < 2) throw std::domain_error("group size must be at least 2");
    if (K % s < 2) throw std::domain_error("remainder partitions need K mod s >= 2");
    std::vector<int> sizes;
    sizes.push_back(K % s);
    for (int i = 0; i < K / s; ++i) sizes.push_back(s);
    std::vector<GroupPartition> out;
    std::vector<SubsetId> cur;
    detail::covering_parts_rec(SubsetId::full(K), sizes, cur, out);
    return out;
}

// Closed-form partition counts.
inline BigInt equal_partition_count(int K, int s, int alpha_D) {
    BigInt r = 1;
    for (int i = 0; i < alpha_D; ++i) r *= binom(K - i * s, s);
    for (int i = 2; i <= alpha_D; ++i) r /= i;
    return r;
}

inline BigInt remainder_partition_count(int K, int s) { return equal_partition_count(K, s, K / s); }

// True when alpha_D groups of size s do not fit, i.e. the remainder shape applies.
inline bool is_remainder_shape(int K, int s, int alpha_D) { return alpha_D * s > K; }

// N_G: how many partitions of the relevant enumeration contain a fixed size-s group.
inline long long group_multiplicity(int K, int s, int alpha_D) {
    std::vector<GroupPartition> parts;
    if (is_remainder_shape(K, s, alpha_D)) {
        if (K % s < 2 || alpha_D != (K + s - 1) / s) throw std::domain_error("invalid case parameters");
        parts = enumerate_remainder_partitions(K, s);
    } else {
        parts = enumerate_equal_partitions(K, s, alpha_D);
    }
    SubsetId g{(1u << s) - 1u};
    long long n = 0;
    for (auto& p : parts) n += p.has_group(g);
    return n;
}

// N_G for the size-(K mod s) remainder group.
inline long long remainder_group_multiplicity(int K, int s) {
    if (s < 2 || K % s < 2) throw std::domain_error("remainder group needs K mod s >= 2");
    auto parts = enumerate_remainder_partitions(K, s);
    SubsetId g{(1u << (K % s)) - 1u};
    long long n = 0;
    for (auto& p : parts) n += p.has_group(g);
    return n;
}

// Product formula for N_G; only defined for the equal-size shapes.
inline std::optional<BigInt> group_multiplicity_formula(int K, int s, int alpha_D) {
    if (is_remainder_shape(K, s, alpha_D)) return std::nullopt;
    return equal_partition_count(K - s, s, alpha_D - 1);
}

inline int f_ks(int K, int s) {
    if (s < 2 || s > K) throw std::domain_error("f(K,s) needs 2 <= s <= K");
    if (K % s < 2) return (K / s) * (s - 1);
    return K - 1 - K / s;
}

}  // namespace coop
