#pragma once

#include <algorithm>
#include <limits>
#include <queue>
#include <vector>

namespace coop {

// Dinic's algorithm on integer capacities.
class MaxFlow {
public:
    explicit MaxFlow(int n) : adj_(n), level_(n), it_(n) {}

    int add_node() {
        adj_.emplace_back();
        level_.push_back(0);
        it_.push_back(0);
        return static_cast<int>(adj_.size()) - 1;
    }

    // Returns an edge handle usable with flow_on().
    int add_edge(int from, int to, long long cap) {
        edges_.push_back({to, cap, 0});
        adj_[from].push_back(static_cast<int>(edges_.size()) - 1);
        edges_.push_back({from, 0, 0});
        adj_[to].push_back(static_cast<int>(edges_.size()) - 1);
        return static_cast<int>(edges_.size()) - 2;
    }

    long long flow_on(int edge) const { return edges_[edge].flow; }

    long long run(int s, int t) {
        long long total = 0;
        while (bfs(s, t)) {
            std::fill(it_.begin(), it_.end(), 0);
            while (long long f = dfs(s, t, std::numeric_limits<long long>::max())) total += f;
        }
        return total;
    }

private:
    struct Edge {
        int to;
        long long cap;
        long long flow;
    };

    bool bfs(int s, int t) {
        std::fill(level_.begin(), level_.end(), -1);
        std::queue<int> q;
        level_[s] = 0;
        q.push(s);
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            for (int id : adj_[v]) {
                const Edge& e = edges_[id];
                if (e.cap - e.flow > 0 && level_[e.to] < 0) {
                    level_[e.to] = level_[v] + 1;
                    q.push(e.to);
                }
            }
        }
        return level_[t] >= 0;
    }

    long long dfs(int v, int t, long long pushed) {
        if (v == t) return pushed;
        for (std::size_t& i = it_[v]; i < adj_[v].size(); ++i) {
            int id = adj_[v][i];
            Edge& e = edges_[id];
            if (e.cap - e.flow <= 0 || level_[e.to] != level_[v] + 1) continue;
            long long got = dfs(e.to, t, std::min(pushed, e.cap - e.flow));
            if (got > 0) {
                e.flow += got;
                edges_[id ^ 1].flow -= got;
                return got;
            }
        }
        return 0;
    }

    std::vector<Edge> edges_;
    std::vector<std::vector<int>> adj_;
    std::vector<int> level_;
    std::vector<std::size_t> it_;
};

}  // namespace coop
