#pragma once

#include <numeric>
#include <utility>
#include <vector>

namespace gffperc {

/// Disjoint sets with path compression and union by rank.
class UnionFind {
public:
    explicit UnionFind(int n = 0) { reset(n); }

    void reset(int n)
    {
        parent_.resize(static_cast<std::size_t>(n));
        std::iota(parent_.begin(), parent_.end(), 0);
        rank_.assign(static_cast<std::size_t>(n), 0);
    }

    int size() const { return static_cast<int>(parent_.size()); }

    int find(int x)
    {
        int root = x;
        while (parent_[root] != root) root = parent_[root];
        while (parent_[x] != root) x = std::exchange(parent_[x], root);
        return root;
    }

    void unite(int a, int b)
    {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (rank_[a] < rank_[b]) std::swap(a, b);
        parent_[b] = a;
        if (rank_[a] == rank_[b]) ++rank_[a];
    }

    bool connected(int a, int b) { return find(a) == find(b); }

private:
    std::vector<int> parent_;
    std::vector<unsigned char> rank_;
};

}  // namespace gffperc
