#pragma once

#include <cstdint>
#include <iterator>
#include <stdexcept>
#include <utility>
#include <vector>

#include "lcg/coalition.hpp"

namespace lcg {

// Undirected collaboration graph over agents 0..n-1. Immutable after
// construction; adjacency is stored as one neighbor mask per agent.
class AgentGraph {
  public:
    AgentGraph(int n, const std::vector<std::pair<int, int>>& edge_list)
        : n_(n), adj_(static_cast<std::size_t>(check_count(n)), 0) {
        for (auto [a, b] : edge_list) add_edge(a, b);
    }

    explicit AgentGraph(int n) : AgentGraph(n, {}) {}

    int agent_count() const { return n_; }

    Coalition neighbors(int i) const {
        check_index(i);
        return Coalition::from_mask(adj_[static_cast<std::size_t>(i)]);
    }

    int degree(int i) const { return neighbors(i).size(); }

    bool has_edge(int i, int j) const {
        check_index(i);
        check_index(j);
        return (adj_[static_cast<std::size_t>(i)] >> j) & 1u;
    }

    // Edge list with i < j, ascending.
    std::vector<std::pair<int, int>> edges() const {
        std::vector<std::pair<int, int>> out;
        for (int i = 0; i < n_; ++i)
            for (int j : neighbors(i).members())
                if (i < j) out.emplace_back(i, j);
        return out;
    }

    std::size_t edge_count() const { return edges().size(); }

  private:
    static int check_count(int n) {
        if (n < 1 || n > kMaxAgents)
            throw std::invalid_argument("AgentGraph: agent count must be in [1,64]");
        return n;
    }

    void check_index(int i) const {
        if (i < 0 || i >= n_) throw std::out_of_range("AgentGraph: agent index out of range");
    }

    void add_edge(int a, int b) {
        check_index(a);
        check_index(b);
        if (a == b) throw std::invalid_argument("AgentGraph: self-loops are not allowed");
        adj_[static_cast<std::size_t>(a)] |= std::uint64_t{1} << b;
        adj_[static_cast<std::size_t>(b)] |= std::uint64_t{1} << a;
    }

    int n_;
    std::vector<std::uint64_t> adj_;
};

// Range over every subset of a base coalition, the empty set and the base
// itself included. Enumerates 2^|base| masks via the usual submask walk.
class SubsetRange {
  public:
    explicit SubsetRange(Coalition base) : base_(base.mask()) {}

    class iterator {
      public:
        using iterator_category = std::input_iterator_tag;
        using value_type = Coalition;
        using difference_type = std::ptrdiff_t;

        iterator() : base_(0), cur_(0), done_(true) {}
        iterator(std::uint64_t base, std::uint64_t cur) : base_(base), cur_(cur), done_(false) {}

        Coalition operator*() const { return Coalition::from_mask(cur_); }

        iterator& operator++() {
            if (cur_ == 0)
                done_ = true;
            else
                cur_ = (cur_ - 1) & base_;
            return *this;
        }

        iterator operator++(int) {
            iterator tmp = *this;
            ++*this;
            return tmp;
        }

        friend bool operator==(const iterator& a, const iterator& b) {
            return a.done_ == b.done_ && (a.done_ || a.cur_ == b.cur_);
        }
        friend bool operator!=(const iterator& a, const iterator& b) { return !(a == b); }

      private:
        std::uint64_t base_;
        std::uint64_t cur_;
        bool done_;
    };

    iterator begin() const { return iterator(base_, base_); }
    iterator end() const { return iterator(); }

    std::uint64_t count() const { return std::uint64_t{1} << std::popcount(base_); }

  private:
    std::uint64_t base_;
};

inline SubsetRange subsets(Coalition base) { return SubsetRange(base); }

// All subsets of agent i's neighborhood.
inline SubsetRange neighbor_subsets(const AgentGraph& g, int i) {
    return subsets(g.neighbors(i));
}

// Maximal connected vertex sets, ordered by smallest member.
inline std::vector<Coalition> connected_components(const AgentGraph& g) {
    const int n = g.agent_count();
    std::uint64_t unseen = Coalition::full(n).mask();
    std::vector<Coalition> out;
    while (unseen != 0) {
        std::uint64_t comp = unseen & (~unseen + 1); // lowest unseen vertex
        for (;;) {
            std::uint64_t grown = comp;
            for (std::uint64_t m = comp; m != 0; m &= m - 1)
                grown |= g.neighbors(std::countr_zero(m)).mask();
            if (grown == comp) break;
            comp = grown;
        }
        out.push_back(Coalition::from_mask(comp));
        unseen &= ~comp;
    }
    return out;
}

} // namespace lcg
