#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace walkcast {

enum class GraphKind { Path, Cycle };

/// Path P_n or cycle C_n on vertices labelled 1..n.
///
/// Immutable after construction; safe to share across threads.
class GraphTopology {
public:
    GraphTopology(GraphKind kind, int n);

    GraphKind kind() const noexcept { return kind_; }
    int n() const noexcept { return n_; }
    int edge_count() const noexcept { return kind_ == GraphKind::Path ? n_ - 1 : n_; }

    int degree(int v) const;

    /// Adjacent vertices in ascending order.
    std::vector<int> neighbors(int v) const;

    /// Allocation-free variant; writes into out[0..1], returns degree.
    int neighbors_into(int v, int out[2]) const;

    bool is_edge(int u, int v) const;

    /// Shortest-path distance.
    int graph_distance(int u, int v) const;

    /// pi(v) = deg(v) / (2|E|), as doubles. Entries sum to 1 up to rounding.
    std::vector<double> stationary_distribution() const;

    /// pi(v) as an exact (numerator, denominator) pair, unreduced: (deg(v), 2|E|).
    std::pair<std::int64_t, std::int64_t> stationary_rational(int v) const;

private:
    void check_vertex(int v) const;

    GraphKind kind_;
    int n_;
};

}  // namespace walkcast
