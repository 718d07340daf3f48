#include "walkcast/topology.hpp"

#include <stdexcept>
#include <string>

namespace walkcast {

GraphTopology::GraphTopology(GraphKind kind, int n) : kind_(kind), n_(n) {
    int min_n = kind == GraphKind::Path ? 2 : 3;
    if (n < min_n) {
        throw std::invalid_argument("GraphTopology: n=" + std::to_string(n) +
                                    " too small (need >= " + std::to_string(min_n) + ")");
    }
}

void GraphTopology::check_vertex(int v) const {
    if (v < 1 || v > n_) {
        throw std::domain_error("vertex " + std::to_string(v) + " outside [1," +
                                std::to_string(n_) + "]");
    }
}

int GraphTopology::degree(int v) const {
    check_vertex(v);
    if (kind_ == GraphKind::Cycle) return 2;
    return (v == 1 || v == n_) ? 1 : 2;
}

int GraphTopology::neighbors_into(int v, int out[2]) const {
    check_vertex(v);
    if (kind_ == GraphKind::Path) {
        if (v == 1) {
            out[0] = 2;
            return 1;
        }
        if (v == n_) {
            out[0] = n_ - 1;
            return 1;
        }
        out[0] = v - 1;
        out[1] = v + 1;
        return 2;
    }
    // Cycle: ascending order, so the wrap edge puts n after 2 for v=1.
    if (v == 1) {
        out[0] = 2;
        out[1] = n_;
        return 2;
    }
    if (v == n_) {
        out[0] = 1;
        out[1] = n_ - 1;
        return 2;
    }
    out[0] = v - 1;
    out[1] = v + 1;
    return 2;
}

std::vector<int> GraphTopology::neighbors(int v) const {
    int buf[2];
    int d = neighbors_into(v, buf);
    return std::vector<int>(buf, buf + d);
}

bool GraphTopology::is_edge(int u, int v) const {
    check_vertex(u);
    check_vertex(v);
    if (u == v) return false;
    int lo = u < v ? u : v;
    int hi = u < v ? v : u;
    if (hi - lo == 1) return true;
    return kind_ == GraphKind::Cycle && lo == 1 && hi == n_;
}

int GraphTopology::graph_distance(int u, int v) const {
    check_vertex(u);
    check_vertex(v);
    int d = u < v ? v - u : u - v;
    if (kind_ == GraphKind::Cycle) d = std::min(d, n_ - d);
    return d;
}

std::vector<double> GraphTopology::stationary_distribution() const {
    std::vector<double> pi(static_cast<std::size_t>(n_));
    double two_e = 2.0 * edge_count();
    for (int v = 1; v <= n_; ++v) pi[static_cast<std::size_t>(v - 1)] = degree(v) / two_e;
    return pi;
}

std::pair<std::int64_t, std::int64_t> GraphTopology::stationary_rational(int v) const {
    return {degree(v), 2LL * edge_count()};
}

}  // namespace walkcast
