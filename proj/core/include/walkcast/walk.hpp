#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "walkcast/rng.hpp"
#include "walkcast/topology.hpp"

namespace walkcast {

/// One synchronous simple-random-walk step: each neighbour of pos is chosen
/// with probability 1/deg(pos). The walk is non-lazy.
inline int step_agent(const GraphTopology& g, int pos, std::uint64_t raw_draw) {
    int nbr[2];
    int d = g.neighbors_into(pos, nbr);
    if (d == 1) return nbr[0];
    return nbr[uniform_below(raw_draw, 2)];
}

/// Step every agent for one round, in place. Draw for agent i comes from the
/// key at (agent=i, round), so results do not depend on iteration order.
inline void step_all_inplace(const GraphTopology& g, std::vector<int>& positions,
                             StreamKey key, std::int64_t round) {
    for (std::size_t i = 0; i < positions.size(); ++i) {
        positions[i] = step_agent(
            g, positions[i],
            substream_u64(key, static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(round)));
    }
}

/// Variant with explicit per-agent substream ids (used to test permutation
/// symmetry of white agents).
inline void step_all_inplace(const GraphTopology& g, std::vector<int>& positions,
                             StreamKey key, std::int64_t round,
                             std::span<const std::uint64_t> agent_stream_ids) {
    for (std::size_t i = 0; i < positions.size(); ++i) {
        positions[i] = step_agent(
            g, positions[i],
            substream_u64(key, agent_stream_ids[i], static_cast<std::uint64_t>(round)));
    }
}

inline std::vector<int> step_all(const GraphTopology& g, std::vector<int> positions,
                                 const SeedSpec& seed, std::int64_t round) {
    step_all_inplace(g, positions, stream_key(seed, Stream::Step), round);
    return positions;
}

}  // namespace walkcast
