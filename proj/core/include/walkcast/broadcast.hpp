#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "walkcast/rng.hpp"
#include "walkcast/topology.hpp"

namespace walkcast {

/// How green spreads inside one round. Meetings are ordered in time: an
/// edge-swap happens mid-round, co-location at the round's end.
///  - SwapRelay: an agent greened by a swap is already green when she reaches
///    her vertex, so she shares with everyone co-located there. The reverse
///    chain (greened at a vertex, then retroactively passing along the swap
///    that happened earlier in the round) does not occur.
///  - DirectOnly: only agents that directly meet a start-of-round green agent
///    turn green (sensitivity-check alternative).
enum class PropagationMode { SwapRelay, DirectOnly };

/// Agents that traversed one undirected edge this round, split by direction.
/// forward = lower-label endpoint to higher-label endpoint. Every (f, b) pair
/// with f in forward and b in backward is a swap meeting.
struct EdgeCrossing {
    int u = 0, v = 0;  // u < v
    std::vector<int> forward;
    std::vector<int> backward;
};

struct MeetingRelation {
    int k = 0;
    /// End-of-round co-location groups with at least two agents.
    std::vector<std::vector<int>> groups;
    /// Edges crossed in both directions this round.
    std::vector<EdgeCrossing> crossings;

    /// Expanded swap pairs (a < b); intended for tests and small k.
    std::vector<std::pair<int, int>> swap_pairs() const;
};

/// Meetings generated by one synchronous step prev -> next.
/// Swap detection requires the pair to traverse the same edge; exchanging
/// positions through a common neighbour is not a meeting.
MeetingRelation detect_meetings(const GraphTopology& g, std::span<const int> prev,
                                std::span<const int> next);

/// New green mask from the round's meetings. Green never shrinks.
std::vector<std::uint8_t> propagate(const std::vector<std::uint8_t>& green,
                                    const MeetingRelation& rel,
                                    PropagationMode mode = PropagationMode::SwapRelay);

struct ProcessState {
    std::int64_t round = 0;
    std::vector<int> positions;        // agent i at positions[i], agents 0..k-1
    std::vector<std::uint8_t> green;   // membership mask
    int green_count = 0;

    int k() const { return static_cast<int>(positions.size()); }
    int phase() const { return green_count; }
};

struct TrialResult {
    std::int64_t xi = 0;
    std::map<int, std::int64_t> phase_entry;  // phase -> first round it was reached
    bool capped = false;
};

/// k iid uniform starting positions; agent 0 carries the message, and every
/// agent sharing its start vertex is green from round 0.
ProcessState initialize(const GraphTopology& g, int k, const SeedSpec& seed,
                        PropagationMode mode = PropagationMode::SwapRelay);

/// One synchronous step plus message passing.
ProcessState run_round(const GraphTopology& g, ProcessState state, const SeedSpec& seed,
                       PropagationMode mode = PropagationMode::SwapRelay);

using RoundObserver = std::function<void(const ProcessState&)>;

/// Runs until phase == k or the round cap; capped trials are flagged, not
/// errors. The observer, if set, sees the state at round 0 and after every
/// round.
TrialResult run_to_completion(const GraphTopology& g, int k, const SeedSpec& seed,
                              std::int64_t cap,
                              PropagationMode mode = PropagationMode::SwapRelay,
                              const RoundObserver& observer = {});

namespace detail {

/// Reusable buffers for per-round meeting detection; one per trial. Clearing
/// is proportional to the number of touched vertices/edges, not to n.
class RoundWorkspace {
public:
    void reset(int n, int k);
    void detect(const GraphTopology& g, std::span<const int> prev, std::span<const int> next,
                MeetingRelation& rel);

private:
    std::vector<int> agents_at_;      // size n+1; count of agents per vertex
    std::vector<int> group_index_;    // size n+1; group slot per vertex or -1
    std::vector<int> touched_vertices_;
    std::vector<int> edge_slot_;      // size n+1; crossing slot per edge id or -1
    std::vector<int> touched_edges_;
};

}  // namespace detail

}  // namespace walkcast
