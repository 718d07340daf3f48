#include "walkcast/broadcast.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "walkcast/walk.hpp"

namespace walkcast {

std::vector<std::pair<int, int>> MeetingRelation::swap_pairs() const {
    std::vector<std::pair<int, int>> pairs;
    for (const auto& c : crossings) {
        for (int f : c.forward) {
            for (int b : c.backward) {
                pairs.emplace_back(std::min(f, b), std::max(f, b));
            }
        }
    }
    std::sort(pairs.begin(), pairs.end());
    return pairs;
}

namespace detail {

void RoundWorkspace::reset(int n, int k) {
    (void)k;
    agents_at_.assign(static_cast<std::size_t>(n) + 1, 0);
    group_index_.assign(static_cast<std::size_t>(n) + 1, -1);
    edge_slot_.assign(static_cast<std::size_t>(n) + 1, -1);
    touched_vertices_.clear();
    touched_edges_.clear();
}

void RoundWorkspace::detect(const GraphTopology& g, std::span<const int> prev,
                            std::span<const int> next, MeetingRelation& rel) {
    if (prev.size() != next.size()) {
        throw std::invalid_argument("detect_meetings: position vectors of different length");
    }
    const int k = static_cast<int>(prev.size());
    const int n = g.n();
    rel.k = k;
    rel.groups.clear();
    rel.crossings.clear();

    for (int i = 0; i < k; ++i) {
        int v = next[static_cast<std::size_t>(i)];
        if (agents_at_[static_cast<std::size_t>(v)]++ == 0) touched_vertices_.push_back(v);
    }
    for (int i = 0; i < k; ++i) {
        int v = next[static_cast<std::size_t>(i)];
        if (agents_at_[static_cast<std::size_t>(v)] < 2) continue;
        int& slot = group_index_[static_cast<std::size_t>(v)];
        if (slot < 0) {
            slot = static_cast<int>(rel.groups.size());
            rel.groups.emplace_back();
        }
        rel.groups[static_cast<std::size_t>(slot)].push_back(i);
    }

    for (int i = 0; i < k; ++i) {
        int u = prev[static_cast<std::size_t>(i)];
        int v = next[static_cast<std::size_t>(i)];
        if (u == v) continue;
        int lo = std::min(u, v), hi = std::max(u, v);
        int eid;
        if (hi - lo == 1) {
            eid = lo;
        } else if (lo == 1 && hi == n && g.kind() == GraphKind::Cycle) {
            eid = n;
        } else {
            continue;  // not a single-edge traversal
        }
        int& slot = edge_slot_[static_cast<std::size_t>(eid)];
        if (slot < 0) {
            slot = static_cast<int>(rel.crossings.size());
            rel.crossings.push_back(EdgeCrossing{lo, hi, {}, {}});
            touched_edges_.push_back(eid);
        }
        auto& c = rel.crossings[static_cast<std::size_t>(slot)];
        if (u == lo) {
            c.forward.push_back(i);
        } else {
            c.backward.push_back(i);
        }
    }

    // Only edges crossed in both directions produce swap meetings.
    std::erase_if(rel.crossings,
                  [](const EdgeCrossing& c) { return c.forward.empty() || c.backward.empty(); });

    for (int v : touched_vertices_) {
        agents_at_[static_cast<std::size_t>(v)] = 0;
        group_index_[static_cast<std::size_t>(v)] = -1;
    }
    touched_vertices_.clear();
    for (int e : touched_edges_) edge_slot_[static_cast<std::size_t>(e)] = -1;
    touched_edges_.clear();
}

}  // namespace detail

MeetingRelation detect_meetings(const GraphTopology& g, std::span<const int> prev,
                                std::span<const int> next) {
    detail::RoundWorkspace ws;
    ws.reset(g.n(), static_cast<int>(prev.size()));
    MeetingRelation rel;
    ws.detect(g, prev, next, rel);
    return rel;
}

std::vector<std::uint8_t> propagate(const std::vector<std::uint8_t>& green,
                                    const MeetingRelation& rel, PropagationMode mode) {
    std::vector<std::uint8_t> out = green;

    if (mode == PropagationMode::SwapRelay) {
        // Stage 1 (mid-round): swaps pass the message from start-of-round
        // greens only; all swaps happen at the same instant.
        for (const auto& c : rel.crossings) {
            bool fwd_green = std::any_of(c.forward.begin(), c.forward.end(), [&](int a) {
                return green[static_cast<std::size_t>(a)] != 0;
            });
            bool bwd_green = std::any_of(c.backward.begin(), c.backward.end(), [&](int a) {
                return green[static_cast<std::size_t>(a)] != 0;
            });
            if (fwd_green) {
                for (int a : c.backward) out[static_cast<std::size_t>(a)] = 1;
            }
            if (bwd_green) {
                for (int a : c.forward) out[static_cast<std::size_t>(a)] = 1;
            }
        }
        // Stage 2 (end of round): everyone co-located with an agent that is
        // green by now, including agents greened by a swap above.
        for (const auto& grp : rel.groups) {
            bool has_green = std::any_of(grp.begin(), grp.end(), [&](int a) {
                return out[static_cast<std::size_t>(a)] != 0;
            });
            if (has_green) {
                for (int a : grp) out[static_cast<std::size_t>(a)] = 1;
            }
        }
        return out;
    }

    // DirectOnly: a meeting passes the message only from start-of-round greens.
    for (const auto& grp : rel.groups) {
        bool has_green = std::any_of(grp.begin(), grp.end(), [&](int a) {
            return green[static_cast<std::size_t>(a)] != 0;
        });
        if (has_green) {
            for (int a : grp) out[static_cast<std::size_t>(a)] = 1;
        }
    }
    for (const auto& c : rel.crossings) {
        bool fwd_green = std::any_of(c.forward.begin(), c.forward.end(), [&](int a) {
            return green[static_cast<std::size_t>(a)] != 0;
        });
        bool bwd_green = std::any_of(c.backward.begin(), c.backward.end(), [&](int a) {
            return green[static_cast<std::size_t>(a)] != 0;
        });
        if (fwd_green) {
            for (int a : c.backward) out[static_cast<std::size_t>(a)] = 1;
        }
        if (bwd_green) {
            for (int a : c.forward) out[static_cast<std::size_t>(a)] = 1;
        }
    }
    return out;
}

ProcessState initialize(const GraphTopology& g, int k, const SeedSpec& seed,
                        PropagationMode mode) {
    (void)mode;
    if (k < 2) {
        throw std::invalid_argument("broadcast: need at least 2 agents, got " + std::to_string(k));
    }
    ProcessState st;
    st.round = 0;
    st.positions.resize(static_cast<std::size_t>(k));
    StreamKey init_key = stream_key(seed, Stream::Init);
    const auto n = static_cast<std::uint64_t>(g.n());
    for (int i = 0; i < k; ++i) {
        st.positions[static_cast<std::size_t>(i)] = static_cast<int>(
            1 + uniform_below(substream_u64(init_key, static_cast<std::uint64_t>(i), 0), n));
    }
    // Agent 0 starts green; everyone sharing its vertex is green at round 0.
    st.green.assign(static_cast<std::size_t>(k), 0);
    st.green_count = 0;
    for (int i = 0; i < k; ++i) {
        if (st.positions[static_cast<std::size_t>(i)] == st.positions[0]) {
            st.green[static_cast<std::size_t>(i)] = 1;
            ++st.green_count;
        }
    }
    return st;
}

ProcessState run_round(const GraphTopology& g, ProcessState state, const SeedSpec& seed,
                       PropagationMode mode) {
    std::vector<int> prev = state.positions;
    std::int64_t round = state.round + 1;
    step_all_inplace(g, state.positions, stream_key(seed, Stream::Step), round);
    MeetingRelation rel = detect_meetings(g, prev, state.positions);
    state.green = propagate(state.green, rel, mode);
    state.green_count = static_cast<int>(
        std::count(state.green.begin(), state.green.end(), std::uint8_t{1}));
    state.round = round;
    return state;
}

TrialResult run_to_completion(const GraphTopology& g, int k, const SeedSpec& seed,
                              std::int64_t cap, PropagationMode mode,
                              const RoundObserver& observer) {
    if (cap < 0) throw std::invalid_argument("broadcast: negative round cap");
    TrialResult res;
    ProcessState st = initialize(g, k, seed, mode);
    res.phase_entry[st.green_count] = 0;
    if (observer) observer(st);
    if (st.green_count == k) {
        res.xi = 0;
        return res;
    }

    detail::RoundWorkspace ws;
    ws.reset(g.n(), k);
    MeetingRelation rel;
    std::vector<int> prev(st.positions.size());
    StreamKey step_key = stream_key(seed, Stream::Step);

    for (std::int64_t round = 1; round <= cap; ++round) {
        prev = st.positions;
        step_all_inplace(g, st.positions, step_key, round);
        ws.detect(g, prev, st.positions, rel);
        st.green = propagate(st.green, rel, mode);
        int count = static_cast<int>(
            std::count(st.green.begin(), st.green.end(), std::uint8_t{1}));
        st.round = round;
        if (count > st.green_count) {
            st.green_count = count;
            res.phase_entry[count] = round;
        }
        if (observer) observer(st);
        if (count == k) {
            res.xi = round;
            return res;
        }
    }
    res.xi = cap;
    res.capped = true;
    return res;
}

}  // namespace walkcast
