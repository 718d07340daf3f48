#include "walkcast/coupling.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "walkcast/walk.hpp"

namespace walkcast {

namespace coupled_labels {

int cycle_signed_label(int c, int n) {
    int m = 2 * (n - 1);
    if (c < 1 || c > m) {
        throw std::domain_error("cycle vertex " + std::to_string(c) + " outside [1," +
                                std::to_string(m) + "]");
    }
    return c <= n ? c - 1 : c - (2 * n - 1);
}

int cycle_internal(int signed_label, int n) {
    if (signed_label < -(n - 2) || signed_label > n - 1) {
        throw std::domain_error("signed cycle label " + std::to_string(signed_label) +
                                " out of range for n=" + std::to_string(n));
    }
    return signed_label >= 0 ? signed_label + 1 : signed_label + 2 * n - 1;
}

}  // namespace coupled_labels

namespace {

bool is_signed_cycle_edge(int a, int b, int n) {
    if (std::abs(a - b) == 1) return true;
    int lo = std::min(a, b), hi = std::max(a, b);
    return lo == -(n - 2) && hi == n - 1;  // wrap edge
}

}  // namespace

std::pair<int, int> project_move(int a_signed, int b_signed, int n) {
    // Range-check both endpoints.
    coupled_labels::cycle_internal(a_signed, n);
    coupled_labels::cycle_internal(b_signed, n);
    if (!is_signed_cycle_edge(a_signed, b_signed, n)) {
        throw std::domain_error("(" + std::to_string(a_signed) + "," + std::to_string(b_signed) +
                                ") is not an edge of C_{2(n-1)}");
    }
    return {coupled_labels::project(a_signed), coupled_labels::project(b_signed)};
}

CoupledStart couple_initial(const std::vector<int>& cycle_positions, int n,
                            const SeedSpec& seed) {
    const auto k = cycle_positions.size();
    CoupledStart start;
    start.avatar_positions.resize(k);
    start.unusual.resize(k);
    StreamKey flag_key = stream_key(seed, Stream::UnusualFlag);
    StreamKey side_key = stream_key(seed, Stream::UnusualSide);
    for (std::size_t i = 0; i < k; ++i) {
        std::uint64_t flag_draw = substream_u64(flag_key, i, 0);
        bool unusual = uniform_below(flag_draw, static_cast<std::uint64_t>(n)) == 0;
        start.unusual[i] = unusual ? 1 : 0;
        if (unusual) {
            bool at_zero = uniform_below(substream_u64(side_key, i, 0), 2) == 0;
            start.avatar_positions[i] = coupled_labels::path_internal(at_zero ? 0 : n - 1);
        } else {
            int s = coupled_labels::cycle_signed_label(cycle_positions[i], n);
            start.avatar_positions[i] = coupled_labels::path_internal(coupled_labels::project(s));
        }
    }
    return start;
}

CoupledTrial run_coupled(int n, int k, const SeedSpec& seed, std::int64_t cap,
                         PropagationMode mode, const RoundObserver& cycle_observer,
                         const RoundObserver& path_observer) {
    if (n < 3) throw std::invalid_argument("run_coupled: need n >= 3");
    if (k < 2) throw std::invalid_argument("run_coupled: need k >= 2");
    if (cap < 0) throw std::invalid_argument("run_coupled: negative round cap");

    GraphTopology cycle(GraphKind::Cycle, 2 * (n - 1));
    GraphTopology path(GraphKind::Path, n);

    ProcessState cyc;
    cyc.round = 0;
    cyc.positions.resize(static_cast<std::size_t>(k));
    StreamKey init_key = stream_key(seed, Stream::Init);
    const auto m = static_cast<std::uint64_t>(cycle.n());
    for (int i = 0; i < k; ++i) {
        cyc.positions[static_cast<std::size_t>(i)] = static_cast<int>(
            1 + uniform_below(substream_u64(init_key, static_cast<std::uint64_t>(i), 0), m));
    }

    CoupledStart start = couple_initial(cyc.positions, n, seed);
    CoupledTrial trial;
    trial.unusual_count = static_cast<int>(
        std::count(start.unusual.begin(), start.unusual.end(), std::uint8_t{1}));
    trial.comparable = trial.unusual_count == 0;

    ProcessState pat;
    pat.round = 0;
    pat.positions = start.avatar_positions;

    auto color_round0 = [k](ProcessState& st) {
        st.green.assign(static_cast<std::size_t>(k), 0);
        st.green_count = 0;
        for (int i = 0; i < k; ++i) {
            if (st.positions[static_cast<std::size_t>(i)] == st.positions[0]) {
                st.green[static_cast<std::size_t>(i)] = 1;
                ++st.green_count;
            }
        }
    };
    color_round0(cyc);
    color_round0(pat);

    trial.containment_ok = true;
    auto check_containment = [&] {
        for (int i = 0; i < k; ++i) {
            if (cyc.green[static_cast<std::size_t>(i)] && !pat.green[static_cast<std::size_t>(i)]) {
                trial.containment_ok = false;
                return;
            }
        }
    };
    check_containment();
    if (cycle_observer) cycle_observer(cyc);
    if (path_observer) path_observer(pat);

    bool cycle_done = cyc.green_count == k;
    bool path_done = pat.green_count == k;
    trial.xi_cycle = 0;
    trial.xi_path = 0;

    detail::RoundWorkspace ws_cyc, ws_pat;
    ws_cyc.reset(cycle.n(), k);
    ws_pat.reset(path.n(), k);
    MeetingRelation rel;
    std::vector<int> prev_cyc(static_cast<std::size_t>(k)), prev_pat(static_cast<std::size_t>(k));
    StreamKey step_key = stream_key(seed, Stream::Step);
    StreamKey unusual_step_key = stream_key(seed, Stream::UnusualStep);

    std::int64_t round = 0;
    while ((!cycle_done || !path_done) && round < cap) {
        ++round;
        prev_cyc = cyc.positions;
        prev_pat = pat.positions;
        step_all_inplace(cycle, cyc.positions, step_key, round);
        // Usual avatars shadow their agents; unusual avatars walk on their own
        // independent substream so every avatar is a valid walk on the path.
        for (int i = 0; i < k; ++i) {
            auto idx = static_cast<std::size_t>(i);
            if (start.unusual[idx]) {
                pat.positions[idx] = step_agent(
                    path, pat.positions[idx],
                    substream_u64(unusual_step_key, static_cast<std::uint64_t>(i),
                                  static_cast<std::uint64_t>(round)));
            } else {
                int s = coupled_labels::cycle_signed_label(cyc.positions[idx], n);
                pat.positions[idx] = coupled_labels::path_internal(coupled_labels::project(s));
            }
        }

        if (!cycle_done) {
            ws_cyc.detect(cycle, prev_cyc, cyc.positions, rel);
            cyc.green = propagate(cyc.green, rel, mode);
            cyc.green_count = static_cast<int>(
                std::count(cyc.green.begin(), cyc.green.end(), std::uint8_t{1}));
            if (cyc.green_count == k) {
                cycle_done = true;
                trial.xi_cycle = round;
            }
        }
        if (!path_done) {
            ws_pat.detect(path, prev_pat, pat.positions, rel);
            pat.green = propagate(pat.green, rel, mode);
            pat.green_count = static_cast<int>(
                std::count(pat.green.begin(), pat.green.end(), std::uint8_t{1}));
            if (pat.green_count == k) {
                path_done = true;
                trial.xi_path = round;
            }
        }
        cyc.round = round;
        pat.round = round;
        check_containment();
        if (cycle_observer) cycle_observer(cyc);
        if (path_observer) path_observer(pat);
    }
    if (!cycle_done) {
        trial.xi_cycle = cap;
        trial.capped_cycle = true;
    }
    if (!path_done) {
        trial.xi_path = cap;
        trial.capped_path = true;
    }
    return trial;
}

}  // namespace walkcast
