#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "walkcast/broadcast.hpp"
#include "walkcast/rng.hpp"
#include "walkcast/topology.hpp"

namespace walkcast {

/// Label conventions for the P_n vs C_{2(n-1)} coupling. The path uses local
/// labels {0,...,n-1}; the cycle uses signed labels {-(n-2),...,n-1}; the
/// projection identifies cycle labels i and -i with path label |i|.
/// Internally both graphs keep the canonical 1-based vertex ids, converted at
/// this boundary.
namespace coupled_labels {

/// Signed label of internal cycle vertex c (1 <= c <= 2(n-1)).
int cycle_signed_label(int c, int n);

/// Internal cycle vertex for a signed label.
int cycle_internal(int signed_label, int n);

/// Internal path vertex carrying path label p (0 <= p <= n-1).
inline int path_internal(int path_label) { return path_label + 1; }
inline int path_label(int path_internal) { return path_internal - 1; }

/// Path label an agent at this signed cycle label projects to.
inline int project(int signed_label) { return signed_label < 0 ? -signed_label : signed_label; }

}  // namespace coupled_labels

/// Projects a cycle move (a -> b), given in signed labels, to the avatar move
/// on the path, returned as path labels. Throws if (a,b) is not a cycle edge.
std::pair<int, int> project_move(int a_signed, int b_signed, int n);

struct CoupledStart {
    std::vector<int> avatar_positions;  // internal path vertices
    std::vector<std::uint8_t> unusual;  // per-agent flags
};

/// Places avatars for the given cycle positions (internal vertices of
/// C_{2(n-1)}). Each agent is independently unusual with probability 1/n;
/// unusual avatars start at path label 0 or n-1 with probability 1/2 each,
/// usual avatars at the projection of their agent's vertex. Marginally every
/// avatar is uniform on the n path vertices.
CoupledStart couple_initial(const std::vector<int>& cycle_positions, int n,
                            const SeedSpec& seed);

struct CoupledTrial {
    std::int64_t xi_cycle = 0;
    std::int64_t xi_path = 0;
    bool capped_cycle = false;
    bool capped_path = false;
    int unusual_count = 0;
    bool comparable = false;  // unusual_count == 0
    /// Green agents on the cycle were a subset of green avatars in every
    /// observed round. Guaranteed by the coupling only when comparable.
    bool containment_ok = false;
};

/// Runs the broadcast process on C_{2(n-1)} and the avatar process on P_n from
/// one shared random source. Both colorings evolve independently; trials with
/// unusual agents are retained but marked not comparable.
CoupledTrial run_coupled(int n, int k, const SeedSpec& seed, std::int64_t cap,
                         PropagationMode mode = PropagationMode::SwapRelay,
                         const RoundObserver& cycle_observer = {},
                         const RoundObserver& path_observer = {});

}  // namespace walkcast
