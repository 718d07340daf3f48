#pragma once

#include <cstdint>

namespace walkcast {

/// Counter-based randomness: every draw is a pure function of
/// (base_seed, point_index, trial_index, stream, agent, round), so trials can
/// run on any number of workers in any order and still produce bit-identical
/// trajectories.
struct SeedSpec {
    std::uint64_t base_seed = 0;
    std::uint64_t point_index = 0;
    std::uint64_t trial_index = 0;
};

/// Independent substreams inside one trial.
enum class Stream : std::uint64_t {
    Step = 1,         // per-round walk draws for graph agents
    Init = 2,         // initial placement
    UnusualFlag = 3,  // coupling: unusual-agent coin
    UnusualSide = 4,  // coupling: endpoint choice for unusual avatars
    UnusualStep = 5,  // coupling: walk draws for unusual avatars
};

namespace rng {

// splitmix64 finalizer; full avalanche.
inline std::uint64_t mix(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return x;
}

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

}  // namespace rng

/// Pre-mixed key for one (seed, stream) pair; amortizes the keying work in
/// the per-agent-per-round hot path.
struct StreamKey {
    std::uint64_t h0 = 0;
};

inline StreamKey stream_key(const SeedSpec& s, Stream st) {
    std::uint64_t h = rng::mix(s.base_seed + rng::kGolden);
    h = rng::mix(h + s.point_index);
    h = rng::mix(h + s.trial_index);
    h = rng::mix(h + static_cast<std::uint64_t>(st));
    return StreamKey{h};
}

/// One 64-bit draw for (agent, round) under the given key.
inline std::uint64_t substream_u64(StreamKey key, std::uint64_t agent, std::uint64_t round) {
    return rng::mix(rng::mix(key.h0 ^ (agent * rng::kGolden)) + round);
}

inline std::uint64_t substream_u64(const SeedSpec& s, Stream st, std::uint64_t agent,
                                   std::uint64_t round) {
    return substream_u64(stream_key(s, st), agent, round);
}

/// Maps a raw 64-bit draw to [0, bound) by multiply-high; bias < bound/2^64.
inline std::uint64_t uniform_below(std::uint64_t raw, std::uint64_t bound) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(raw) * bound) >> 64);
}

}  // namespace walkcast
