#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "walkcast/broadcast.hpp"
#include "walkcast/topology.hpp"

namespace walkcast {

/// How k is derived from n in a sweep.
struct KSpec {
    enum class Rule { Fixed, Power, NLogN };
    Rule rule = Rule::Fixed;
    double value = 2.0;  // Fixed: k itself; Power: exponent x in ceil(n^x); NLogN: c in ceil(c n ln n)

    int k_for(int n) const;
    std::string describe() const;
};

struct ExperimentConfig {
    GraphKind graph = GraphKind::Cycle;
    std::vector<int> ns;
    KSpec k;
    std::int64_t trials = 1;
    std::uint64_t base_seed = 0;
    std::int64_t cap = 0;  // 0 -> default 100 n^2
    int workers = 0;       // 0 -> hardware concurrency
    bool diag_occupancy = false;
    bool diag_leaders = false;
    bool diag_trace = false;
    PropagationMode mode = PropagationMode::SwapRelay;

    std::int64_t cap_for(int n) const { return cap > 0 ? cap : 100LL * n * n; }
};

/// Capped trials are right-censored: quantiles that fall inside the censored
/// mass are withheld, and the mean (computed with xi = cap) is a lower bound.
struct SummaryStats {
    std::int64_t trials = 0;
    double mean = 0.0;
    std::optional<double> median, q05, q25, q75, q95;
    double se = 0.0;
    std::int64_t capped_count = 0;
};

SummaryStats summarize(std::span<const TrialResult> trials);

struct TraceEvent {
    std::int64_t round = 0;
    int phase = 0;
    int colocation_groups = 0;
    int crossed_edges = 0;
};

/// b = floor(k / (500 ln n)) consecutive blocks partitioning [n]; block 1
/// contains vertex 1, block b contains vertex n, sizes differ by at most 1.
struct BlockPartition {
    int n = 0;
    int b = 0;

    int block_of(int v) const;
    std::pair<int, int> range(int i) const;  // inclusive vertex range of block i
    int size_of(int i) const;
};

BlockPartition block_partition(int n, int k);

struct OccupancyViolation {
    std::int64_t round = 0;
    int cell = 0;  // vertex or block index
    std::int64_t count = 0;
};

struct OccupancyReport {
    std::int64_t min_count = 0;
    std::int64_t max_count = 0;
    std::optional<OccupancyViolation> first_violation;
};

/// Per-round occupancy counts per vertex (or per block when a partition is
/// given) over an observed trace of position vectors. Thresholds, if set,
/// flag the first (round, cell) outside [min, max].
OccupancyReport occupancy_monitor(std::span<const std::vector<int>> trace,
                                  const GraphTopology& g,
                                  const BlockPartition* blocks = nullptr,
                                  std::optional<std::int64_t> min_threshold = {},
                                  std::optional<std::int64_t> max_threshold = {});

/// First-entry times t_i of green agents into blocks i = i0, i0-1, ..., 1,
/// where i0 is the initial green agent's block. Returned vector has size i0;
/// entry [i-1] is t_i, or -1 if block i was never reached by a green agent.
std::vector<std::int64_t> leading_agent_diagnostics(
    std::span<const std::vector<int>> positions_trace,
    std::span<const std::vector<std::uint8_t>> green_trace, const BlockPartition& blocks);

struct TrialDiagnostics {
    std::optional<OccupancyReport> occupancy;
    std::optional<std::vector<std::int64_t>> leader_entry_times;
    std::optional<std::vector<TraceEvent>> trace;

    bool any() const { return occupancy || leader_entry_times || trace; }
};

struct PointResult {
    int point_index = 0;
    GraphKind graph = GraphKind::Cycle;
    int n = 0;
    int k = 0;
    std::int64_t cap = 0;
    std::vector<TrialResult> trials;
    std::vector<TrialDiagnostics> diagnostics;  // parallel to trials; may be empty
    SummaryStats stats;
};

/// Runs the configured sweep. Per-trial seeds derive from (base seed, point
/// index, trial index); the result is bit-identical for any worker count.
std::vector<PointResult> run_trials(const ExperimentConfig& config);

struct RegimeInfo {
    std::string label;       // "small-k band (a/b)", "(c)", "(d)", "(e)"
    double lower_envelope = 0.0;
    double upper_envelope = 0.0;
    double power_prediction = 0.0;  // n^{2-x} = n^2 / k
};

/// Classifies (n, k) into the asymptotic bands, with the slowly growing
/// function fixed to omega = ln ln n. Envelopes are bands, not point
/// predictions.
RegimeInfo theorem_regime(double n, double k);

/// Least-squares slope of log(median xi) against log(n).
double fit_scaling_exponent(std::span<const std::pair<double, double>> points);

}  // namespace walkcast
