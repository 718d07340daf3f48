#include "walkcast/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>

namespace walkcast {

int KSpec::k_for(int n) const {
    double raw = 0.0;
    switch (rule) {
        case Rule::Fixed:
            raw = value;
            break;
        case Rule::Power:
            raw = std::ceil(std::pow(static_cast<double>(n), value));
            break;
        case Rule::NLogN:
            raw = std::ceil(value * n * std::log(static_cast<double>(n)));
            break;
    }
    if (!(raw >= 2.0)) {
        throw std::invalid_argument("derived k=" + std::to_string(raw) + " at n=" +
                                    std::to_string(n) + "; every point needs k >= 2");
    }
    return static_cast<int>(raw);
}

std::string KSpec::describe() const {
    switch (rule) {
        case Rule::Fixed:
            return "const:" + std::to_string(static_cast<long long>(value));
        case Rule::Power:
            return "power:" + std::to_string(value);
        case Rule::NLogN:
            return "nlogn:" + std::to_string(value);
    }
    return "?";
}

SummaryStats summarize(std::span<const TrialResult> trials) {
    SummaryStats s;
    s.trials = static_cast<std::int64_t>(trials.size());
    if (trials.empty()) return s;

    std::vector<std::int64_t> uncapped;
    uncapped.reserve(trials.size());
    double sum = 0.0, sum_sq = 0.0;
    for (const auto& t : trials) {
        if (t.capped) {
            ++s.capped_count;
        } else {
            uncapped.push_back(t.xi);
        }
        double x = static_cast<double>(t.xi);
        sum += x;
        sum_sq += x * x;
    }
    const double n = static_cast<double>(trials.size());
    s.mean = sum / n;
    if (trials.size() > 1) {
        double var = (sum_sq - sum * sum / n) / (n - 1.0);
        s.se = std::sqrt(std::max(var, 0.0) / n);
    }

    std::sort(uncapped.begin(), uncapped.end());
    auto quantile = [&](double q) -> std::optional<double> {
        // Nearest-rank over all trials, with capped trials sorted as +inf.
        auto idx = static_cast<std::size_t>(
            std::max<std::int64_t>(0, static_cast<std::int64_t>(std::ceil(q * n)) - 1));
        idx = std::min(idx, trials.size() - 1);
        if (idx >= uncapped.size()) return std::nullopt;  // falls in censored mass
        return static_cast<double>(uncapped[idx]);
    };
    s.q05 = quantile(0.05);
    s.q25 = quantile(0.25);
    s.median = quantile(0.5);
    s.q75 = quantile(0.75);
    s.q95 = quantile(0.95);
    return s;
}

int BlockPartition::block_of(int v) const {
    if (v < 1 || v > n) throw std::domain_error("block_of: vertex out of range");
    int base = n / b;
    int rem = n % b;  // first rem blocks have size base+1
    int wide_span = rem * (base + 1);
    if (v <= wide_span) return (v - 1) / (base + 1) + 1;
    return rem + (v - wide_span - 1) / base + 1;
}

std::pair<int, int> BlockPartition::range(int i) const {
    if (i < 1 || i > b) throw std::domain_error("block range: index out of range");
    int base = n / b;
    int rem = n % b;
    int lo = i <= rem ? (i - 1) * (base + 1) + 1 : rem * (base + 1) + (i - rem - 1) * base + 1;
    int size = i <= rem ? base + 1 : base;
    return {lo, lo + size - 1};
}

int BlockPartition::size_of(int i) const {
    auto [lo, hi] = range(i);
    return hi - lo + 1;
}

BlockPartition block_partition(int n, int k) {
    if (n < 2) throw std::invalid_argument("block_partition: need n >= 2");
    int b = static_cast<int>(std::floor(k / (500.0 * std::log(static_cast<double>(n)))));
    if (b < 1) {
        throw std::invalid_argument(
            "block_partition: b = floor(k/(500 ln n)) = 0 at n=" + std::to_string(n) +
            ", k=" + std::to_string(k) + "; the block construction needs k >> ln n");
    }
    b = std::min(b, n);  // never more blocks than vertices
    return BlockPartition{n, b};
}

OccupancyReport occupancy_monitor(std::span<const std::vector<int>> trace,
                                  const GraphTopology& g, const BlockPartition* blocks,
                                  std::optional<std::int64_t> min_threshold,
                                  std::optional<std::int64_t> max_threshold) {
    if (trace.empty()) throw std::invalid_argument("occupancy_monitor: empty trace");
    const int cells = blocks ? blocks->b : g.n();
    OccupancyReport rep;
    rep.min_count = std::numeric_limits<std::int64_t>::max();
    rep.max_count = 0;
    std::vector<std::int64_t> counts(static_cast<std::size_t>(cells));
    for (std::size_t r = 0; r < trace.size(); ++r) {
        std::fill(counts.begin(), counts.end(), 0);
        for (int pos : trace[r]) {
            int cell = blocks ? blocks->block_of(pos) : pos;
            ++counts[static_cast<std::size_t>(cell - 1)];
        }
        for (int c = 1; c <= cells; ++c) {
            std::int64_t cnt = counts[static_cast<std::size_t>(c - 1)];
            rep.min_count = std::min(rep.min_count, cnt);
            rep.max_count = std::max(rep.max_count, cnt);
            if (!rep.first_violation &&
                ((min_threshold && cnt < *min_threshold) ||
                 (max_threshold && cnt > *max_threshold))) {
                rep.first_violation = OccupancyViolation{static_cast<std::int64_t>(r), c, cnt};
            }
        }
    }
    return rep;
}

std::vector<std::int64_t> leading_agent_diagnostics(
    std::span<const std::vector<int>> positions_trace,
    std::span<const std::vector<std::uint8_t>> green_trace, const BlockPartition& blocks) {
    if (positions_trace.empty() || positions_trace.size() != green_trace.size()) {
        throw std::invalid_argument("leading_agent_diagnostics: empty or mismatched traces");
    }
    // Initial green agent is agent 0 at round 0.
    int i0 = blocks.block_of(positions_trace[0][0]);
    std::vector<std::int64_t> entry(static_cast<std::size_t>(i0), -1);
    for (std::size_t r = 0; r < positions_trace.size(); ++r) {
        const auto& pos = positions_trace[r];
        const auto& green = green_trace[r];
        for (std::size_t a = 0; a < pos.size(); ++a) {
            if (!green[a]) continue;
            int blk = blocks.block_of(pos[a]);
            if (blk <= i0 && entry[static_cast<std::size_t>(blk - 1)] < 0) {
                entry[static_cast<std::size_t>(blk - 1)] = static_cast<std::int64_t>(r);
            }
        }
    }
    return entry;
}

namespace {

TrialDiagnostics run_diagnostics_trial(const GraphTopology& g, int k, const SeedSpec& seed,
                                       std::int64_t cap, const ExperimentConfig& cfg,
                                       TrialResult& result) {
    TrialDiagnostics diag;
    std::optional<BlockPartition> blocks;
    if (cfg.diag_leaders) blocks = block_partition(g.n(), k);

    // Streaming accumulators keep memory flat; traces are only materialized
    // for the explicit trace flag.
    std::vector<std::int64_t> counts;
    OccupancyReport occ;
    occ.min_count = std::numeric_limits<std::int64_t>::max();
    std::vector<std::int64_t> leader_entry;
    int i0 = 0;
    std::vector<TraceEvent> trace;
    std::vector<int> prev_positions;

    RoundObserver observer = [&](const ProcessState& st) {
        if (cfg.diag_occupancy) {
            counts.assign(static_cast<std::size_t>(g.n()), 0);
            for (int pos : st.positions) ++counts[static_cast<std::size_t>(pos - 1)];
            for (std::int64_t c : counts) {
                occ.min_count = std::min(occ.min_count, c);
                occ.max_count = std::max(occ.max_count, c);
            }
        }
        if (cfg.diag_leaders) {
            if (st.round == 0) {
                i0 = blocks->block_of(st.positions[0]);
                leader_entry.assign(static_cast<std::size_t>(i0), -1);
            }
            for (std::size_t a = 0; a < st.positions.size(); ++a) {
                if (!st.green[a]) continue;
                int blk = blocks->block_of(st.positions[a]);
                if (blk <= i0 && leader_entry[static_cast<std::size_t>(blk - 1)] < 0) {
                    leader_entry[static_cast<std::size_t>(blk - 1)] = st.round;
                }
            }
        }
        if (cfg.diag_trace) {
            TraceEvent ev;
            ev.round = st.round;
            ev.phase = st.phase();
            if (st.round > 0) {
                MeetingRelation rel = detect_meetings(g, prev_positions, st.positions);
                ev.colocation_groups = static_cast<int>(rel.groups.size());
                ev.crossed_edges = static_cast<int>(rel.crossings.size());
            }
            trace.push_back(ev);
            prev_positions = st.positions;
        }
    };

    result = run_to_completion(g, k, seed, cap, cfg.mode, observer);
    if (cfg.diag_occupancy) diag.occupancy = occ;
    if (cfg.diag_leaders) diag.leader_entry_times = std::move(leader_entry);
    if (cfg.diag_trace) diag.trace = std::move(trace);
    return diag;
}

}  // namespace

std::vector<PointResult> run_trials(const ExperimentConfig& config) {
    if (config.trials < 1) throw std::invalid_argument("run_trials: need trials >= 1");
    if (config.ns.empty()) throw std::invalid_argument("run_trials: no n values");

    std::vector<PointResult> points;
    points.reserve(config.ns.size());
    for (std::size_t pi = 0; pi < config.ns.size(); ++pi) {
        PointResult pr;
        pr.point_index = static_cast<int>(pi);
        pr.graph = config.graph;
        pr.n = config.ns[pi];
        pr.k = config.k.k_for(pr.n);
        pr.cap = config.cap_for(pr.n);
        pr.trials.resize(static_cast<std::size_t>(config.trials));
        if (config.diag_occupancy || config.diag_leaders || config.diag_trace) {
            pr.diagnostics.resize(static_cast<std::size_t>(config.trials));
        }
        points.push_back(std::move(pr));
    }

    const bool want_diag = config.diag_occupancy || config.diag_leaders || config.diag_trace;
    const std::int64_t total = static_cast<std::int64_t>(points.size()) * config.trials;
    std::atomic<std::int64_t> cursor{0};
    auto worker = [&] {
        for (;;) {
            std::int64_t task = cursor.fetch_add(1, std::memory_order_relaxed);
            if (task >= total) return;
            auto pi = static_cast<std::size_t>(task / config.trials);
            auto ti = static_cast<std::size_t>(task % config.trials);
            PointResult& pr = points[pi];
            GraphTopology g(pr.graph, pr.n);
            SeedSpec seed{config.base_seed, static_cast<std::uint64_t>(pi),
                          static_cast<std::uint64_t>(ti)};
            if (want_diag) {
                pr.diagnostics[ti] =
                    run_diagnostics_trial(g, pr.k, seed, pr.cap, config, pr.trials[ti]);
            } else {
                pr.trials[ti] = run_to_completion(g, pr.k, seed, pr.cap, config.mode);
            }
        }
    };

    unsigned hw = std::thread::hardware_concurrency();
    int workers = config.workers > 0 ? config.workers : static_cast<int>(hw ? hw : 1);
    workers = static_cast<int>(std::min<std::int64_t>(workers, total));
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    for (auto& pr : points) pr.stats = summarize(pr.trials);
    return points;
}

RegimeInfo theorem_regime(double n, double k) {
    if (n < 2 || k < 2) throw std::invalid_argument("theorem_regime: need n >= 2, k >= 2");
    const double ln_n = std::log(n);
    const double omega = std::max(std::log(ln_n), 1.0);  // omega = ln ln n, floored at 1
    const double ln_k = std::max(std::log(k), std::log(2.0));

    RegimeInfo info;
    info.power_prediction = n * n / k;
    if (k >= 50.0 * n * ln_n) {
        info.label = "(e)";
        info.lower_envelope = std::floor(n / 2.0);
        info.upper_envelope = n - 1.0;
    } else if (k > n / (ln_n * ln_n)) {
        info.label = "(d)";
        info.lower_envelope = n / 2.0;
        info.upper_envelope = n * n * ln_n / k;
    } else if (k > omega * ln_n) {
        info.label = "(c)";
        info.lower_envelope = n * n / (k * ln_k * ln_n);
        info.upper_envelope = n * n * ln_n / k;
    } else {
        // (a) and (b) collapsed: the omega-dependent boundary between them has
        // no honest finite-n rendering.
        info.label = "small-k band (a/b)";
        info.lower_envelope = n * n / (omega * k * k * ln_k);
        info.upper_envelope = n * n * omega;
    }
    return info;
}

double fit_scaling_exponent(std::span<const std::pair<double, double>> points) {
    if (points.size() < 3) throw std::domain_error("fit_scaling_exponent: need >= 3 points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [n, xi] : points) {
        if (!(n > 0.0) || !(xi > 0.0)) {
            throw std::domain_error("fit_scaling_exponent: nonpositive value");
        }
        double x = std::log(n), y = std::log(xi);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double m = static_cast<double>(points.size());
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace walkcast
