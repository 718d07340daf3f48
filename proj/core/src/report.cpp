#include "walkcast/report.hpp"

#include <cstdio>
#include <stdexcept>

#include <json.hpp>

namespace walkcast {

namespace {

using nlohmann::json;

std::string format_double(double x) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

std::string csv_opt(const std::optional<double>& v) { return v ? format_double(*v) : "NA"; }

}  // namespace

std::string graph_name(GraphKind kind) {
    return kind == GraphKind::Path ? "path" : "cycle";
}

GraphKind parse_graph_name(const std::string& name) {
    if (name == "path") return GraphKind::Path;
    if (name == "cycle") return GraphKind::Cycle;
    throw std::invalid_argument("unknown graph kind: " + name);
}

std::string trial_record_json(GraphKind graph, int n, int k, std::uint64_t seed, int point,
                              std::int64_t trial, const TrialResult& result,
                              const TrialDiagnostics* diag) {
    json rec;
    rec["schema"] = 1;
    rec["graph"] = graph_name(graph);
    rec["n"] = n;
    rec["k"] = k;
    rec["seed"] = seed;
    rec["point"] = point;
    rec["trial"] = trial;
    rec["xi"] = result.xi;
    rec["capped"] = result.capped;
    json pe = json::object();
    for (const auto& [phase, round] : result.phase_entry) pe[std::to_string(phase)] = round;
    rec["phase_entry"] = pe;
    if (diag && diag->any()) {
        json d = json::object();
        if (diag->occupancy) {
            d["occupancy"] = {{"min", diag->occupancy->min_count},
                              {"max", diag->occupancy->max_count}};
        }
        if (diag->leader_entry_times) d["leader_entry_times"] = *diag->leader_entry_times;
        if (diag->trace) {
            json tr = json::array();
            for (const auto& ev : *diag->trace) {
                tr.push_back({{"round", ev.round},
                              {"phase", ev.phase},
                              {"colocation_groups", ev.colocation_groups},
                              {"crossed_edges", ev.crossed_edges}});
            }
            d["trace"] = tr;
        }
        rec["diagnostics"] = d;
    }
    return rec.dump();
}

void write_trials_jsonl(std::ostream& out, std::uint64_t seed,
                        std::span<const PointResult> points) {
    for (const auto& pr : points) {
        for (std::size_t ti = 0; ti < pr.trials.size(); ++ti) {
            const TrialDiagnostics* diag =
                ti < pr.diagnostics.size() ? &pr.diagnostics[ti] : nullptr;
            out << trial_record_json(pr.graph, pr.n, pr.k, seed, pr.point_index,
                                     static_cast<std::int64_t>(ti), pr.trials[ti], diag)
                << '\n';
        }
    }
}

void write_summary_csv(std::ostream& out, std::span<const PointResult> points) {
    out << "schema,graph,n,k,trials,mean,median,q05,q25,q75,q95,se,capped_count\n";
    for (const auto& pr : points) {
        const SummaryStats& s = pr.stats;
        out << 1 << ',' << graph_name(pr.graph) << ',' << pr.n << ',' << pr.k << ','
            << s.trials << ',' << format_double(s.mean) << ',' << csv_opt(s.median) << ','
            << csv_opt(s.q05) << ',' << csv_opt(s.q25) << ',' << csv_opt(s.q75) << ','
            << csv_opt(s.q95) << ',' << format_double(s.se) << ',' << s.capped_count << '\n';
    }
}

std::string coupled_record_json(int n, int k, std::uint64_t seed, std::int64_t trial,
                                const CoupledTrial& result) {
    json rec;
    rec["schema"] = 1;
    rec["n"] = n;
    rec["k"] = k;
    rec["seed"] = seed;
    rec["trial"] = trial;
    rec["xi_cycle"] = result.xi_cycle;
    rec["xi_path"] = result.xi_path;
    rec["capped_cycle"] = result.capped_cycle;
    rec["capped_path"] = result.capped_path;
    rec["unusual_count"] = result.unusual_count;
    rec["comparable"] = result.comparable;
    rec["containment_ok"] = result.containment_ok;
    return rec.dump();
}

}  // namespace walkcast
