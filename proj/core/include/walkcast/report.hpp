#pragma once

#include <ostream>
#include <span>
#include <string>

#include "walkcast/coupling.hpp"
#include "walkcast/experiments.hpp"

namespace walkcast {

std::string graph_name(GraphKind kind);
GraphKind parse_graph_name(const std::string& name);

/// One JSON-lines record per trial; schema 1:
/// {"schema":1,"graph":...,"n":...,"k":...,"seed":...,"point":...,"trial":...,
///  "xi":...,"capped":...,"phase_entry":{...},"diagnostics":{...}?}
std::string trial_record_json(GraphKind graph, int n, int k, std::uint64_t seed, int point,
                              std::int64_t trial, const TrialResult& result,
                              const TrialDiagnostics* diag = nullptr);

void write_trials_jsonl(std::ostream& out, std::uint64_t seed,
                        std::span<const PointResult> points);

/// Summary CSV, schema 1; header:
/// schema,graph,n,k,trials,mean,median,q05,q25,q75,q95,se,capped_count
/// Censored quantiles are written as NA.
void write_summary_csv(std::ostream& out, std::span<const PointResult> points);

/// Coupled-trial record, schema 1.
std::string coupled_record_json(int n, int k, std::uint64_t seed, std::int64_t trial,
                                const CoupledTrial& result);

}  // namespace walkcast
