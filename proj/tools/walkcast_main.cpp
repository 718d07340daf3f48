// walkcast: simulate and analyze the multi-agent random-walk broadcasting
// process on paths and cycles.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "walkcast/analytic.hpp"
#include "walkcast/broadcast.hpp"
#include "walkcast/coupling.hpp"
#include "walkcast/experiments.hpp"
#include "walkcast/report.hpp"
#include "walkcast/topology.hpp"

#include <atomic>

namespace {

using namespace walkcast;

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;

KSpec parse_k_rule(const std::string& rule) {
    auto colon = rule.find(':');
    if (colon == std::string::npos) {
        throw CLI::ValidationError("--k-rule", "expected const:<c>, power:<x> or nlogn:<c>");
    }
    std::string name = rule.substr(0, colon);
    double value = std::stod(rule.substr(colon + 1));
    KSpec k;
    k.value = value;
    if (name == "const") {
        k.rule = KSpec::Rule::Fixed;
    } else if (name == "power") {
        k.rule = KSpec::Rule::Power;
    } else if (name == "nlogn") {
        k.rule = KSpec::Rule::NLogN;
    } else {
        throw CLI::ValidationError("--k-rule", "unknown rule '" + name + "'");
    }
    return k;
}

PropagationMode parse_propagation(const std::string& s) {
    if (s == "relay") return PropagationMode::SwapRelay;
    if (s == "direct") return PropagationMode::DirectOnly;
    throw CLI::ValidationError("--propagation", "expected relay or direct");
}

struct OutputTarget {
    std::ofstream file;
    std::ostream* stream = &std::cout;

    explicit OutputTarget(const std::string& path) {
        if (!path.empty()) {
            file.open(path, std::ios::binary);
            if (!file) throw std::runtime_error("cannot open output file: " + path);
            stream = &file;
        }
    }
    std::ostream& out() { return *stream; }
};

struct SweepOptions {
    std::string graph = "cycle";
    std::vector<int> ns;
    std::optional<int> k;
    std::string k_rule;
    std::int64_t trials = 1;
    std::uint64_t seed = 0;
    std::int64_t cap = 0;
    int workers = 0;
    std::string out_path;
    std::string format = "csv";
    std::vector<std::string> diagnostics;
    std::string propagation = "relay";
};

void add_sweep_flags(CLI::App* cmd, SweepOptions& o, bool multi_n) {
    cmd->add_option("--graph", o.graph, "graph family")
        ->check(CLI::IsMember({"path", "cycle"}))
        ->capture_default_str();
    auto* n_opt = cmd->add_option("--n", o.ns,
                                  multi_n ? "vertex counts (comma list allowed)"
                                          : "vertex count")
                      ->required()
                      ->delimiter(',');
    if (!multi_n) n_opt->expected(1);
    cmd->add_option("--k", o.k, "agent count (>= 2)");
    cmd->add_option("--k-rule", o.k_rule, "k as a function of n: const:<c>, power:<x>, nlogn:<c>");
    cmd->add_option("--trials", o.trials, "trials per (n,k) point")->capture_default_str();
    cmd->add_option("--seed", o.seed, "base seed; all randomness derives from it")
        ->capture_default_str();
    cmd->add_option("--cap", o.cap,
                    "round cap per trial; 0 means the default 100*n^2, which sits above the "
                    "universal n^2*omega upper envelope at desk scales. Trials hitting the cap "
                    "are reported as right-censored (capped=true), not errors.");
    cmd->add_option("--workers", o.workers, "worker threads; 0 = hardware concurrency");
    cmd->add_option("--out", o.out_path, "output file (default: stdout)");
    cmd->add_option("--format", o.format, "jsonl = per-trial records, csv = per-point summary")
        ->check(CLI::IsMember({"jsonl", "csv"}))
        ->capture_default_str();
    cmd->add_option("--diagnostics", o.diagnostics,
                    "per-trial diagnostics: occupancy, leaders, trace")
        ->delimiter(',')
        ->check(CLI::IsMember({"occupancy", "leaders", "trace"}));
    cmd->add_option("--propagation", o.propagation,
                    "within-round message passing: relay (default) or direct")
        ->check(CLI::IsMember({"relay", "direct"}));
}

ExperimentConfig build_config(const SweepOptions& o) {
    ExperimentConfig cfg;
    cfg.graph = parse_graph_name(o.graph);
    cfg.ns = o.ns;
    if (o.k && !o.k_rule.empty()) {
        throw CLI::ValidationError("--k", "give either --k or --k-rule, not both");
    }
    if (o.k) {
        cfg.k = KSpec{KSpec::Rule::Fixed, static_cast<double>(*o.k)};
    } else if (!o.k_rule.empty()) {
        cfg.k = parse_k_rule(o.k_rule);
    } else {
        throw CLI::ValidationError("--k", "one of --k or --k-rule is required");
    }
    cfg.trials = o.trials;
    cfg.base_seed = o.seed;
    cfg.cap = o.cap;
    cfg.workers = o.workers;
    cfg.mode = parse_propagation(o.propagation);
    for (const auto& d : o.diagnostics) {
        if (d == "occupancy") cfg.diag_occupancy = true;
        if (d == "leaders") cfg.diag_leaders = true;
        if (d == "trace") cfg.diag_trace = true;
    }
    return cfg;
}

int run_sweep_like(const SweepOptions& o, bool print_fit) {
    ExperimentConfig cfg = build_config(o);
    std::vector<PointResult> points = run_trials(cfg);
    OutputTarget target(o.out_path);
    if (o.format == "jsonl") {
        write_trials_jsonl(target.out(), cfg.base_seed, points);
    } else {
        write_summary_csv(target.out(), points);
    }
    if (print_fit && points.size() >= 3) {
        std::vector<std::pair<double, double>> fit_points;
        for (const auto& pr : points) {
            if (pr.stats.median && *pr.stats.median > 0.0) {
                fit_points.emplace_back(static_cast<double>(pr.n), *pr.stats.median);
            }
        }
        if (fit_points.size() >= 3) {
            double x_hat = fit_scaling_exponent(fit_points);
            std::cerr << "fitted log-log exponent of median xi vs n: x_hat = " << x_hat
                      << " (acceptance window for the sqrt(n)-agents sweep: [1.35, 1.65])\n";
        }
    }
    return kExitOk;
}

struct CoupleOptions {
    int n = 0;
    int k = 0;
    std::int64_t trials = 1;
    std::uint64_t seed = 0;
    std::int64_t cap = 0;
    int workers = 0;
    std::string out_path;
    std::string propagation = "relay";
};

int run_couple(const CoupleOptions& o) {
    std::int64_t cap = o.cap > 0 ? o.cap : 100LL * (2 * (o.n - 1)) * (2 * (o.n - 1));
    PropagationMode mode = parse_propagation(o.propagation);
    std::vector<CoupledTrial> results(static_cast<std::size_t>(o.trials));
    std::atomic<std::int64_t> cursor{0};
    auto worker = [&] {
        for (;;) {
            std::int64_t ti = cursor.fetch_add(1, std::memory_order_relaxed);
            if (ti >= o.trials) return;
            SeedSpec seed{o.seed, 0, static_cast<std::uint64_t>(ti)};
            results[static_cast<std::size_t>(ti)] = run_coupled(o.n, o.k, seed, cap, mode);
        }
    };
    unsigned hw = std::thread::hardware_concurrency();
    int workers = o.workers > 0 ? o.workers : static_cast<int>(hw ? hw : 1);
    workers = static_cast<int>(std::min<std::int64_t>(workers, o.trials));
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    OutputTarget target(o.out_path);
    std::int64_t comparable = 0, violations = 0;
    for (std::int64_t ti = 0; ti < o.trials; ++ti) {
        const CoupledTrial& t = results[static_cast<std::size_t>(ti)];
        target.out() << coupled_record_json(o.n, o.k, o.seed, ti, t) << '\n';
        if (t.comparable) {
            ++comparable;
            if (t.xi_path > t.xi_cycle) ++violations;
        }
    }
    std::cerr << "coupled trials: " << o.trials << ", comparable: " << comparable
              << ", dominance violations among comparable: " << violations << '\n';
    return violations == 0 ? kExitOk : kExitRuntime;
}

int run_analytic(const std::string& check, const std::string& graph, int n, std::int64_t t) {
    if (check == "reversibility") {
        GraphTopology g(parse_graph_name(graph), n);
        double max_balance = 0.0, max_symmetry = 0.0;
        bool ratio_ok = true;
        for (std::int64_t s = 0; s <= t; ++s) {
            ReversibilityReport rep = check_reversibility(g, s);
            max_balance = std::max(max_balance, rep.max_balance_violation);
            max_symmetry = std::max(max_symmetry, rep.max_symmetry_violation);
            ratio_ok = ratio_ok && rep.ratio_bounds_ok;
        }
        std::cout << "reversibility " << graph << " n=" << n << " t<=" << t
                  << ": max detailed-balance violation = " << max_balance;
        if (parse_graph_name(graph) == GraphKind::Cycle) {
            std::cout << ", max symmetry violation = " << max_symmetry;
        }
        std::cout << ", ratio bounds " << (ratio_ok ? "ok" : "VIOLATED") << '\n';
        bool ok = max_balance <= 1e-12 && max_symmetry <= 1e-12 && ratio_ok;
        return ok ? kExitOk : kExitRuntime;
    }
    if (check == "zwalk-bounds") {
        std::int64_t t_max = t > 0 ? t : 1024;
        bool all_ok = true;
        for (std::int64_t tt = 16; tt <= t_max; tt *= 2) {
            for (bool lazy : {false, true}) {
                std::vector<Rational> dist = z_walk_distribution(lazy, tt);
                auto a_max = static_cast<std::int64_t>(std::sqrt(static_cast<double>(tt)));
                for (std::int64_t a = 1; a <= a_max; ++a) {
                    Rational below = 0, tail = 0;
                    for (std::int64_t j = -(a - 1); j <= a - 1; ++j) {
                        below += dist[static_cast<std::size_t>(j + tt)];
                    }
                    for (std::int64_t j = -a + 1; j <= a; ++j) {
                        tail += dist[static_cast<std::size_t>(j + tt)];
                    }
                    all_ok = all_ok && satisfies_anticoncentration_bound(below, tt, a) &&
                             satisfies_anticoncentration_bound(tail, tt, a);
                }
            }
        }
        std::cout << "z-walk anti-concentration and hitting-tail bounds on t in {16,...,"
                  << t_max << "}: " << (all_ok ? "ok" : "VIOLATED") << '\n';
        return all_ok ? kExitOk : kExitRuntime;
    }
    if (check == "reflection") {
        std::int64_t t_max = t > 0 ? t : 256;
        bool all_ok = true;
        for (std::int64_t tt = 1; tt <= t_max; tt *= 2) {
            for (std::int64_t a = 1; a <= std::min<std::int64_t>(tt, 16); ++a) {
                Rational via_dist = hitting_tail(tt, a, false);
                Rational via_pmf = 0;
                for (std::int64_t j = -a + 1; j <= a; ++j) {
                    via_pmf += z_walk_point_mass({false, tt, j});
                }
                all_ok = all_ok && via_dist == via_pmf;
            }
        }
        std::cout << "reflection identity (non-lazy), t <= " << t_max << ": "
                  << (all_ok ? "ok" : "VIOLATED") << '\n';
        return all_ok ? kExitOk : kExitRuntime;
    }
    throw CLI::ValidationError("--check", "unknown check '" + check + "'");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"walkcast: broadcasting time of randomly walking agents on paths and cycles"};
    app.require_subcommand(1);

    SweepOptions sim_opts, sweep_opts;
    auto* simulate = app.add_subcommand("simulate", "run trials at a single (graph, n, k) point");
    add_sweep_flags(simulate, sim_opts, false);

    auto* sweep = app.add_subcommand("sweep", "run trials over a list of n with a k rule");
    add_sweep_flags(sweep, sweep_opts, true);

    CoupleOptions couple_opts;
    auto* couple = app.add_subcommand(
        "couple", "run the coupled cycle/path processes and record dominance");
    couple->add_option("--n", couple_opts.n, "path size n; the cycle has 2(n-1) vertices")
        ->required()
        ->check(CLI::Range(3, 1 << 28));
    couple->add_option("--k", couple_opts.k, "agent count")->required()->check(CLI::Range(2, 1 << 28));
    couple->add_option("--trials", couple_opts.trials, "coupled trials")->capture_default_str();
    couple->add_option("--seed", couple_opts.seed, "base seed")->capture_default_str();
    couple->add_option("--cap", couple_opts.cap, "round cap; 0 = 100*(2(n-1))^2");
    couple->add_option("--workers", couple_opts.workers, "worker threads; 0 = hardware concurrency");
    couple->add_option("--out", couple_opts.out_path, "output file (default: stdout)");
    couple->add_option("--propagation", couple_opts.propagation, "relay or direct")
        ->check(CLI::IsMember({"relay", "direct"}));

    std::string an_check, an_graph = "path";
    int an_n = 16;
    std::int64_t an_t = 0;
    auto* analytic = app.add_subcommand("analytic", "exact, simulation-free checks");
    analytic->add_option("--check", an_check, "reversibility, zwalk-bounds or reflection")
        ->required()
        ->check(CLI::IsMember({"reversibility", "zwalk-bounds", "reflection"}));
    analytic->add_option("--graph", an_graph, "graph family (reversibility only)")
        ->check(CLI::IsMember({"path", "cycle"}));
    analytic->add_option("--n", an_n, "vertex count (reversibility only)");
    analytic->add_option("--t", an_t, "horizon");

    std::string or_graph = "path";
    int or_n = 2, or_k = 2;
    std::string or_prop = "relay";
    auto* oracle = app.add_subcommand("oracle", "exact E[xi] by absorbing-chain enumeration");
    oracle->add_option("--graph", or_graph)->check(CLI::IsMember({"path", "cycle"}));
    oracle->add_option("--n", or_n, "vertex count (<= 6)")->required();
    oracle->add_option("--k", or_k, "agent count (<= 3)")->required();
    oracle->add_option("--propagation", or_prop)->check(CLI::IsMember({"relay", "direct"}));

    double rg_n = 0, rg_k = 0;
    auto* regime = app.add_subcommand("regime", "classify (n,k) into the asymptotic bands");
    regime->add_option("--n", rg_n)->required();
    regime->add_option("--k", rg_k)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (*simulate) return run_sweep_like(sim_opts, false);
        if (*sweep) return run_sweep_like(sweep_opts, true);
        if (*couple) return run_couple(couple_opts);
        if (*analytic) return run_analytic(an_check, an_graph, an_n, an_t);
        if (*oracle) {
            GraphTopology g(parse_graph_name(or_graph), or_n);
            Rational e = expected_xi_oracle(g, or_k, parse_propagation(or_prop));
            std::cout << "E[xi(" << or_graph << " n=" << or_n << ", k=" << or_k << ")] = " << e
                      << " ~ " << static_cast<double>(e) << '\n';
            return kExitOk;
        }
        if (*regime) {
            RegimeInfo info = theorem_regime(rg_n, rg_k);
            std::cout << "regime " << info.label << ": envelope [" << info.lower_envelope << ", "
                      << info.upper_envelope << "], power-law prediction n^2/k = "
                      << info.power_prediction << '\n';
            return kExitOk;
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::domain_error& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "runtime error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitConfig;
}
