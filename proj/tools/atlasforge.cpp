// atlasforge: parallel atlas exploration, sequential oracle and core-count sweeps.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "atlasforge/explore.hpp"

namespace {

using namespace atlasforge;

enum class LogLevel { Off, Summary, Events };

LogLevel log_level_from_env() {
    const char* raw = std::getenv("ATLASFORGE_LOG");
    if (!raw) return LogLevel::Off;
    const std::string v = raw;
    if (v == "events" || v == "2") return LogLevel::Events;
    if (v == "info" || v == "1") return LogLevel::Summary;
    return LogLevel::Off;
}

std::vector<RegionSignature> parse_roots(const std::string& text) {
    std::vector<RegionSignature> roots;
    std::size_t start = 0;
    for (;;) {
        const std::size_t end = text.find(';', start);
        roots.push_back(RegionSignature::parse(text.substr(start, end == std::string::npos ? end : end - start)));
        if (end == std::string::npos) break;
        start = end + 1;
    }
    return roots;
}

void print_summary(std::ostream& out, const RunReport& r) {
    out << "cores=" << r.cores << " policy=" << to_string(r.params.policy) << " nodes=" << r.nodes_total
        << " edges=" << r.edges_total << " witnesses=" << r.witnesses_total << " wall_s=" << r.wall_time_seconds
        << " rate=" << (r.wall_time_seconds > 0 ? node_discovery_rate(r) : 0.0) << " drops=" << r.drops
        << " output=" << (r.output.ok ? "ok" : "BAD");
    if (r.self_check_ran) out << " self_check=" << (r.self_check_ok ? "ok" : "MISMATCH");
    out << '\n';
    if (!r.output.ok) out << "  output problem: " << r.output.first_problem << '\n';
    if (!r.self_check_ok) out << "  self-check: " << r.self_check_detail << '\n';
}

void log_run(LogLevel level, const RunReport& r) {
    if (level == LogLevel::Off) return;
    std::cerr << "[atlasforge] ";
    print_summary(std::cerr, r);
    std::cerr << "[atlasforge] messages:";
    for (const auto& [kind, n] : r.messages_by_kind) std::cerr << ' ' << kind << '=' << n;
    std::cerr << '\n';
    if (level == LogLevel::Events) write_event_log(std::cerr, r.events);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Parallel actor-based exploration of constraint-lattice atlases"};
    app.set_config("--config", "", "key=value config file; command-line flags take precedence");
    app.require_subcommand(1);

    std::uint32_t m = 10;
    std::string roots_text = "-";
    std::uint32_t samples = 8;
    std::uint32_t dup_factor = 2;
    std::vector<std::uint64_t> cost_units{1000};
    std::uint64_t seed = 1;
    std::vector<unsigned> cores{1};
    std::string policy_text = "bfs";
    std::uint32_t max_samplers = 0;
    std::string out_dir = "atlas_out";
    std::string metrics_out;
    std::uint32_t repeats = 1;
    bool no_self_check = false;

    app.add_option("--m", m, "Constraint universe size (regions are subsets of 0..m-1)")
        ->check(CLI::Range(0U, kMaxUniverse))
        ->capture_default_str();
    app.add_option("--roots", roots_text, "Root signatures, ';'-separated, ids ','-separated; '-' is the empty set")
        ->capture_default_str();
    app.add_option("--samples", samples, "Sample points per region")->check(CLI::PositiveNumber)->capture_default_str();
    app.add_option("--dup-factor", dup_factor, "Extra re-emissions of each boundary event")->capture_default_str();
    app.add_option("--cost-units", cost_units, "Busy-work iterations per sample point (sweep: comma list)")
        ->delimiter(',')
        ->capture_default_str();
    app.add_option("--seed", seed, "Workload seed")->capture_default_str();
    app.add_option("--cores", cores, "Runtime worker threads (sweep: comma list)")
        ->delimiter(',')
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--policy", policy_text, "Frontier policy")
        ->check(CLI::IsMember({"bfs", "dfs"}, CLI::ignore_case))
        ->capture_default_str();
    app.add_option("--max-samplers", max_samplers, "Concurrent sampler cap (default: cores)");
    app.add_option("--out-dir", out_dir, "Output directory for node files and atlas.idx")->capture_default_str();
    app.add_option("--metrics-out", metrics_out, "CSV metrics path (sweep default: sweep.csv)");
    app.add_option("--repeats", repeats, "Repeats per configuration")->check(CLI::PositiveNumber)->capture_default_str();
    app.add_flag("--no-self-check", no_self_check, "Skip the post-run comparison against the sequential oracle");

    auto* explore_cmd = app.add_subcommand("explore", "Run the parallel exploration");
    auto* oracle_cmd = app.add_subcommand("oracle", "Run the sequential reference enumeration");
    auto* sweep_cmd = app.add_subcommand("sweep", "Sweep core counts and costs, writing CSV and an SVG chart");
    for (auto* sub : {explore_cmd, oracle_cmd, sweep_cmd}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    ExploreParams params;
    try {
        params.domain.m = m;
        params.domain.roots = parse_roots(roots_text);
        params.domain.samples_per_region = samples;
        params.domain.duplicate_factor = dup_factor;
        params.domain.cost_units_per_sample = cost_units.front();
        params.domain.seed = seed;
        params.policy = parse_policy(policy_text);
        params.domain.validate();
    } catch (const std::exception& e) {
        std::cerr << "atlasforge: " << e.what() << '\n';
        return 2;
    }

    const LogLevel level = log_level_from_env();
    try {
        RunOptions options;
        options.out_dir = out_dir;
        if (no_self_check) options.self_check = false;

        if (*oracle_cmd) {
            const OracleReport r = run_oracle(params.domain, std::filesystem::path(out_dir));
            std::cout << "oracle nodes=" << r.reference.signatures.size() << " edges=" << r.reference.edges.size()
                      << " wall_s=" << r.wall_time_seconds << " checksum=" << std::hex << r.checksum << std::dec
                      << '\n';
            return 0;
        }

        if (*explore_cmd) {
            if (cores.size() != 1 || cost_units.size() != 1) {
                std::cerr << "explore takes a single --cores and --cost-units value (use sweep for lists)\n";
                return 2;
            }
            params.max_samplers = max_samplers ? max_samplers : cores.front();
            std::ofstream csv;
            if (!metrics_out.empty()) {
                csv.open(metrics_out);
                if (!csv) throw std::runtime_error("cannot open " + metrics_out);
                csv << csv_header() << '\n';
            }
            std::vector<RunReport> runs;
            bool ok = true;
            for (std::uint32_t r = 0; r < repeats; ++r) {
                RunReport report = run_explore(params, cores.front(), options);
                print_summary(std::cout, report);
                log_run(level, report);
                ok = ok && run_succeeded(report);
                if (csv.is_open()) csv << csv_row(report, r, 1.0) << '\n' << std::flush;
                runs.push_back(std::move(report));
            }
            if (repeats > 1) {
                const AggregateReport a = aggregate_runs(runs);
                std::cout << "mean wall_s=" << a.wall_seconds.mean << " sd=" << a.wall_seconds.stddev
                          << " mean rate=" << a.rate.mean << '\n';
                if (csv.is_open()) csv << csv_aggregate_row(a, 1.0) << '\n';
            }
            return ok ? 0 : 1;
        }

        SweepPlan plan;
        plan.base = params;
        plan.cores = cores;
        plan.cost_units = cost_units;
        plan.repeats = repeats;
        plan.max_samplers = max_samplers;
        plan.options = options;
        const std::string csv_path = metrics_out.empty() ? "sweep.csv" : metrics_out;
        plan.chart = std::filesystem::path(csv_path).replace_extension(".svg");
        std::ofstream csv(csv_path);
        if (!csv) throw std::runtime_error("cannot open " + csv_path);
        const SweepResult result = run_sweep(plan, csv, [&](const RunReport& r) {
            print_summary(std::cout, r);
            log_run(level, r);
        });
        std::cout << "\ncost_units cores runs mean_wall_s sd_wall_s norm_ratio\n";
        for (const auto& cell : result.cells) {
            std::cout << cell.cost_units << ' ' << cell.cores << ' ' << cell.aggregate.runs << ' '
                      << cell.aggregate.wall_seconds.mean << ' ' << cell.aggregate.wall_seconds.stddev << ' '
                      << cell.norm_ratio << '\n';
        }
        std::cout << "csv: " << csv_path << "\nchart: " << plan.chart->string() << '\n';
        return result.all_succeeded ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "atlasforge: fatal: " << e.what() << '\n';
        return 3;
    }
}
