#include "atlasforge/explore.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <ostream>
#include <stdexcept>

#include "atlasforge/atlas_builder.hpp"

namespace atlasforge {

RunReport run_explore(const ExploreParams& params, unsigned cores, const RunOptions& options) {
    if (cores == 0) throw std::invalid_argument("cores must be >= 1");
    params.domain.validate();
    auto shared_params = std::make_shared<const ExploreParams>(params);
    auto outcome = std::make_shared<BuilderOutcome>();

    actor::RuntimeStats stats;
    {
        ActorSystem system(cores);
        ActorRef writer = system.spawn<WriterActor>(options.out_dir);
        ActorRef builder = system.spawn<AtlasBuilderActor>(writer, params.max_samplers, outcome);
        system.send(builder, msg::Start{shared_params});
        system.await_quiescent();
        stats = system.stats();
    }
    if (!outcome->halted) throw InconsistencyError("exploration went quiescent without Halt");

    RunReport report;
    report.params = params;
    report.cores = cores;
    report.config_hash = config_hash(params);
    report.wall_time_seconds = static_cast<double>(outcome->end_ns - outcome->start_ns) * 1e-9;
    report.atlas = outcome->atlas;
    report.nodes_total = report.atlas->size();
    report.edges_total = report.atlas->edge_count();
    report.witnesses_total = report.atlas->total_witnesses();
    report.discovery_timeline = discovery_timeline(outcome->events, outcome->start_ns, outcome->end_ns);
    for (std::size_t k = 0; k < stats.sent_by_kind.size(); ++k) {
        report.messages_by_kind[std::string(message_kind_name(k))] = stats.sent_by_kind[k];
    }
    report.drops = stats.dropped;
    report.events = std::move(outcome->events);
    report.output = verify_output(options.out_dir, *report.atlas, params.domain.samples_per_region);

    const bool check = options.self_check.value_or(params.domain.m <= kSelfCheckMaxUniverse);
    if (check) {
        report.self_check_ran = true;
        report.self_check_ok = atlas_matches(*report.atlas, enumerate_reachable(params.domain), &report.self_check_detail);
    }
    return report;
}

bool run_succeeded(const RunReport& report) { return report.output.ok && report.self_check_ok; }

bool atlas_matches(const Atlas& atlas, const ReferenceAtlas& reference, std::string* detail) {
    auto fail = [&](std::string why) {
        if (detail) *detail = std::move(why);
        return false;
    };
    if (atlas.size() != reference.signatures.size()) {
        return fail("node count " + std::to_string(atlas.size()) + " vs oracle " +
                    std::to_string(reference.signatures.size()));
    }
    if (atlas.edge_count() != reference.edges.size()) {
        return fail("edge count " + std::to_string(atlas.edge_count()) + " vs oracle " +
                    std::to_string(reference.edges.size()));
    }
    for (const auto& sig : reference.signatures) {
        if (!atlas.find(sig)) return fail("oracle region {" + sig.to_string() + "} missing");
    }
    for (const auto& [parent, child] : reference.edges) {
        const auto& p = atlas.node(*atlas.find(parent));
        const NodeId c = *atlas.find(child);
        if (!std::binary_search(p.child_ids.begin(), p.child_ids.end(), c)) {
            return fail("oracle edge {" + parent.to_string() + "} -> {" + child.to_string() + "} missing");
        }
    }
    return true;
}

std::vector<IndexRow> reference_index_rows(const DomainConfig& config, const ReferenceAtlas& reference) {
    std::vector<RegionSignature> order(reference.signatures.begin(), reference.signatures.end());
    std::sort(order.begin(), order.end(), canonical_less);
    std::map<RegionSignature, NodeId> ids;
    for (std::size_t i = 0; i < order.size(); ++i) ids.emplace(order[i], static_cast<NodeId>(i));

    std::vector<IndexRow> rows(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        rows[i].id = static_cast<NodeId>(i);
        rows[i].signature = order[i];
        rows[i].dimension = dimension_of(config, order[i]);
    }
    for (const auto& [parent, child] : reference.edges) rows[ids.at(child)].parents.push_back(ids.at(parent));
    const std::uint64_t copies = std::uint64_t{config.duplicate_factor} + 1;
    for (auto& row : rows) {
        std::sort(row.parents.begin(), row.parents.end());
        const bool is_root = std::find(config.roots.begin(), config.roots.end(), row.signature) != config.roots.end();
        // Every incoming boundary event after the first discovery is a rediscovery.
        row.witness_count = copies * row.parents.size() - (is_root ? 0 : 1);
    }
    return rows;
}

OracleReport run_oracle(const DomainConfig& config, const std::optional<std::filesystem::path>& out_dir) {
    config.validate();
    OracleReport report;
    const auto t0 = std::chrono::steady_clock::now();
    report.reference = enumerate_reachable(config);
    for (const auto& sig : report.reference.signatures) {
        for (const auto& p : sample_region(config, sig, node_seed(config.seed, sig)).sample_points) {
            report.checksum ^= p.checksum;
        }
    }
    report.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (out_dir) {
        std::filesystem::create_directories(*out_dir);
        write_index_file(*out_dir / "atlas.idx", reference_index_rows(config, report.reference));
    }
    return report;
}

SweepResult run_sweep(const SweepPlan& plan, std::ostream& csv, const std::function<void(const RunReport&)>& on_run) {
    if (plan.cores.empty()) throw std::invalid_argument("sweep needs at least one core count");
    if (plan.repeats == 0) throw std::invalid_argument("repeats must be >= 1");
    std::vector<unsigned> cores = plan.cores;
    if (std::find(cores.begin(), cores.end(), 1U) == cores.end()) cores.push_back(1);
    std::sort(cores.begin(), cores.end());
    cores.erase(std::unique(cores.begin(), cores.end()), cores.end());
    std::vector<std::uint64_t> costs = plan.cost_units;
    if (costs.empty()) costs.push_back(plan.base.domain.cost_units_per_sample);

    SweepResult result;
    std::vector<ChartSeries> series;
    csv << csv_header() << '\n' << std::flush;
    for (std::uint64_t cost : costs) {
        double baseline = 0;
        ChartSeries line{"cost=" + std::to_string(cost), {}};
        for (unsigned p : cores) {
            if (p == 0) throw std::invalid_argument("cores must be >= 1");
            ExploreParams params = plan.base;
            params.domain.cost_units_per_sample = cost;
            params.max_samplers = plan.max_samplers ? plan.max_samplers : p;
            SweepCell cell;
            cell.cost_units = cost;
            cell.cores = p;
            for (std::uint32_t r = 0; r < plan.repeats; ++r) {
                RunReport report = run_explore(params, p, plan.options);
                if (!run_succeeded(report)) result.all_succeeded = false;
                const double ratio = p == 1 ? 1.0 : report.wall_time_seconds / baseline;
                csv << csv_row(report, r, ratio) << '\n' << std::flush;
                if (on_run) on_run(report);
                report.events.clear();
                report.events.shrink_to_fit();
                cell.runs.push_back(std::move(report));
            }
            cell.aggregate = aggregate_runs(cell.runs);
            if (p == 1) baseline = cell.aggregate.wall_seconds.mean;
            cell.norm_ratio = p == 1 ? 1.0 : cell.aggregate.wall_seconds.mean / baseline;
            csv << csv_aggregate_row(cell.aggregate, cell.norm_ratio) << '\n' << std::flush;
            line.points.emplace_back(p, cell.norm_ratio);
            result.cells.push_back(std::move(cell));
        }
        series.push_back(std::move(line));
    }
    if (plan.chart) write_svg_chart(*plan.chart, series);
    return result;
}

}  // namespace atlasforge
