#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "atlasforge/event_log.hpp"
#include "atlasforge/protocol.hpp"
#include "atlasforge/writer.hpp"

namespace atlasforge {

struct TimelinePoint {
    double elapsed_seconds = 0;
    std::uint64_t nodes = 0;
};

struct RunReport {
    ExploreParams params;
    unsigned cores = 1;
    std::string config_hash;
    double wall_time_seconds = 0;
    std::uint64_t nodes_total = 0;
    std::uint64_t edges_total = 0;
    std::uint64_t witnesses_total = 0;
    std::vector<TimelinePoint> discovery_timeline;
    std::map<std::string, std::uint64_t> messages_by_kind;
    std::uint64_t drops = 0;

    EventLog events;
    std::shared_ptr<const Atlas> atlas;  // canonical ids
    OutputCheck output;
    bool self_check_ran = false;
    bool self_check_ok = true;
    std::string self_check_detail;
};

/// Hex FNV-1a digest of everything that defines the workload except the core count and
/// sampler cap, so that runs of one sweep cell share a hash.
std::string config_hash(const ExploreParams& params);

/// Cumulative node count sampled every `bucket_seconds` from start to end (inclusive).
std::vector<TimelinePoint> discovery_timeline(const EventLog& log, std::int64_t start_ns, std::int64_t end_ns,
                                              double bucket_seconds = 0.1);

/// nodes_total / wall_time_seconds; throws std::domain_error for a non-positive wall time.
double node_discovery_rate(const RunReport& report);

/// Mean wall time at each core count divided by the mean at one core.
/// Throws std::invalid_argument when configs differ or there is no one-core baseline.
std::map<unsigned, double> normalized_wall_time(std::span<const RunReport> reports);

struct MetricSummary {
    double mean = 0;
    double stddev = 0;  // sample standard deviation; 0 for a single value
    std::size_t count = 0;
};

MetricSummary summarize(std::span<const double> values);

struct AggregateReport {
    std::string config_hash;
    unsigned cores = 1;
    QueuePolicy policy = QueuePolicy::BFS;
    std::size_t runs = 0;
    MetricSummary wall_seconds;
    MetricSummary nodes;
    MetricSummary edges;
    MetricSummary witnesses;
    MetricSummary rate;
};

/// Repeats of one configuration. Throws std::invalid_argument for an empty span or mixed configs.
AggregateReport aggregate_runs(std::span<const RunReport> reports);

// CSV: config_hash,cores,policy,run_idx,wall_s,nodes,edges,witnesses,rate,norm_ratio
std::string csv_header();
std::string csv_row(const RunReport& report, std::size_t run_idx, double norm_ratio);
/// run_idx column is "mean"; other columns hold means.
std::string csv_aggregate_row(const AggregateReport& aggregate, double norm_ratio);

struct ChartSeries {
    std::string label;
    std::vector<std::pair<unsigned, double>> points;  // (cores, normalized wall time)
};

/// Minimal SVG line chart of normalized wall time against core count.
void write_svg_chart(const std::filesystem::path& path, std::span<const ChartSeries> series);

}  // namespace atlasforge
