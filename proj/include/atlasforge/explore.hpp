#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "atlasforge/metrics.hpp"

namespace atlasforge {

inline constexpr std::uint32_t kMaxUniverse = 20;
inline constexpr std::uint32_t kSelfCheckMaxUniverse = 14;

struct RunOptions {
    std::filesystem::path out_dir = "atlas_out";
    /// Compare the parallel atlas against enumerate_reachable after the run. Defaults to on
    /// for m <= kSelfCheckMaxUniverse.
    std::optional<bool> self_check;
};

/// Runs one parallel exploration: `cores` runtime workers, one AtlasBuilder, one Writer.
/// Blocks until Halt and the writer has drained, then audits out_dir. Throws on any
/// protocol, atlas or I/O failure (including a run that stalls without Halt).
RunReport run_explore(const ExploreParams& params, unsigned cores, const RunOptions& options);

/// True iff the report's output audit passed and its self-check (if it ran) agreed.
bool run_succeeded(const RunReport& report);

/// Structural comparison by signature; ids are irrelevant. On mismatch, `detail` names one
/// differing signature or edge.
bool atlas_matches(const Atlas& atlas, const ReferenceAtlas& reference, std::string* detail = nullptr);

/// atlas.idx rows the parallel run must produce for this domain: canonical ids, parents, and
/// witness counts predicted from the duplicate factor.
std::vector<IndexRow> reference_index_rows(const DomainConfig& config, const ReferenceAtlas& reference);

struct OracleReport {
    ReferenceAtlas reference;
    double wall_time_seconds = 0;
    std::uint64_t checksum = 0;  // xor of every sample checksum, keeps the busy-work observable
};

/// Sequential baseline: enumerate_reachable plus sample_region on every node, timed; writes
/// atlas.idx into out_dir when given.
OracleReport run_oracle(const DomainConfig& config, const std::optional<std::filesystem::path>& out_dir);

struct SweepPlan {
    ExploreParams base;
    std::vector<unsigned> cores{1};
    std::vector<std::uint64_t> cost_units;  // empty: use base.domain.cost_units_per_sample
    std::uint32_t repeats = 1;
    std::uint32_t max_samplers = 0;  // 0: one sampler per core
    RunOptions options;
    std::optional<std::filesystem::path> chart;
};

struct SweepCell {
    std::uint64_t cost_units = 0;
    unsigned cores = 1;
    std::vector<RunReport> runs;
    AggregateReport aggregate;
    double norm_ratio = 1.0;
};

struct SweepResult {
    std::vector<SweepCell> cells;
    bool all_succeeded = true;
};

/// cost x cores x repeats. Core counts are run in ascending order with 1 added if absent, so
/// every row can be normalized against the one-core mean. Rows are flushed to `csv` as they
/// complete; a failing run throws with the partial CSV already written.
SweepResult run_sweep(const SweepPlan& plan, std::ostream& csv,
                      const std::function<void(const RunReport&)>& on_run = {});

}  // namespace atlasforge
