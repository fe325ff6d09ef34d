#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "atlasforge/protocol.hpp"

namespace atlasforge {

namespace fs = std::filesystem;

class WriterError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct OutputLayout {
    fs::path out_dir;

    fs::path index_path() const { return out_dir / "atlas.idx"; }
    fs::path node_path(NodeId id) const { return out_dir / ("node_" + std::to_string(id) + ".samples"); }
    fs::path failed_marker() const { return out_dir / "FAILED"; }
};

/// One atlas.idx row: `<id>\t<sig>\t<dim>\t<parents>\t<witness_count>`.
struct IndexRow {
    NodeId id = 0;
    RegionSignature signature;
    std::uint32_t dimension = 0;
    std::vector<NodeId> parents;
    std::uint64_t witness_count = 0;
};

std::vector<IndexRow> index_rows(const Atlas& atlas);
/// Rows must already be in ascending id order.
std::string format_index(std::span<const IndexRow> rows);

/// `# sig=<ids> dim=<d> count=<n>`
std::string node_header(const RegionSignature& sig, std::uint32_t dim, std::size_t count);
/// `<point_id> <checksum as 16 lowercase hex digits>`
std::string sample_line(const SamplePoint& point);
/// `W <parent_id> <source_point_id>`
std::string witness_line(const msg::Witness& witness);

struct WriterStats {
    std::uint64_t sample_files = 0;
    std::uint64_t sample_lines = 0;
    std::uint64_t witness_lines = 0;
    std::uint64_t retries = 0;
};

/// Serial owner of every file under out_dir. Not thread-safe; the writer actor is its only user.
///
/// Sample files are truncated when a region's samples arrive. Witness lines that reached the
/// writer before the samples are kept in memory and re-appended after the rewrite, so the
/// final file always holds every witness in arrival order.
class AtlasWriter {
public:
    /// Creates out_dir and removes output left by a previous run (node_*.samples, atlas.idx, FAILED).
    explicit AtlasWriter(fs::path out_dir);

    void write_sample_points(const msg::WriteSamplePoints& message);

    /// Renames node files from run-time ids to the canonical ids of `atlas` (rewriting witness
    /// parent ids to match) and writes atlas.idx. `old_to_new` is indexed by run-time id.
    void write_index(const Atlas& atlas, std::span<const NodeId> old_to_new);

    const OutputLayout& layout() const noexcept { return layout_; }
    const WriterStats& stats() const noexcept { return stats_; }

private:
    struct NodeFile {
        bool samples_written = false;
        std::vector<msg::Witness> early_witnesses;
    };

    template <class Op>
    void with_retry(const std::string& what, Op&& op);
    void write_file(const fs::path& path, const std::string& content, bool append);

    OutputLayout layout_;
    std::unordered_map<NodeId, NodeFile> files_;
    WriterStats stats_;
    std::atomic<bool> in_flight_{false};
};

/// Writes atlas.idx content for `rows` to `path` (used by the sequential oracle run).
void write_index_file(const fs::path& path, std::span<const IndexRow> rows);

class WriterActor final : public actor::Actor<Message> {
public:
    explicit WriterActor(fs::path out_dir) : writer_(std::move(out_dir)) {}
    void receive(ActorContext& ctx, MessageEnvelope envelope) override;

private:
    AtlasWriter writer_;
};

/// Post-run audit of out_dir against the final (canonical) atlas.
struct OutputCheck {
    bool ok = true;
    bool index_present = false;
    std::size_t files_present = 0;
    std::size_t files_missing = 0;
    std::uint64_t data_lines = 0;
    std::uint64_t witness_lines = 0;
    std::string first_problem;
};

OutputCheck verify_output(const fs::path& out_dir, const Atlas& atlas, std::uint32_t samples_per_region);

}  // namespace atlasforge
