#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "atlasforge/signature.hpp"

namespace atlasforge {

enum class NodeStatus : std::uint8_t { Queued, Sampling, Complete };

std::string_view to_string(NodeStatus status) noexcept;

struct AtlasNode {
    NodeId id = 0;
    RegionSignature signature;
    std::uint32_t dimension = 0;
    NodeStatus status = NodeStatus::Queued;
    std::vector<NodeId> parent_ids;  // ascending, unique
    std::vector<NodeId> child_ids;   // ascending, unique
    std::uint64_t witness_count = 0;
};

struct InsertResult {
    NodeId id;
    bool was_new;
};

/// The roadmap: regions keyed by signature, with parent/child edges.
///
/// Ids are dense and assigned in insertion order. The atlas is not thread-safe;
/// a single owner (the builder) mutates it.
class Atlas {
public:
    /// Returns the existing node (bumping its witness count) or appends a new Queued node.
    /// A dimension that disagrees with the stored node is an InconsistencyError.
    InsertResult find_or_insert(const RegionSignature& sig, std::uint32_t dimension);

    /// Records parent -> child. Idempotent. The child must extend the parent by exactly one
    /// constraint and sit one dimension lower.
    void add_edge(NodeId parent, NodeId child);

    /// Queued -> Sampling -> Complete; anything else throws InconsistencyError.
    void mark(NodeId id, NodeStatus next);

    std::optional<NodeId> find(const RegionSignature& sig) const;
    const AtlasNode& node(NodeId id) const;
    const std::vector<AtlasNode>& nodes() const noexcept { return nodes_; }
    std::size_t size() const noexcept { return nodes_.size(); }
    std::size_t edge_count() const noexcept { return edges_; }
    std::uint64_t total_witnesses() const noexcept;

    /// Copy of this atlas with ids renumbered by canonical_less on signatures, so that two
    /// runs that discover the same regions in different orders agree on every id.
    /// old_to_new receives the mapping indexed by the old id.
    Atlas canonical_relabel(std::vector<NodeId>* old_to_new = nullptr) const;

private:
    AtlasNode& node_mut(NodeId id);

    std::vector<AtlasNode> nodes_;
    std::unordered_map<RegionSignature, NodeId, RegionSignatureHash> index_;
    std::size_t edges_ = 0;
};

}  // namespace atlasforge
