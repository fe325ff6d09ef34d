#include "atlasforge/atlas.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace atlasforge {

namespace {

// Inserts into a sorted vector; returns false if already present.
bool insert_sorted(std::vector<NodeId>& v, NodeId id) {
    auto pos = std::lower_bound(v.begin(), v.end(), id);
    if (pos != v.end() && *pos == id) return false;
    v.insert(pos, id);
    return true;
}

}  // namespace

std::string_view to_string(NodeStatus status) noexcept {
    switch (status) {
        case NodeStatus::Queued: return "Queued";
        case NodeStatus::Sampling: return "Sampling";
        case NodeStatus::Complete: return "Complete";
    }
    return "?";
}

InsertResult Atlas::find_or_insert(const RegionSignature& sig, std::uint32_t dimension) {
    if (auto it = index_.find(sig); it != index_.end()) {
        AtlasNode& n = nodes_[it->second];
        if (n.dimension != dimension) {
            throw InconsistencyError("dimension mismatch for {" + sig.to_string() + "}: stored " +
                                     std::to_string(n.dimension) + ", got " + std::to_string(dimension));
        }
        ++n.witness_count;
        return {n.id, false};
    }
    const auto id = static_cast<NodeId>(nodes_.size());
    AtlasNode n;
    n.id = id;
    n.signature = sig;
    n.dimension = dimension;
    nodes_.push_back(std::move(n));
    index_.emplace(sig, id);
    return {id, true};
}

void Atlas::add_edge(NodeId parent, NodeId child) {
    AtlasNode& p = node_mut(parent);
    AtlasNode& c = node_mut(child);
    if (c.dimension + 1 != p.dimension || !p.signature.is_covered_by(c.signature)) {
        throw InconsistencyError("illegal edge {" + p.signature.to_string() + "} -> {" +
                                 c.signature.to_string() + "}");
    }
    if (insert_sorted(p.child_ids, child)) {
        insert_sorted(c.parent_ids, parent);
        ++edges_;
    }
}

void Atlas::mark(NodeId id, NodeStatus next) {
    AtlasNode& n = node_mut(id);
    const bool legal = (n.status == NodeStatus::Queued && next == NodeStatus::Sampling) ||
                       (n.status == NodeStatus::Sampling && next == NodeStatus::Complete);
    if (!legal) {
        throw InconsistencyError("illegal status transition for node " + std::to_string(id) + ": " +
                                 std::string(to_string(n.status)) + " -> " + std::string(to_string(next)));
    }
    n.status = next;
}

std::optional<NodeId> Atlas::find(const RegionSignature& sig) const {
    if (auto it = index_.find(sig); it != index_.end()) return it->second;
    return std::nullopt;
}

const AtlasNode& Atlas::node(NodeId id) const {
    if (id >= nodes_.size()) throw InconsistencyError("unknown node id " + std::to_string(id));
    return nodes_[id];
}

AtlasNode& Atlas::node_mut(NodeId id) {
    if (id >= nodes_.size()) throw InconsistencyError("unknown node id " + std::to_string(id));
    return nodes_[id];
}

std::uint64_t Atlas::total_witnesses() const noexcept {
    std::uint64_t total = 0;
    for (const auto& n : nodes_) total += n.witness_count;
    return total;
}

Atlas Atlas::canonical_relabel(std::vector<NodeId>* old_to_new) const {
    std::vector<NodeId> order(nodes_.size());
    std::iota(order.begin(), order.end(), NodeId{0});
    std::sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
        return canonical_less(nodes_[a].signature, nodes_[b].signature);
    });
    std::vector<NodeId> remap(nodes_.size());
    for (std::size_t i = 0; i < order.size(); ++i) remap[order[i]] = static_cast<NodeId>(i);

    Atlas out;
    out.nodes_.reserve(nodes_.size());
    for (NodeId old : order) {
        AtlasNode n = nodes_[old];
        n.id = remap[old];
        for (auto& p : n.parent_ids) p = remap[p];
        for (auto& c : n.child_ids) c = remap[c];
        std::sort(n.parent_ids.begin(), n.parent_ids.end());
        std::sort(n.child_ids.begin(), n.child_ids.end());
        out.index_.emplace(n.signature, n.id);
        out.nodes_.push_back(std::move(n));
    }
    out.edges_ = edges_;
    if (old_to_new) *old_to_new = std::move(remap);
    return out;
}

}  // namespace atlasforge
