#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "atlasforge/signature.hpp"

namespace atlasforge {

enum class QueuePolicy : std::uint8_t { BFS, DFS };

std::string_view to_string(QueuePolicy policy) noexcept;
/// "bfs" / "dfs", case-insensitive.
QueuePolicy parse_policy(std::string_view text);

/// Frontier of discovered-but-unsampled regions.
///
/// BFS keeps one global FIFO. DFS keeps one FIFO per dimension and always pops from the
/// lowest non-empty dimension, so exploration heads for 0-dimensional regions first.
class NewRegionsQueue {
public:
    NewRegionsQueue(QueuePolicy policy, std::uint32_t max_dimension);

    /// Pushing an id that is already queued is an InconsistencyError.
    void push(NodeId id, std::uint32_t dimension);
    std::optional<NodeId> pop();

    QueuePolicy policy() const noexcept { return policy_; }
    std::size_t size() const noexcept { return size_; }
    bool empty() const noexcept { return size_ == 0; }
    bool contains(NodeId id) const noexcept { return members_.contains(id); }

private:
    QueuePolicy policy_;
    std::uint32_t max_dimension_;
    std::deque<NodeId> fifo_;
    std::vector<std::deque<NodeId>> levels_;
    std::uint32_t lowest_hint_ = 0;  // no non-empty level below this
    std::unordered_set<NodeId> members_;
    std::size_t size_ = 0;
};

}  // namespace atlasforge
