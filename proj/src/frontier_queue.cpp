#include "atlasforge/frontier_queue.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>
#include <string>

namespace atlasforge {

std::string_view to_string(QueuePolicy policy) noexcept {
    return policy == QueuePolicy::BFS ? "bfs" : "dfs";
}

QueuePolicy parse_policy(std::string_view text) {
    std::string lower(text);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "bfs") return QueuePolicy::BFS;
    if (lower == "dfs") return QueuePolicy::DFS;
    throw std::invalid_argument("unknown policy '" + std::string(text) + "' (expected bfs|dfs)");
}

NewRegionsQueue::NewRegionsQueue(QueuePolicy policy, std::uint32_t max_dimension)
    : policy_(policy), max_dimension_(max_dimension) {
    if (policy_ == QueuePolicy::DFS) levels_.resize(std::size_t{max_dimension_} + 1);
    lowest_hint_ = max_dimension_ + 1;
}

void NewRegionsQueue::push(NodeId id, std::uint32_t dimension) {
    if (dimension > max_dimension_) {
        throw InconsistencyError("dimension " + std::to_string(dimension) + " exceeds queue maximum " +
                                 std::to_string(max_dimension_));
    }
    if (!members_.insert(id).second) {
        throw InconsistencyError("node " + std::to_string(id) + " pushed twice");
    }
    if (policy_ == QueuePolicy::BFS) {
        fifo_.push_back(id);
    } else {
        levels_[dimension].push_back(id);
        lowest_hint_ = std::min(lowest_hint_, dimension);
    }
    ++size_;
}

std::optional<NodeId> NewRegionsQueue::pop() {
    if (size_ == 0) return std::nullopt;
    NodeId id = 0;
    if (policy_ == QueuePolicy::BFS) {
        id = fifo_.front();
        fifo_.pop_front();
    } else {
        while (levels_[lowest_hint_].empty()) ++lowest_hint_;
        auto& level = levels_[lowest_hint_];
        id = level.front();
        level.pop_front();
    }
    members_.erase(id);
    --size_;
    return id;
}

}  // namespace atlasforge
