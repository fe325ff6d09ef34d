#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include "atlasforge/actor/runtime.hpp"
#include "atlasforge/atlas.hpp"
#include "atlasforge/domain.hpp"
#include "atlasforge/frontier_queue.hpp"

namespace atlasforge {

using actor::ActorRef;

struct ExploreParams {
    DomainConfig domain;
    QueuePolicy policy = QueuePolicy::BFS;
    std::uint32_t max_samplers = 1;
};

namespace msg {

struct Start {
    std::shared_ptr<const ExploreParams> params;
};
struct Ready {};
struct Process {};
struct Sample {
    NodeId node_id = 0;
    RegionSignature signature;
    std::uint64_t node_seed = 0;
};
struct SamplingResult {
    NodeId parent_id = 0;
    RegionSignature child_signature;
    std::uint32_t source_point_id = 0;
    ActorRef reply_to;
};
struct BoundaryResult {
    RegionSignature child_signature;
    NodeId child_node_id = 0;
};
struct Done {
    NodeId node_id = 0;
};
struct Kill {};

/// Provenance of a rediscovery: which parent's sample point hit the region again.
struct Witness {
    NodeId parent_id = 0;
    std::uint32_t source_point_id = 0;
};

/// Batched samples of one region, or (when `witness` is set) one rediscovery record.
struct WriteSamplePoints {
    NodeId node_id = 0;
    RegionSignature signature;
    std::uint32_t dimension = 0;
    std::vector<SamplePoint> sample_points;
    std::optional<Witness> witness;
};

/// Final roadmap handed from the builder to the writer at Halt. `old_to_new` maps run-time
/// ids (used in node file names so far) to the canonical ids of `atlas`.
struct WriteIndex {
    std::shared_ptr<const Atlas> atlas;
    std::vector<NodeId> old_to_new;
};

}  // namespace msg

using Message = std::variant<msg::Start, msg::Ready, msg::Process, msg::Sample, msg::SamplingResult,
                             msg::BoundaryResult, msg::Done, msg::Kill, msg::WriteSamplePoints, msg::WriteIndex>;

using MessageEnvelope = actor::Envelope<Message>;
using ActorSystem = actor::ActorSystem<Message>;
using ActorContext = actor::Context<Message>;

inline constexpr std::size_t kMessageKinds = std::variant_size_v<Message>;

/// Stable names, indexed like Message alternatives.
std::string_view message_kind_name(std::size_t index) noexcept;
inline std::string_view message_kind_name(const Message& m) noexcept { return message_kind_name(m.index()); }

// Handler outputs. Handlers are pure; an actor shell performs these.
namespace effect {
struct SpawnSampler {
    msg::Sample sample;
};
struct Send {
    ActorRef target;
    Message message;
};
struct SendSelf {
    Message message;
};
struct Halt {};
struct Terminate {};
}  // namespace effect

using Effect = std::variant<effect::SpawnSampler, effect::Send, effect::SendSelf, effect::Halt, effect::Terminate>;
using Effects = std::vector<Effect>;

}  // namespace atlasforge
