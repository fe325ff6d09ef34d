#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "atlasforge/event_log.hpp"
#include "atlasforge/protocol.hpp"

namespace atlasforge {

struct BuilderCounters {
    std::uint64_t messages_handled = 0;
    std::uint64_t regions_found = 0;
    std::uint64_t witnesses = 0;
    std::uint64_t unknown_messages = 0;
};

/// Local state of the single AtlasBuilder. Owns the atlas and the frontier; nothing else
/// ever sees them while a run is in progress.
struct AtlasBuilderState {
    AtlasBuilderState(ActorRef writer, std::uint32_t max_samplers);

    std::shared_ptr<const ExploreParams> params;  // set by Start
    Atlas atlas;
    std::optional<NewRegionsQueue> queue;
    std::vector<RegionSignature> roots;
    ActorRef writer;
    std::uint32_t max_samplers;
    std::uint32_t active_samplers = 0;
    bool halted = false;
    BuilderCounters counters;
};

/// Pure transition function. Handles Start, Ready, Process, SamplingResult and Done; any
/// other message is counted in counters.unknown_messages and ignored. Atlas and queue
/// inconsistencies propagate as InconsistencyError.
Effects handle(AtlasBuilderState& state, const MessageEnvelope& envelope);

/// Shared between the builder shell and whoever launched the run. Written by the builder's
/// handler thread and read only after the actor system has gone quiescent.
struct BuilderOutcome {
    bool halted = false;
    std::int64_t start_ns = 0;
    std::int64_t end_ns = 0;
    std::shared_ptr<const Atlas> atlas;  // canonical ids, same as atlas.idx
    BuilderCounters counters;
    EventLog events;
};

/// Actor shell around handle(): applies effects, spawns samplers, keeps the event log.
class AtlasBuilderActor final : public actor::Actor<Message> {
public:
    using Clock = std::chrono::steady_clock;

    AtlasBuilderActor(ActorRef writer, std::uint32_t max_samplers, std::shared_ptr<BuilderOutcome> outcome,
                      Clock::time_point origin = Clock::now());

    void receive(ActorContext& ctx, MessageEnvelope envelope) override;

private:
    std::int64_t now_ns() const;
    void log(bool outgoing, std::string_view kind, std::optional<NodeId> node,
             std::optional<RegionSignature> sig, std::int64_t t);
    void halt(ActorContext& ctx, std::int64_t t);

    AtlasBuilderState state_;
    std::shared_ptr<BuilderOutcome> outcome_;
    Clock::time_point origin_;
};

}  // namespace atlasforge
