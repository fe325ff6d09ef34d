#pragma once

#include <cstdint>
#include <map>
#include <memory>

#include "atlasforge/protocol.hpp"

namespace atlasforge {

struct SamplerState {
    SamplerState(ActorRef builder, ActorRef writer, std::shared_ptr<const ExploreParams> params);

    ActorRef builder;
    ActorRef writer;
    std::shared_ptr<const ExploreParams> params;

    NodeId node_id = 0;
    RegionSignature signature;
    SampleResult sample_result;
    bool sampled = false;
    bool done_sent = false;
    bool domain_error = false;
    std::uint64_t pending_boundaries = 0;
    std::map<RegionSignature, std::uint64_t> outstanding;  // child -> replies still expected
    std::map<RegionSignature, NodeId> boundary_node_ids;
};

/// Samples the region and emits one SamplingResult per boundary event, duplicates included.
/// A region without boundary events finishes immediately.
Effects handle_sample(SamplerState& state, const msg::Sample& sample, const ActorRef& self);

/// Records the node id for a boundary; the last outstanding reply triggers the batched write
/// followed by Done. Replies that match nothing outstanding are an InconsistencyError.
Effects handle_boundary_result(SamplerState& state, const msg::BoundaryResult& result);

/// Kill before Done is a protocol violation.
Effects handle_kill(const SamplerState& state);

/// Dispatches on message kind; anything other than Sample, BoundaryResult or Kill is an
/// InconsistencyError.
Effects handle(SamplerState& state, const MessageEnvelope& envelope, const ActorRef& self);

class SamplerActor final : public actor::Actor<Message> {
public:
    SamplerActor(ActorRef builder, ActorRef writer, std::shared_ptr<const ExploreParams> params);
    void receive(ActorContext& ctx, MessageEnvelope envelope) override;

private:
    SamplerState state_;
};

}  // namespace atlasforge
