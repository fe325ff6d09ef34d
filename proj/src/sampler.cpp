#include "atlasforge/sampler.hpp"

#include <iostream>
#include <string>

namespace atlasforge {

namespace {

Effects finish(SamplerState& state) {
    std::uint32_t dim = 0;
    if (!state.domain_error) dim = dimension_of(state.params->domain, state.signature);
    Effects out;
    out.push_back(effect::Send{state.writer, msg::WriteSamplePoints{state.node_id, state.signature, dim,
                                                                    std::move(state.sample_result.sample_points),
                                                                    std::nullopt}});
    out.push_back(effect::Send{state.builder, msg::Done{state.node_id}});
    state.done_sent = true;
    return out;
}

}  // namespace

SamplerState::SamplerState(ActorRef builder, ActorRef writer, std::shared_ptr<const ExploreParams> params)
    : builder(std::move(builder)), writer(std::move(writer)), params(std::move(params)) {}

Effects handle_sample(SamplerState& state, const msg::Sample& sample, const ActorRef& self) {
    if (state.sampled) throw InconsistencyError("sampler received a second Sample");
    state.node_id = sample.node_id;
    state.signature = sample.signature;
    state.sampled = true;
    try {
        state.sample_result = sample_region(state.params->domain, sample.signature, sample.node_seed);
    } catch (const InvalidSignatureError& e) {
        std::cerr << "sampler: node " << sample.node_id << " completed with zero samples: " << e.what() << '\n';
        state.domain_error = true;
        state.sample_result = {};
    }

    Effects out;
    out.reserve(state.sample_result.boundary_events.size() + 2);
    for (const auto& ev : state.sample_result.boundary_events) {
        ++state.outstanding[ev.child_signature];
        ++state.pending_boundaries;
        out.push_back(effect::Send{state.builder,
                                   msg::SamplingResult{state.node_id, ev.child_signature, ev.source_point_id, self}});
    }
    if (state.pending_boundaries == 0) {
        auto done = finish(state);
        out.insert(out.end(), std::make_move_iterator(done.begin()), std::make_move_iterator(done.end()));
    }
    return out;
}

Effects handle_boundary_result(SamplerState& state, const msg::BoundaryResult& result) {
    auto it = state.outstanding.find(result.child_signature);
    if (it == state.outstanding.end() || state.pending_boundaries == 0) {
        throw InconsistencyError("unmatched BoundaryResult for {" + result.child_signature.to_string() + "}");
    }
    auto [pos, inserted] = state.boundary_node_ids.emplace(result.child_signature, result.child_node_id);
    if (!inserted && pos->second != result.child_node_id) {
        throw InconsistencyError("boundary {" + result.child_signature.to_string() + "} mapped to nodes " +
                                 std::to_string(pos->second) + " and " + std::to_string(result.child_node_id));
    }
    if (--it->second == 0) state.outstanding.erase(it);
    if (--state.pending_boundaries == 0) return finish(state);
    return {};
}

Effects handle_kill(const SamplerState& state) {
    if (!state.done_sent) throw InconsistencyError("Kill received before Done");
    return {effect::Terminate{}};
}

Effects handle(SamplerState& state, const MessageEnvelope& envelope, const ActorRef& self) {
    return std::visit(
        [&](const auto& m) -> Effects {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, msg::Sample>) {
                return handle_sample(state, m, self);
            } else if constexpr (std::is_same_v<T, msg::BoundaryResult>) {
                return handle_boundary_result(state, m);
            } else if constexpr (std::is_same_v<T, msg::Kill>) {
                return handle_kill(state);
            } else {
                throw InconsistencyError("sampler cannot handle " + std::string(message_kind_name(envelope.message)));
            }
        },
        envelope.message);
}

SamplerActor::SamplerActor(ActorRef builder, ActorRef writer, std::shared_ptr<const ExploreParams> params)
    : state_(std::move(builder), std::move(writer), std::move(params)) {}

void SamplerActor::receive(ActorContext& ctx, MessageEnvelope envelope) {
    for (auto& eff : handle(state_, envelope, ctx.self())) {
        if (auto* send = std::get_if<effect::Send>(&eff)) {
            ctx.send(send->target, std::move(send->message));
        } else if (std::holds_alternative<effect::Terminate>(eff)) {
            ctx.quit();
        }
    }
}

}  // namespace atlasforge
