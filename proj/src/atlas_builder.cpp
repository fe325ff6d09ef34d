#include "atlasforge/atlas_builder.hpp"

#include <algorithm>
#include <string>

#include "atlasforge/sampler.hpp"

namespace atlasforge {

namespace {

void require_started(const AtlasBuilderState& state, std::string_view what) {
    if (!state.params) throw InconsistencyError(std::string(what) + " received before Start");
}

Effects on_start(AtlasBuilderState& state, const msg::Start& start) {
    if (!start.params) throw std::invalid_argument("Start without parameters");
    start.params->domain.validate();
    state.params = start.params;
    state.atlas = Atlas{};
    state.queue.emplace(start.params->policy, start.params->domain.m);
    state.roots.clear();
    for (const auto& root : start.params->domain.roots) {
        if (std::find(state.roots.begin(), state.roots.end(), root) == state.roots.end()) state.roots.push_back(root);
    }
    state.active_samplers = 0;
    state.halted = false;
    state.counters = BuilderCounters{};
    return {effect::SendSelf{msg::Ready{}}};
}

Effects on_ready(AtlasBuilderState& state) {
    require_started(state, "Ready");
    for (const auto& root : state.roots) {
        auto [id, was_new] = state.atlas.find_or_insert(root, dimension_of(state.params->domain, root));
        if (was_new) {
            state.queue->push(id, state.atlas.node(id).dimension);
            ++state.counters.regions_found;
        }
    }
    return {effect::SendSelf{msg::Process{}}};
}

Effects on_process(AtlasBuilderState& state) {
    require_started(state, "Process");
    Effects out;
    while (!state.queue->empty() && state.active_samplers < state.max_samplers) {
        const NodeId id = *state.queue->pop();
        state.atlas.mark(id, NodeStatus::Sampling);
        ++state.active_samplers;
        const auto& sig = state.atlas.node(id).signature;
        out.push_back(effect::SpawnSampler{msg::Sample{id, sig, node_seed(state.params->domain.seed, sig)}});
    }
    return out;
}

Effects on_sampling_result(AtlasBuilderState& state, const msg::SamplingResult& result) {
    require_started(state, "SamplingResult");
    const auto& domain = state.params->domain;
    // RegionSignature is canonical by construction.
    const RegionSignature& child = result.child_signature;
    const std::uint32_t dim = dimension_of(domain, child);
    auto [child_id, was_new] = state.atlas.find_or_insert(child, dim);
    state.atlas.add_edge(result.parent_id, child_id);

    Effects out;
    if (was_new) {
        state.queue->push(child_id, dim);
        ++state.counters.regions_found;
        out.push_back(effect::SendSelf{msg::Process{}});
    } else {
        ++state.counters.witnesses;
        out.push_back(effect::Send{
            state.writer,
            msg::WriteSamplePoints{child_id, child, dim, {}, msg::Witness{result.parent_id, result.source_point_id}}});
    }
    out.push_back(effect::Send{result.reply_to, msg::BoundaryResult{child, child_id}});
    return out;
}

Effects on_done(AtlasBuilderState& state, const msg::Done& done, const ActorRef& sender) {
    require_started(state, "Done");
    if (state.active_samplers == 0) throw InconsistencyError("Done with no active samplers");
    state.atlas.mark(done.node_id, NodeStatus::Complete);
    --state.active_samplers;
    Effects out{effect::Send{sender, msg::Kill{}}, effect::SendSelf{msg::Process{}}};
    if (state.queue->empty() && state.active_samplers == 0 && !state.halted) {
        state.halted = true;
        out.push_back(effect::Halt{});
    }
    return out;
}

}  // namespace

AtlasBuilderState::AtlasBuilderState(ActorRef writer, std::uint32_t max_samplers)
    : writer(std::move(writer)), max_samplers(max_samplers) {
    if (max_samplers == 0) throw std::invalid_argument("max_samplers must be positive");
}

Effects handle(AtlasBuilderState& state, const MessageEnvelope& envelope) {
    ++state.counters.messages_handled;
    return std::visit(
        [&](const auto& m) -> Effects {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, msg::Start>) {
                return on_start(state, m);
            } else if constexpr (std::is_same_v<T, msg::Ready>) {
                return on_ready(state);
            } else if constexpr (std::is_same_v<T, msg::Process>) {
                return on_process(state);
            } else if constexpr (std::is_same_v<T, msg::SamplingResult>) {
                return on_sampling_result(state, m);
            } else if constexpr (std::is_same_v<T, msg::Done>) {
                return on_done(state, m, envelope.sender);
            } else {
                ++state.counters.unknown_messages;
                return {};
            }
        },
        envelope.message);
}

AtlasBuilderActor::AtlasBuilderActor(ActorRef writer, std::uint32_t max_samplers,
                                     std::shared_ptr<BuilderOutcome> outcome, Clock::time_point origin)
    : state_(std::move(writer), max_samplers), outcome_(std::move(outcome)), origin_(origin) {}

std::int64_t AtlasBuilderActor::now_ns() const {
    return std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - origin_).count();
}

void AtlasBuilderActor::log(bool outgoing, std::string_view kind, std::optional<NodeId> node,
                            std::optional<RegionSignature> sig, std::int64_t t) {
    Event e;
    e.t_ns = t;
    e.outgoing = outgoing;
    e.kind = std::string(kind);
    e.node = node;
    e.signature = std::move(sig);
    e.queue_size = state_.queue ? state_.queue->size() : 0;
    e.active_samplers = state_.active_samplers;
    e.nodes = state_.atlas.size();
    outcome_->events.push_back(std::move(e));
}

void AtlasBuilderActor::receive(ActorContext& ctx, MessageEnvelope envelope) {
    const std::int64_t t = now_ns();
    if (std::holds_alternative<msg::Start>(envelope.message)) outcome_->start_ns = t;

    Effects effects = handle(state_, envelope);

    std::optional<NodeId> node;
    if (const auto* d = std::get_if<msg::Done>(&envelope.message)) node = d->node_id;
    if (const auto* r = std::get_if<msg::SamplingResult>(&envelope.message)) node = r->parent_id;
    log(false, message_kind_name(envelope.message), node, std::nullopt, t);

    for (auto& eff : effects) {
        std::visit(
            [&](auto& e) {
                using T = std::decay_t<decltype(e)>;
                if constexpr (std::is_same_v<T, effect::SpawnSampler>) {
                    log(true, "Sample", e.sample.node_id, e.sample.signature, t);
                    ActorRef sampler = ctx.spawn<SamplerActor>(ctx.self(), state_.writer, state_.params);
                    ctx.send(sampler, std::move(e.sample));
                } else if constexpr (std::is_same_v<T, effect::Send>) {
                    if (std::holds_alternative<msg::Kill>(e.message)) log(true, "Kill", node, std::nullopt, t);
                    ctx.send(e.target, std::move(e.message));
                } else if constexpr (std::is_same_v<T, effect::SendSelf>) {
                    ctx.send(ctx.self(), std::move(e.message));
                } else if constexpr (std::is_same_v<T, effect::Halt>) {
                    halt(ctx, t);
                }
            },
            eff);
    }
}

void AtlasBuilderActor::halt(ActorContext& ctx, std::int64_t t) {
    log(true, "Halt", std::nullopt, std::nullopt, t);
    std::vector<NodeId> old_to_new;
    auto canonical = std::make_shared<const Atlas>(state_.atlas.canonical_relabel(&old_to_new));
    ctx.send(state_.writer, msg::WriteIndex{canonical, std::move(old_to_new)});
    outcome_->halted = true;
    outcome_->end_ns = t;
    outcome_->atlas = std::move(canonical);
    outcome_->counters = state_.counters;
}

}  // namespace atlasforge
