#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "atlasforge/signature.hpp"

namespace atlasforge {

/// One line of the builder's event log.
///
/// TSV columns: t_ns, dir (in|out), kind, node (id or -), sig ({a,b} or -), queue, active, nodes.
/// `in` rows are messages the builder handled; `out` rows are Sample, Kill and Halt effects
/// it emitted. queue/active/nodes are the builder's values right after the step.
struct Event {
    std::int64_t t_ns = 0;
    bool outgoing = false;
    std::string kind;
    std::optional<NodeId> node;
    std::optional<RegionSignature> signature;
    std::uint64_t queue_size = 0;
    std::uint32_t active_samplers = 0;
    std::uint64_t nodes = 0;

    friend bool operator==(const Event&, const Event&) = default;
};

using EventLog = std::vector<Event>;

inline constexpr std::string_view kEventLogHeader = "t_ns\tdir\tkind\tnode\tsig\tqueue\tactive\tnodes";

std::string format_event(const Event& e);
/// Throws std::invalid_argument on malformed lines.
Event parse_event(std::string_view line);

void write_event_log(std::ostream& out, const EventLog& log);
/// Skips the header line if present.
EventLog read_event_log(std::istream& in);

/// What an event log says about a run, recomputed from the log alone.
struct ReplaySummary {
    std::map<RegionSignature, std::uint64_t> samples_per_signature;
    std::uint64_t samples = 0;
    std::uint64_t dones = 0;
    std::uint64_t kills = 0;
    std::uint64_t halts = 0;
    std::uint32_t max_active = 0;
    std::uint64_t cap_violations = 0;  // events with active > max_samplers
    std::uint64_t final_nodes = 0;
    std::uint64_t events = 0;
};

ReplaySummary replay(const EventLog& log, std::uint32_t max_samplers);

}  // namespace atlasforge
