#include "atlasforge/event_log.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace atlasforge {

namespace {

template <class T>
T parse_number(std::string_view tok, std::string_view line) {
    T v{};
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (tok.empty() || ec != std::errc{} || ptr != tok.data() + tok.size()) {
        throw std::invalid_argument("bad event field '" + std::string(tok) + "' in: " + std::string(line));
    }
    return v;
}

}  // namespace

std::string format_event(const Event& e) {
    std::string out;
    out += std::to_string(e.t_ns);
    out += e.outgoing ? "\tout\t" : "\tin\t";
    out += e.kind;
    out += '\t';
    out += e.node ? std::to_string(*e.node) : "-";
    out += '\t';
    out += e.signature ? "{" + e.signature->to_string() + "}" : "-";
    out += '\t';
    out += std::to_string(e.queue_size);
    out += '\t';
    out += std::to_string(e.active_samplers);
    out += '\t';
    out += std::to_string(e.nodes);
    return out;
}

Event parse_event(std::string_view line) {
    std::vector<std::string_view> f;
    std::size_t start = 0;
    for (;;) {
        std::size_t tab = line.find('\t', start);
        f.push_back(line.substr(start, tab == std::string_view::npos ? std::string_view::npos : tab - start));
        if (tab == std::string_view::npos) break;
        start = tab + 1;
    }
    if (f.size() != 8) throw std::invalid_argument("event line needs 8 fields: " + std::string(line));
    Event e;
    e.t_ns = parse_number<std::int64_t>(f[0], line);
    if (f[1] == "out") {
        e.outgoing = true;
    } else if (f[1] != "in") {
        throw std::invalid_argument("bad event direction in: " + std::string(line));
    }
    e.kind = std::string(f[2]);
    if (f[3] != "-") e.node = parse_number<NodeId>(f[3], line);
    if (f[4] != "-") {
        if (f[4].size() < 2 || f[4].front() != '{' || f[4].back() != '}') {
            throw std::invalid_argument("bad event signature in: " + std::string(line));
        }
        e.signature = RegionSignature::parse(f[4].substr(1, f[4].size() - 2));
    }
    e.queue_size = parse_number<std::uint64_t>(f[5], line);
    e.active_samplers = parse_number<std::uint32_t>(f[6], line);
    e.nodes = parse_number<std::uint64_t>(f[7], line);
    return e;
}

void write_event_log(std::ostream& out, const EventLog& log) {
    out << kEventLogHeader << '\n';
    for (const auto& e : log) out << format_event(e) << '\n';
}

EventLog read_event_log(std::istream& in) {
    EventLog log;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line == kEventLogHeader) continue;
        log.push_back(parse_event(line));
    }
    return log;
}

ReplaySummary replay(const EventLog& log, std::uint32_t max_samplers) {
    ReplaySummary s;
    for (const auto& e : log) {
        ++s.events;
        s.max_active = std::max(s.max_active, e.active_samplers);
        if (e.active_samplers > max_samplers) ++s.cap_violations;
        s.final_nodes = e.nodes;
        if (e.outgoing && e.kind == "Sample") {
            ++s.samples;
            if (e.signature) ++s.samples_per_signature[*e.signature];
        } else if (e.outgoing && e.kind == "Kill") {
            ++s.kills;
        } else if (e.outgoing && e.kind == "Halt") {
            ++s.halts;
        } else if (!e.outgoing && e.kind == "Done") {
            ++s.dones;
        }
    }
    return s;
}

}  // namespace atlasforge
