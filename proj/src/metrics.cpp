#include "atlasforge/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <stdexcept>

namespace atlasforge {

namespace {

std::string fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

}  // namespace

std::string config_hash(const ExploreParams& params) {
    const auto& d = params.domain;
    std::string key = "m=" + std::to_string(d.m) + ";roots=";
    for (const auto& r : d.roots) key += "{" + r.to_string() + "}";
    key += ";mask=" + std::string(d.child_mask.is_allow_all() ? "all" : "custom");
    key += ";samples=" + std::to_string(d.samples_per_region);
    key += ";dup=" + std::to_string(d.duplicate_factor);
    key += ";cost=" + std::to_string(d.cost_units_per_sample);
    key += ";seed=" + std::to_string(d.seed);
    key += ";policy=" + std::string(to_string(params.policy));

    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : key) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::vector<TimelinePoint> discovery_timeline(const EventLog& log, std::int64_t start_ns, std::int64_t end_ns,
                                              double bucket_seconds) {
    std::vector<TimelinePoint> out;
    if (end_ns < start_ns || bucket_seconds <= 0) return out;
    const auto bucket_ns = static_cast<std::int64_t>(bucket_seconds * 1e9);
    std::size_t i = 0;
    std::uint64_t nodes = 0;
    for (std::int64_t t = start_ns;; t += bucket_ns) {
        const std::int64_t cut = std::min(t, end_ns);
        while (i < log.size() && log[i].t_ns <= cut) nodes = std::max(nodes, log[i++].nodes);
        out.push_back({static_cast<double>(cut - start_ns) * 1e-9, nodes});
        if (cut == end_ns) break;
    }
    while (i < log.size()) nodes = std::max(nodes, log[i++].nodes);
    out.back().nodes = nodes;
    return out;
}

double node_discovery_rate(const RunReport& report) {
    if (!(report.wall_time_seconds > 0)) throw std::domain_error("discovery rate needs a positive wall time");
    return static_cast<double>(report.nodes_total) / report.wall_time_seconds;
}

MetricSummary summarize(std::span<const double> values) {
    MetricSummary s;
    s.count = values.size();
    if (values.empty()) return s;
    s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    if (values.size() > 1) {
        double ss = 0;
        for (double v : values) ss += (v - s.mean) * (v - s.mean);
        s.stddev = std::sqrt(ss / static_cast<double>(values.size() - 1));
    }
    return s;
}

std::map<unsigned, double> normalized_wall_time(std::span<const RunReport> reports) {
    if (reports.empty()) throw std::invalid_argument("no reports to normalize");
    std::map<unsigned, std::vector<double>> by_cores;
    for (const auto& r : reports) {
        if (r.config_hash != reports.front().config_hash) {
            throw std::invalid_argument("normalized_wall_time: reports have different configurations");
        }
        by_cores[r.cores].push_back(r.wall_time_seconds);
    }
    auto base = by_cores.find(1);
    if (base == by_cores.end()) throw std::invalid_argument("normalized_wall_time: no one-core baseline");
    const double t1 = summarize(base->second).mean;
    if (!(t1 > 0)) throw std::domain_error("baseline wall time must be positive");
    std::map<unsigned, double> out;
    for (const auto& [p, times] : by_cores) out[p] = p == 1 ? 1.0 : summarize(times).mean / t1;
    return out;
}

AggregateReport aggregate_runs(std::span<const RunReport> reports) {
    if (reports.empty()) throw std::invalid_argument("aggregate_runs: no reports");
    AggregateReport a;
    a.config_hash = reports.front().config_hash;
    a.cores = reports.front().cores;
    a.policy = reports.front().params.policy;
    a.runs = reports.size();
    std::vector<double> wall, nodes, edges, witnesses, rate;
    for (const auto& r : reports) {
        if (r.config_hash != a.config_hash || r.cores != a.cores) {
            throw std::invalid_argument("aggregate_runs: reports have different configurations");
        }
        wall.push_back(r.wall_time_seconds);
        nodes.push_back(static_cast<double>(r.nodes_total));
        edges.push_back(static_cast<double>(r.edges_total));
        witnesses.push_back(static_cast<double>(r.witnesses_total));
        rate.push_back(r.wall_time_seconds > 0 ? node_discovery_rate(r) : 0.0);
    }
    a.wall_seconds = summarize(wall);
    a.nodes = summarize(nodes);
    a.edges = summarize(edges);
    a.witnesses = summarize(witnesses);
    a.rate = summarize(rate);
    return a;
}

std::string csv_header() { return "config_hash,cores,policy,run_idx,wall_s,nodes,edges,witnesses,rate,norm_ratio"; }

std::string csv_row(const RunReport& r, std::size_t run_idx, double norm_ratio) {
    const double rate = r.wall_time_seconds > 0 ? node_discovery_rate(r) : 0.0;
    return r.config_hash + "," + std::to_string(r.cores) + "," + std::string(to_string(r.params.policy)) + "," +
           std::to_string(run_idx) + "," + fixed(r.wall_time_seconds, 6) + "," + std::to_string(r.nodes_total) + "," +
           std::to_string(r.edges_total) + "," + std::to_string(r.witnesses_total) + "," + fixed(rate, 3) + "," +
           fixed(norm_ratio, 6);
}

std::string csv_aggregate_row(const AggregateReport& a, double norm_ratio) {
    return a.config_hash + "," + std::to_string(a.cores) + "," + std::string(to_string(a.policy)) + ",mean," +
           fixed(a.wall_seconds.mean, 6) + "," + fixed(a.nodes.mean, 1) + "," + fixed(a.edges.mean, 1) + "," +
           fixed(a.witnesses.mean, 1) + "," + fixed(a.rate.mean, 3) + "," + fixed(norm_ratio, 6);
}

void write_svg_chart(const std::filesystem::path& path, std::span<const ChartSeries> series) {
    constexpr double W = 640, H = 400, L = 60, R = 150, T = 20, B = 50;
    unsigned max_p = 1;
    double max_y = 1.0;
    for (const auto& s : series) {
        for (const auto& [p, y] : s.points) {
            max_p = std::max(max_p, p);
            max_y = std::max(max_y, y);
        }
    }
    auto px = [&](double p) { return L + (max_p > 1 ? (p - 1) / (max_p - 1) : 0.5) * (W - L - R); };
    auto py = [&](double y) { return T + (1.0 - y / max_y) * (H - T - B); };
    static constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write chart " + path.string());
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B
        << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 10 << "\" text-anchor=\"middle\">cores</text>\n";
    out << "<text x=\"15\" y=\"" << (T + H - B) / 2 << "\" transform=\"rotate(-90 15 " << (T + H - B) / 2
        << ")\" text-anchor=\"middle\">normalized wall time</text>\n";
    for (unsigned p = 1; p <= max_p; p *= 2) {
        out << "<text x=\"" << px(p) << "\" y=\"" << H - B + 18 << "\" text-anchor=\"middle\">" << p << "</text>\n";
    }
    for (int i = 0; i <= 4; ++i) {
        const double y = max_y * i / 4;
        out << "<text x=\"" << L - 8 << "\" y=\"" << py(y) + 4 << "\" text-anchor=\"end\">" << fixed(y, 2)
            << "</text>\n";
    }
    for (std::size_t k = 0; k < series.size(); ++k) {
        const char* color = kColors[k % std::size(kColors)];
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
        for (const auto& [p, y] : series[k].points) out << px(p) << "," << py(y) << " ";
        out << "\"/>\n";
        out << "<text x=\"" << W - R + 10 << "\" y=\"" << T + 20 * (k + 1) << "\" fill=\"" << color << "\">"
            << series[k].label << "</text>\n";
    }
    out << "</svg>\n";
}

}  // namespace atlasforge
