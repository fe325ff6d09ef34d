#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "atlasforge/explore.hpp"

namespace atlasforge {
namespace {

class ExploreTest : public ::testing::Test {
protected:
    void SetUp() override {
        root_ = fs::temp_directory_path() /
                ("atlasforge_explore_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(root_);
    }
    void TearDown() override { fs::remove_all(root_); }

    RunOptions options(const std::string& sub) const {
        RunOptions o;
        o.out_dir = root_ / sub;
        return o;
    }
    static std::string slurp(const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    fs::path root_;
};

ExploreParams params(std::uint32_t m, std::uint32_t max_samplers = 2, std::uint32_t dup = 2) {
    ExploreParams p;
    p.domain.m = m;
    p.domain.duplicate_factor = dup;
    p.domain.samples_per_region = 3;
    p.domain.cost_units_per_sample = 50;
    p.max_samplers = max_samplers;
    return p;
}

TEST_F(ExploreTest, FourConstraintLattice) {
    const auto r = run_explore(params(4), 2, options("a"));
    EXPECT_EQ(r.nodes_total, 16U);
    EXPECT_EQ(r.edges_total, 32U);
    EXPECT_EQ(r.witnesses_total, 3U * 32U - 15U);
    EXPECT_TRUE(r.self_check_ran);
    EXPECT_TRUE(run_succeeded(r)) << r.self_check_detail << r.output.first_problem;
    EXPECT_EQ(r.drops, 0U);
}

TEST_F(ExploreTest, EmptyUniverseIsOneLeaf) {
    const auto r = run_explore(params(0), 1, options("a"));
    EXPECT_EQ(r.nodes_total, 1U);
    EXPECT_EQ(r.edges_total, 0U);
    EXPECT_TRUE(run_succeeded(r));
}

TEST_F(ExploreTest, IndexIsByteIdenticalAcrossRunsAndMatchesOracle) {
    auto p = params(6, 4);
    p.policy = QueuePolicy::DFS;
    run_explore(p, 4, options("a"));
    run_explore(p, 4, options("b"));
    run_oracle(p.domain, root_ / "oracle");
    const std::string a = slurp(root_ / "a" / "atlas.idx");
    EXPECT_FALSE(a.empty());
    EXPECT_EQ(a, slurp(root_ / "b" / "atlas.idx"));
    EXPECT_EQ(a, slurp(root_ / "oracle" / "atlas.idx"));
    // Samples are a function of the signature alone, so node files agree too.
    for (NodeId id : {0U, 5U, 63U}) {
        const std::string name = "node_" + std::to_string(id) + ".samples";
        std::string x = slurp(root_ / "a" / name), y = slurp(root_ / "b" / name);
        EXPECT_EQ(x.substr(0, x.find("\nW")), y.substr(0, y.find("\nW"))) << name;
    }
}

TEST_F(ExploreTest, OracleOnTwelveConstraints) {
    DomainConfig c;
    c.m = 12;
    c.samples_per_region = 1;
    c.cost_units_per_sample = 1;
    const auto o = run_oracle(c, std::nullopt);
    EXPECT_EQ(o.reference.signatures.size(), 4096U);
    EXPECT_EQ(o.reference.edges.size(), 24576U);
}

TEST_F(ExploreTest, MessageCountsAreConserved) {
    const auto p = params(5, 3, 1);
    const auto r = run_explore(p, 3, options("a"));
    const std::uint64_t n = r.nodes_total, e = r.edges_total;
    EXPECT_EQ(r.messages_by_kind.at("Sample"), n);
    EXPECT_EQ(r.messages_by_kind.at("SamplingResult"), 2 * e);
    EXPECT_EQ(r.messages_by_kind.at("BoundaryResult"), 2 * e);
    EXPECT_EQ(r.messages_by_kind.at("Done"), n);
    EXPECT_EQ(r.messages_by_kind.at("Kill"), n);
    EXPECT_EQ(r.messages_by_kind.at("WriteSamplePoints"), n + 2 * e - (n - 1));
    EXPECT_EQ(r.messages_by_kind.at("WriteIndex"), 1U);
}

TEST_F(ExploreTest, EventLogRoundTripsAndReplays) {
    const auto p = params(5, 2);
    const auto r = run_explore(p, 2, options("a"));
    std::stringstream tsv;
    write_event_log(tsv, r.events);
    std::string header;
    std::getline(tsv, header);
    EXPECT_EQ(header, kEventLogHeader);
    tsv.seekg(0);
    const EventLog parsed = read_event_log(tsv);
    EXPECT_EQ(parsed, r.events);

    const auto s = replay(parsed, p.max_samplers);
    EXPECT_EQ(s.samples, 32U);
    EXPECT_EQ(s.samples_per_signature.size(), 32U);
    for (const auto& [sig, count] : s.samples_per_signature) EXPECT_EQ(count, 1U) << sig.to_string();
    EXPECT_EQ(s.dones, 32U);
    EXPECT_EQ(s.kills, 32U);
    EXPECT_EQ(s.halts, 1U);
    EXPECT_EQ(s.cap_violations, 0U);
    EXPECT_LE(s.max_active, p.max_samplers);
    EXPECT_EQ(s.final_nodes, 32U);
}

TEST(EventLogFormat, ParsesEveryColumn) {
    const Event e = parse_event("12\tout\tSample\t3\t{0,2}\t4\t1\t9");
    EXPECT_EQ(e.t_ns, 12);
    EXPECT_TRUE(e.outgoing);
    EXPECT_EQ(e.kind, "Sample");
    EXPECT_EQ(e.node, 3U);
    EXPECT_EQ(e.signature, (RegionSignature{0, 2}));
    EXPECT_EQ(e.queue_size, 4U);
    EXPECT_EQ(e.active_samplers, 1U);
    EXPECT_EQ(e.nodes, 9U);
    EXPECT_EQ(format_event(e), "12\tout\tSample\t3\t{0,2}\t4\t1\t9");
    EXPECT_EQ(parse_event("5\tin\tReady\t-\t-\t0\t0\t0").signature, std::nullopt);
    EXPECT_EQ(parse_event("5\tin\tProcess\t-\t{}\t0\t0\t0").signature, RegionSignature{});
    EXPECT_THROW(parse_event("5\tsideways\tReady\t-\t-\t0\t0\t0"), std::invalid_argument);
    EXPECT_THROW(parse_event("5\tin\tReady"), std::invalid_argument);
}

TEST(ReplayLog, FlagsCapViolationsAndDoubleSamples) {
    EventLog log;
    auto ev = [&](bool out, const char* kind, std::uint32_t active, std::optional<RegionSignature> sig = {}) {
        Event e;
        e.outgoing = out;
        e.kind = kind;
        e.active_samplers = active;
        e.signature = std::move(sig);
        log.push_back(e);
    };
    ev(true, "Sample", 1, RegionSignature{});
    ev(true, "Sample", 2, RegionSignature{0});
    ev(true, "Sample", 3, RegionSignature{0});
    const auto s = replay(log, 2);
    EXPECT_EQ(s.cap_violations, 1U);
    EXPECT_EQ(s.max_active, 3U);
    EXPECT_EQ(s.samples_per_signature.at(RegionSignature{0}), 2U);
}

TEST(AtlasMatches, ReportsDifferences) {
    DomainConfig c;
    c.m = 2;
    const auto ref = enumerate_reachable(c);
    Atlas atlas;
    atlas.find_or_insert(RegionSignature{}, 2);
    std::string detail;
    EXPECT_FALSE(atlas_matches(atlas, ref, &detail));
    EXPECT_FALSE(detail.empty());
}

}  // namespace
}  // namespace atlasforge
