#include <gtest/gtest.h>

#include <algorithm>
#include <bit>
#include <chrono>
#include <map>
#include <random>

#include "atlasforge/domain.hpp"

namespace atlasforge {
namespace {

DomainConfig lattice(std::uint32_t m) {
    DomainConfig c;
    c.m = m;
    return c;
}

RegionSignature from_mask(std::uint32_t mask) {
    std::vector<std::int64_t> ids;
    for (std::int64_t c = 0; c < 32; ++c) {
        if (mask & (1U << c)) ids.push_back(c);
    }
    return RegionSignature::canonicalize(ids);
}

std::uint32_t to_mask(const RegionSignature& sig) {
    std::uint32_t mask = 0;
    for (auto c : sig.ids()) mask |= 1U << c;
    return mask;
}

// Fixed-point iteration over all 2^m bitmasks; shares nothing with enumerate_reachable.
ReferenceAtlas brute_force_closure(const DomainConfig& config) {
    const std::uint32_t n = 1U << config.m;
    std::vector<char> reached(n, 0);
    for (const auto& r : config.roots) reached[to_mask(r)] = 1;
    for (bool changed = true; changed;) {
        changed = false;
        for (std::uint32_t s = 0; s < n; ++s) {
            if (!reached[s]) continue;
            for (std::uint32_t c = 0; c < config.m; ++c) {
                if ((s & (1U << c)) || !config.child_mask.allows(from_mask(s), c)) continue;
                if (!reached[s | (1U << c)]) {
                    reached[s | (1U << c)] = 1;
                    changed = true;
                }
            }
        }
    }
    ReferenceAtlas out;
    for (std::uint32_t s = 0; s < n; ++s) {
        if (!reached[s]) continue;
        out.signatures.insert(from_mask(s));
        for (std::uint32_t c = 0; c < config.m; ++c) {
            if (!(s & (1U << c)) && config.child_mask.allows(from_mask(s), c)) {
                out.edges.emplace(from_mask(s), from_mask(s | (1U << c)));
            }
        }
    }
    return out;
}

TEST(DimensionOf, Examples) {
    EXPECT_EQ(dimension_of(lattice(5), RegionSignature{}), 5U);
    EXPECT_EQ(dimension_of(lattice(5), (RegionSignature{0, 1, 2, 3, 4})), 0U);
    EXPECT_EQ(dimension_of(lattice(4), (RegionSignature{1, 3})), 2U);
    EXPECT_THROW(dimension_of(lattice(4), RegionSignature{4}), InvalidSignatureError);
}

TEST(ChildrenOf, Examples) {
    EXPECT_EQ(children_of(lattice(3), RegionSignature{}),
              (std::vector<RegionSignature>{RegionSignature{0}, RegionSignature{1}, RegionSignature{2}}));
    EXPECT_TRUE(children_of(lattice(3), (RegionSignature{0, 1, 2})).empty());
    EXPECT_EQ(children_of(lattice(4), RegionSignature{1}),
              (std::vector<RegionSignature>{RegionSignature{0, 1}, RegionSignature{1, 2}, RegionSignature{1, 3}}));
}

TEST(ChildrenOf, MaskTableRestricts) {
    DomainConfig c = lattice(4);
    c.child_mask.restrict(RegionSignature{}, {2});
    EXPECT_EQ(children_of(c, RegionSignature{}), std::vector<RegionSignature>{RegionSignature{2}});
    EXPECT_EQ(children_of(c, RegionSignature{2}).size(), 3U);  // no entry: all allowed
}

TEST(SampleRegion, CountsAndDuplicates) {
    DomainConfig c = lattice(2);
    c.samples_per_region = 4;
    c.duplicate_factor = 0;
    auto r = sample_region(c, RegionSignature{}, 99);
    EXPECT_EQ(r.sample_points.size(), 4U);
    ASSERT_EQ(r.boundary_events.size(), 2U);
    EXPECT_EQ(r.boundary_events[0].child_signature, RegionSignature{0});
    EXPECT_EQ(r.boundary_events[1].child_signature, RegionSignature{1});

    c.duplicate_factor = 2;
    r = sample_region(c, RegionSignature{}, 99);
    ASSERT_EQ(r.boundary_events.size(), 6U);
    std::map<RegionSignature, int> per_child;
    for (const auto& ev : r.boundary_events) ++per_child[ev.child_signature];
    EXPECT_EQ(per_child[RegionSignature{0}], 3);
    EXPECT_EQ(per_child[RegionSignature{1}], 3);
    for (std::size_t k = 0; k < r.boundary_events.size(); ++k) {
        EXPECT_EQ(r.boundary_events[k].source_point_id, k % 4);
    }
}

TEST(SampleRegion, IsDeterministicAndUsesDocumentedSeeds) {
    DomainConfig c = lattice(4);
    c.samples_per_region = 3;
    c.cost_units_per_sample = 1000;
    const auto sig = RegionSignature{0, 1};
    const std::uint64_t seed = node_seed(1, sig);
    EXPECT_EQ(sample_region(c, sig, seed), sample_region(c, sig, seed));
    // Frozen from an independent Python transcription of the documented hash chain.
    EXPECT_EQ(seed, 0x45e95a04971f0fdbULL);
    EXPECT_EQ(point_seed(seed, 0), 0x34734de02006e631ULL);
    EXPECT_EQ(sample_region(c, sig, seed).sample_points[0].checksum, 0x4fe677526f9882d9ULL);
    EXPECT_THROW(sample_region(c, RegionSignature{7}, seed), InvalidSignatureError);
}

TEST(NodeSeed, FrozenValues) {
    EXPECT_EQ(node_seed(0, RegionSignature{}), 0x813f0174a2367c13ULL);
    EXPECT_EQ(node_seed(42, (RegionSignature{3, 7, 9})), 0xb3c99b76089020ceULL);
    EXPECT_NE(node_seed(1, RegionSignature{0}), node_seed(2, RegionSignature{0}));
}

TEST(BusyWork, IdentityAndComposition) {
    EXPECT_EQ(busy_work(0, 12345), 12345U);
    EXPECT_EQ(busy_work(1, busy_work(1, 77)), busy_work(2, 77));
    EXPECT_EQ(busy_work(3, 12345), 0xe2b8410510668fa6ULL);
    std::mt19937_64 rng(5);
    for (int i = 0; i < 50; ++i) {
        const std::uint64_t s = rng(), a = rng() % 500, b = rng() % 500;
        EXPECT_EQ(busy_work(b, busy_work(a, s)), busy_work(a + b, s));
    }
}

TEST(BusyWork, TimeIsLinearInUnits) {
    auto best_of = [](std::uint64_t units) {
        double best = 1e9;
        volatile std::uint64_t sink = 0;
        for (int rep = 0; rep < 5; ++rep) {
            const auto t0 = std::chrono::steady_clock::now();
            sink = sink + busy_work(units, 0x1234 + rep);
            best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
        }
        return best;
    };
    const double t1 = best_of(1'000'000), t2 = best_of(2'000'000), t4 = best_of(4'000'000);
    EXPECT_NEAR(t2 / t1, 2.0, 0.4) << t1 << " " << t2;
    EXPECT_NEAR(t4 / t1, 4.0, 0.8) << t1 << " " << t4;
}

TEST(EnumerateReachable, LatticeCounts) {
    for (std::uint32_t m : {4U, 10U}) {
        const auto ref = enumerate_reachable(lattice(m));
        const auto brute = brute_force_closure(lattice(m));
        EXPECT_EQ(ref.signatures.size(), std::size_t{1} << m);
        EXPECT_EQ(ref.edges.size(), std::size_t{m} << (m - 1));
        EXPECT_EQ(ref.signatures, brute.signatures);
        EXPECT_EQ(ref.edges, brute.edges);
    }
    EXPECT_EQ(enumerate_reachable(lattice(4)).edges.size(), 32U);
    EXPECT_EQ(enumerate_reachable(lattice(10)).edges.size(), 5120U);
}

TEST(EnumerateReachable, LeafRoot) {
    DomainConfig c = lattice(5);
    c.roots = {RegionSignature{0, 1, 2, 3, 4}};
    const auto ref = enumerate_reachable(c);
    EXPECT_EQ(ref.signatures.size(), 1U);
    EXPECT_TRUE(ref.edges.empty());
}

TEST(EnumerateReachableProperty, MatchesBruteForceUnderRandomMasksAndRoots) {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 60; ++trial) {
        DomainConfig c;
        c.m = 1 + static_cast<std::uint32_t>(rng() % 9);
        c.child_mask = ChildMask::random(rng(), 300 + static_cast<std::uint32_t>(rng() % 700));
        c.roots.clear();
        const int nroots = 1 + static_cast<int>(rng() % 3);
        for (int r = 0; r < nroots; ++r) c.roots.push_back(from_mask(static_cast<std::uint32_t>(rng()) & ((1U << c.m) - 1)));
        const auto ref = enumerate_reachable(c);
        const auto brute = brute_force_closure(c);
        ASSERT_EQ(ref.signatures, brute.signatures);
        ASSERT_EQ(ref.edges, brute.edges);
        // Closure: every child of every member is a member.
        for (const auto& s : ref.signatures) {
            for (const auto& child : children_of(c, s)) ASSERT_TRUE(ref.signatures.contains(child));
        }
    }
}

TEST(EnumerateReachableProperty, EverySubsetHasOneParentPerElement) {
    for (std::uint32_t m = 2; m <= 8; ++m) {
        const auto ref = enumerate_reachable(lattice(m));
        std::map<RegionSignature, std::size_t> parents;
        for (const auto& [p, child] : ref.edges) ++parents[child];
        for (const auto& s : ref.signatures) {
            if (s.size() >= 2) EXPECT_EQ(parents[s], s.size()) << s.to_string();
        }
    }
}

TEST(DomainConfig, Validation) {
    DomainConfig c = lattice(3);
    c.validate();
    c.roots = {RegionSignature{3}};
    EXPECT_THROW(c.validate(), InvalidSignatureError);
    c.roots.clear();
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c = lattice(3);
    c.samples_per_region = 0;
    EXPECT_THROW(c.validate(), std::invalid_argument);
}

}  // namespace
}  // namespace atlasforge
