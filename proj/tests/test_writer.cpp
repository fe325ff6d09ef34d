#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "atlasforge/writer.hpp"

namespace atlasforge {
namespace {

class WriterTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("atlasforge_writer_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    static std::vector<std::string> lines_of(const fs::path& p) {
        std::ifstream in(p);
        std::vector<std::string> out;
        for (std::string line; std::getline(in, line);) out.push_back(line);
        return out;
    }
    static std::string slurp(const fs::path& p) {
        std::ifstream in(p);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    fs::path dir_;
};

msg::WriteSamplePoints samples(NodeId id, RegionSignature sig, std::uint32_t dim, std::size_t n) {
    msg::WriteSamplePoints w;
    w.node_id = id;
    w.signature = std::move(sig);
    w.dimension = dim;
    for (std::uint32_t i = 0; i < n; ++i) w.sample_points.push_back({i, 0xabc0ULL + i});
    return w;
}

msg::WriteSamplePoints witness(NodeId id, RegionSignature sig, std::uint32_t dim, NodeId parent, std::uint32_t src) {
    msg::WriteSamplePoints w;
    w.node_id = id;
    w.signature = std::move(sig);
    w.dimension = dim;
    w.witness = msg::Witness{parent, src};
    return w;
}

TEST(WriterFormat, Lines) {
    EXPECT_EQ(node_header(RegionSignature{1, 4}, 2, 8), "# sig=1,4 dim=2 count=8");
    EXPECT_EQ(node_header(RegionSignature{}, 3, 0), "# sig= dim=3 count=0");
    EXPECT_EQ(sample_line({3, 0xffULL}), "3 00000000000000ff");
    EXPECT_EQ(witness_line({7, 2}), "W 7 2");
}

TEST_F(WriterTest, SamplesThenWitnessesInOrder) {
    AtlasWriter w(dir_);
    w.write_sample_points(samples(5, RegionSignature{0}, 1, 4));
    auto lines = lines_of(w.layout().node_path(5));
    ASSERT_EQ(lines.size(), 5U);
    EXPECT_EQ(lines[0], "# sig=0 dim=1 count=4");
    EXPECT_EQ(lines[1], "0 000000000000abc0");
    EXPECT_EQ(lines[4], "3 000000000000abc3");

    w.write_sample_points(witness(5, RegionSignature{0}, 1, 2, 1));
    w.write_sample_points(witness(5, RegionSignature{0}, 1, 3, 0));
    lines = lines_of(w.layout().node_path(5));
    ASSERT_EQ(lines.size(), 7U);
    EXPECT_EQ(lines[5], "W 2 1");
    EXPECT_EQ(lines[6], "W 3 0");
    EXPECT_EQ(w.stats().witness_lines, 2U);
}

TEST_F(WriterTest, WitnessesBeforeSamplesSurviveTheRewrite) {
    AtlasWriter w(dir_);
    w.write_sample_points(witness(1, RegionSignature{0, 1}, 0, 4, 2));
    w.write_sample_points(samples(1, RegionSignature{0, 1}, 0, 2));
    w.write_sample_points(witness(1, RegionSignature{0, 1}, 0, 6, 1));
    const auto lines = lines_of(w.layout().node_path(1));
    ASSERT_EQ(lines.size(), 5U);
    EXPECT_EQ(lines[0], "# sig=0,1 dim=0 count=2");
    EXPECT_EQ(lines[3], "W 4 2");
    EXPECT_EQ(lines[4], "W 6 1");
}

TEST_F(WriterTest, ConstructorClearsStaleOutput) {
    fs::create_directories(dir_);
    std::ofstream(dir_ / "node_99.samples") << "stale\n";
    std::ofstream(dir_ / "FAILED") << "x\n";
    std::ofstream(dir_ / "keep.txt") << "mine\n";
    AtlasWriter w(dir_);
    EXPECT_FALSE(fs::exists(dir_ / "node_99.samples"));
    EXPECT_FALSE(fs::exists(dir_ / "FAILED"));
    EXPECT_TRUE(fs::exists(dir_ / "keep.txt"));
}

TEST_F(WriterTest, IndexOfEmptyAtlasIsEmpty) {
    AtlasWriter w(dir_);
    w.write_index(Atlas{}, {});
    EXPECT_TRUE(fs::exists(w.layout().index_path()));
    EXPECT_EQ(slurp(w.layout().index_path()), "");
}

TEST_F(WriterTest, IndexForTwoConstraintLatticeAndRelabel) {
    // Run-time ids in discovery order {} , {1}, {0}, {0,1}; canonical order is {}, {0}, {1}, {0,1}.
    Atlas atlas;
    const NodeId root = atlas.find_or_insert(RegionSignature{}, 2).id;
    const NodeId b = atlas.find_or_insert(RegionSignature{1}, 1).id;
    const NodeId a = atlas.find_or_insert(RegionSignature{0}, 1).id;
    const NodeId top = atlas.find_or_insert(RegionSignature{0, 1}, 0).id;
    atlas.add_edge(root, a);
    atlas.add_edge(root, b);
    atlas.add_edge(a, top);
    atlas.add_edge(b, top);
    atlas.find_or_insert(RegionSignature{0, 1}, 0);  // second discovery of the top

    AtlasWriter w(dir_);
    for (const auto& n : atlas.nodes()) w.write_sample_points(samples(n.id, n.signature, n.dimension, 2));
    w.write_sample_points(witness(top, RegionSignature{0, 1}, 0, b, 1));

    std::vector<NodeId> remap;
    const Atlas canonical = atlas.canonical_relabel(&remap);
    w.write_index(canonical, remap);

    const auto rows = lines_of(w.layout().index_path());
    ASSERT_EQ(rows.size(), 4U);
    EXPECT_EQ(rows[0], "0\t\t2\t\t0");
    EXPECT_EQ(rows[1], "1\t0\t1\t0\t0");
    EXPECT_EQ(rows[2], "2\t1\t1\t0\t0");
    EXPECT_EQ(rows[3], "3\t0,1\t0\t1,2\t1");

    EXPECT_EQ(lines_of(w.layout().node_path(1))[0], "# sig=0 dim=1 count=2");
    EXPECT_EQ(lines_of(w.layout().node_path(2))[0], "# sig=1 dim=1 count=2");
    const auto top_lines = lines_of(w.layout().node_path(3));
    ASSERT_EQ(top_lines.size(), 4U);
    EXPECT_EQ(top_lines[3], "W 2 1");  // parent id rewritten to the canonical id of {1}

    const auto check = verify_output(dir_, canonical, 2);
    EXPECT_TRUE(check.ok) << check.first_problem;
    EXPECT_EQ(check.files_present, 4U);
    EXPECT_EQ(check.data_lines, 8U);
    EXPECT_EQ(check.witness_lines, 1U);
}

TEST_F(WriterTest, VerifyOutputSpotsMissingAndShortFiles) {
    Atlas atlas;
    atlas.find_or_insert(RegionSignature{}, 1);
    atlas.find_or_insert(RegionSignature{0}, 0);
    atlas.add_edge(0, 1);
    AtlasWriter w(dir_);
    w.write_sample_points(samples(0, RegionSignature{}, 1, 3));
    w.write_index(atlas, std::vector<NodeId>{0, 1});
    auto check = verify_output(dir_, atlas, 3);
    EXPECT_FALSE(check.ok);
    EXPECT_EQ(check.files_missing, 1U);

    w.write_sample_points(samples(1, RegionSignature{0}, 0, 2));
    check = verify_output(dir_, atlas, 3);
    EXPECT_FALSE(check.ok);
}

TEST_F(WriterTest, IoFailureRetriesThenMarksFailed) {
    AtlasWriter w(dir_);
    fs::create_directories(w.layout().node_path(0));  // a directory where the file should go
    EXPECT_THROW(w.write_sample_points(samples(0, RegionSignature{}, 0, 1)), WriterError);
    EXPECT_EQ(w.stats().retries, 1U);
    EXPECT_TRUE(fs::exists(w.layout().failed_marker()));
}

}  // namespace
}  // namespace atlasforge
