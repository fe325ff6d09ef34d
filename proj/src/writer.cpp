#include "atlasforge/writer.hpp"

#include <fstream>
#include <sstream>

namespace atlasforge {

namespace {

std::string join_ids(std::span<const NodeId> ids) {
    std::string out;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (i) out.push_back(',');
        out += std::to_string(ids[i]);
    }
    return out;
}

bool is_output_file(const fs::path& p) {
    const std::string name = p.filename().string();
    if (name == "atlas.idx" || name == "FAILED") return true;
    auto ends_with = [&](std::string_view suffix) {
        return name.size() >= suffix.size() && name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0;
    };
    return name.rfind("node_", 0) == 0 && (ends_with(".samples") || ends_with(".samples.tmp"));
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw WriterError("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

class InFlight {
public:
    explicit InFlight(std::atomic<bool>& flag) : flag_(flag) {
        if (flag_.exchange(true)) throw InconsistencyError("concurrent file operation in writer");
    }
    ~InFlight() { flag_.store(false); }
    InFlight(const InFlight&) = delete;
    InFlight& operator=(const InFlight&) = delete;

private:
    std::atomic<bool>& flag_;
};

}  // namespace

std::vector<IndexRow> index_rows(const Atlas& atlas) {
    std::vector<IndexRow> rows;
    rows.reserve(atlas.size());
    for (const auto& n : atlas.nodes()) {
        rows.push_back({n.id, n.signature, n.dimension, n.parent_ids, n.witness_count});
    }
    return rows;
}

std::string format_index(std::span<const IndexRow> rows) {
    std::string out;
    for (const auto& r : rows) {
        out += std::to_string(r.id);
        out += '\t';
        out += r.signature.to_string();
        out += '\t';
        out += std::to_string(r.dimension);
        out += '\t';
        out += join_ids(r.parents);
        out += '\t';
        out += std::to_string(r.witness_count);
        out += '\n';
    }
    return out;
}

std::string node_header(const RegionSignature& sig, std::uint32_t dim, std::size_t count) {
    return "# sig=" + sig.to_string() + " dim=" + std::to_string(dim) + " count=" + std::to_string(count);
}

std::string sample_line(const SamplePoint& point) {
    static constexpr char kHex[] = "0123456789abcdef";
    std::string hex(16, '0');
    for (int i = 0; i < 16; ++i) hex[15 - i] = kHex[(point.checksum >> (4 * i)) & 0xf];
    return std::to_string(point.point_id) + " " + hex;
}

std::string witness_line(const msg::Witness& witness) {
    return "W " + std::to_string(witness.parent_id) + " " + std::to_string(witness.source_point_id);
}

AtlasWriter::AtlasWriter(fs::path out_dir) : layout_{std::move(out_dir)} {
    fs::create_directories(layout_.out_dir);
    for (const auto& entry : fs::directory_iterator(layout_.out_dir)) {
        if (entry.is_regular_file() && is_output_file(entry.path())) fs::remove(entry.path());
    }
}

template <class Op>
void AtlasWriter::with_retry(const std::string& what, Op&& op) {
    for (int attempt = 0;; ++attempt) {
        try {
            op();
            return;
        } catch (const std::exception& e) {
            if (attempt == 0) {
                ++stats_.retries;
                continue;
            }
            std::ofstream marker(layout_.failed_marker());
            marker << what << ": " << e.what() << '\n';
            throw WriterError(what + ": " + e.what());
        }
    }
}

void AtlasWriter::write_file(const fs::path& path, const std::string& content, bool append) {
    std::ofstream out(path, append ? std::ios::binary | std::ios::app : std::ios::binary | std::ios::trunc);
    if (!out) throw WriterError("cannot open " + path.string());
    out << content;
    out.flush();
    if (!out) throw WriterError("write failed for " + path.string());
}

void AtlasWriter::write_sample_points(const msg::WriteSamplePoints& m) {
    InFlight guard(in_flight_);
    const fs::path path = layout_.node_path(m.node_id);
    NodeFile& file = files_[m.node_id];

    if (m.witness) {
        std::string content;
        const bool fresh = !file.samples_written && file.early_witnesses.empty();
        if (fresh) content = node_header(m.signature, m.dimension, 0) + "\n";
        content += witness_line(*m.witness) + "\n";
        with_retry("witness for node " + std::to_string(m.node_id),
                   [&] { write_file(path, content, !fresh); });
        if (!file.samples_written) file.early_witnesses.push_back(*m.witness);
        ++stats_.witness_lines;
        return;
    }

    if (file.samples_written) throw InconsistencyError("samples for node " + std::to_string(m.node_id) + " written twice");
    std::string content = node_header(m.signature, m.dimension, m.sample_points.size()) + "\n";
    for (const auto& p : m.sample_points) content += sample_line(p) + "\n";
    for (const auto& w : file.early_witnesses) content += witness_line(w) + "\n";
    with_retry("samples for node " + std::to_string(m.node_id), [&] { write_file(path, content, false); });
    file.samples_written = true;
    file.early_witnesses.clear();
    ++stats_.sample_files;
    stats_.sample_lines += m.sample_points.size();
}

void AtlasWriter::write_index(const Atlas& atlas, std::span<const NodeId> old_to_new) {
    InFlight guard(in_flight_);
    auto remap = [&](NodeId old) -> NodeId {
        if (old >= old_to_new.size()) throw InconsistencyError("node " + std::to_string(old) + " missing from relabel map");
        return old_to_new[old];
    };

    bool identity = true;
    for (std::size_t i = 0; i < old_to_new.size(); ++i) identity = identity && old_to_new[i] == i;

    if (!identity) {
        // Pass 1: rewrite every node file under its new name. Pass 2: swap names.
        std::vector<std::pair<fs::path, fs::path>> renames;
        for (const auto& [old, _] : files_) {
            const NodeId fresh = remap(old);
            const fs::path src = layout_.node_path(old);
            fs::path tmp = layout_.node_path(fresh);
            tmp += ".tmp";
            with_retry("relabel node " + std::to_string(old), [&] {
                std::istringstream in(read_file(src));
                std::string out, line;
                while (std::getline(in, line)) {
                    if (line.size() > 2 && line[0] == 'W' && line[1] == ' ') {
                        std::istringstream ws(line.substr(2));
                        NodeId parent = 0;
                        std::uint32_t point = 0;
                        ws >> parent >> point;
                        line = witness_line({remap(parent), point});
                    }
                    out += line;
                    out += '\n';
                }
                write_file(tmp, out, false);
            });
            renames.emplace_back(tmp, layout_.node_path(fresh));
        }
        for (const auto& [old, _] : files_) fs::remove(layout_.node_path(old));
        for (const auto& [tmp, dst] : renames) {
            with_retry("rename " + tmp.string(), [&] { fs::rename(tmp, dst); });
        }
        std::unordered_map<NodeId, NodeFile> relabeled;
        for (auto& [old, f] : files_) relabeled.emplace(remap(old), std::move(f));
        files_ = std::move(relabeled);
    }

    const auto rows = index_rows(atlas);
    with_retry("atlas index", [&] { write_file(layout_.index_path(), format_index(rows), false); });
}

void write_index_file(const fs::path& path, std::span<const IndexRow> rows) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw WriterError("cannot open " + path.string());
    out << format_index(rows);
    if (!out) throw WriterError("write failed for " + path.string());
}

void WriterActor::receive(ActorContext&, MessageEnvelope envelope) {
    if (auto* m = std::get_if<msg::WriteSamplePoints>(&envelope.message)) {
        writer_.write_sample_points(*m);
    } else if (auto* idx = std::get_if<msg::WriteIndex>(&envelope.message)) {
        writer_.write_index(*idx->atlas, idx->old_to_new);
    } else {
        throw InconsistencyError("writer cannot handle " + std::string(message_kind_name(envelope.message)));
    }
}

OutputCheck verify_output(const fs::path& out_dir, const Atlas& atlas, std::uint32_t samples_per_region) {
    OutputCheck check;
    OutputLayout layout{out_dir};
    auto problem = [&](std::string what) {
        if (check.ok) check.first_problem = std::move(what);
        check.ok = false;
    };
    check.index_present = fs::exists(layout.index_path());
    if (!check.index_present) problem("atlas.idx missing");
    if (fs::exists(layout.failed_marker())) problem("FAILED marker present");

    for (const auto& node : atlas.nodes()) {
        const fs::path path = layout.node_path(node.id);
        std::ifstream in(path);
        if (!in) {
            ++check.files_missing;
            problem("missing " + path.filename().string());
            continue;
        }
        ++check.files_present;
        std::string line;
        std::getline(in, line);
        const std::string expected_header = node_header(node.signature, node.dimension, samples_per_region);
        if (line != expected_header) problem(path.filename().string() + ": header '" + line + "'");
        std::uint64_t data = 0, witnesses = 0;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            if (line[0] == 'W') {
                ++witnesses;
            } else {
                ++data;
            }
        }
        if (data != samples_per_region) {
            problem(path.filename().string() + ": " + std::to_string(data) + " data lines");
        }
        if (witnesses != node.witness_count) {
            problem(path.filename().string() + ": " + std::to_string(witnesses) + " witness lines, atlas says " +
                    std::to_string(node.witness_count));
        }
        check.data_lines += data;
        check.witness_lines += witnesses;
    }
    return check;
}

}  // namespace atlasforge
