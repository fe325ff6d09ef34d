#include "atlasforge/signature.hpp"

#include <algorithm>
#include <charconv>

namespace atlasforge {

RegionSignature::RegionSignature(std::initializer_list<std::int64_t> ids)
    : RegionSignature(canonicalize(std::span<const std::int64_t>(ids.begin(), ids.size()))) {}

RegionSignature RegionSignature::canonicalize(std::span<const std::int64_t> ids) {
    std::vector<ConstraintId> out;
    out.reserve(ids.size());
    for (std::int64_t id : ids) {
        if (id < 0 || id > std::int64_t{UINT32_MAX}) {
            throw std::invalid_argument("constraint id out of range: " + std::to_string(id));
        }
        out.push_back(static_cast<ConstraintId>(id));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return from_sorted_unchecked(std::move(out));
}

RegionSignature RegionSignature::from_sorted_unchecked(std::vector<ConstraintId> ids) {
    RegionSignature sig;
    sig.ids_ = std::move(ids);
    return sig;
}

bool RegionSignature::contains(ConstraintId c) const noexcept {
    return std::binary_search(ids_.begin(), ids_.end(), c);
}

RegionSignature RegionSignature::with(ConstraintId c) const {
    auto pos = std::lower_bound(ids_.begin(), ids_.end(), c);
    if (pos != ids_.end() && *pos == c) {
        throw InconsistencyError("constraint " + std::to_string(c) + " already in {" + to_string() + "}");
    }
    std::vector<ConstraintId> out;
    out.reserve(ids_.size() + 1);
    out.insert(out.end(), ids_.begin(), pos);
    out.push_back(c);
    out.insert(out.end(), pos, ids_.end());
    return from_sorted_unchecked(std::move(out));
}

bool RegionSignature::is_covered_by(const RegionSignature& other) const noexcept {
    if (other.size() != size() + 1) return false;
    return std::includes(other.ids_.begin(), other.ids_.end(), ids_.begin(), ids_.end());
}

std::string RegionSignature::to_string() const {
    std::string out;
    for (std::size_t i = 0; i < ids_.size(); ++i) {
        if (i) out.push_back(',');
        out += std::to_string(ids_[i]);
    }
    return out;
}

RegionSignature RegionSignature::parse(std::string_view text) {
    std::vector<std::int64_t> ids;
    if (text.empty() || text == "-") return {};
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find(',', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view tok = text.substr(start, end - start);
        std::int64_t v = 0;
        auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (tok.empty() || ec != std::errc{} || ptr != tok.data() + tok.size()) {
            throw std::invalid_argument("bad signature text: '" + std::string(text) + "'");
        }
        ids.push_back(v);
        start = end + 1;
    }
    return canonicalize(ids);
}

bool canonical_less(const RegionSignature& a, const RegionSignature& b) noexcept {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
}

std::size_t RegionSignatureHash::operator()(const RegionSignature& sig) const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (ConstraintId c : sig.ids()) {
        h ^= c + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
}

}  // namespace atlasforge
