#include "atlasforge/domain.hpp"

#include <deque>
#include <string>

namespace atlasforge {

namespace {

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;
constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

std::uint64_t splitmix_finalize(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t fnv_bytes(std::uint64_t h, std::uint64_t value, int bytes) noexcept {
    for (int i = 0; i < bytes; ++i) {
        h ^= (value >> (8 * i)) & 0xffU;
        h *= kFnvPrime;
    }
    return h;
}

}  // namespace

ChildMask ChildMask::random(std::uint64_t seed, std::uint32_t keep_permille) {
    ChildMask mask;
    mask.random_ = RandomDensity{seed, keep_permille};
    return mask;
}

void ChildMask::restrict(const RegionSignature& sig, std::vector<ConstraintId> allowed) {
    table_[sig] = std::set<ConstraintId>(allowed.begin(), allowed.end());
}

bool ChildMask::allows(const RegionSignature& sig, ConstraintId c) const {
    if (auto it = table_.find(sig); it != table_.end()) return it->second.contains(c);
    if (random_) {
        std::uint64_t h = node_seed(random_->seed, sig);
        h = splitmix_finalize(h ^ (std::uint64_t{c} + 1) * kGolden);
        return h % 1000 < random_->keep_permille;
    }
    return true;
}

void DomainConfig::validate() const {
    if (roots.empty()) throw std::invalid_argument("at least one root signature is required");
    if (samples_per_region == 0) throw std::invalid_argument("samples_per_region must be positive");
    for (const auto& root : roots) (void)dimension_of(*this, root);
}

std::uint32_t dimension_of(const DomainConfig& config, const RegionSignature& sig) {
    if (!sig.empty() && sig.ids().back() >= config.m) {
        throw InvalidSignatureError("signature {" + sig.to_string() + "} uses ids >= m=" + std::to_string(config.m));
    }
    return config.m - static_cast<std::uint32_t>(sig.size());
}

std::vector<RegionSignature> children_of(const DomainConfig& config, const RegionSignature& sig) {
    std::vector<RegionSignature> out;
    for (ConstraintId c = 0; c < config.m; ++c) {
        if (!sig.contains(c) && config.child_mask.allows(sig, c)) out.push_back(sig.with(c));
    }
    return out;
}

std::uint64_t busy_work(std::uint64_t units, std::uint64_t seed) noexcept {
    std::uint64_t x = seed;
    for (std::uint64_t i = 0; i < units; ++i) x = mix_step(x);
    return x;
}

std::uint64_t node_seed(std::uint64_t seed, const RegionSignature& sig) noexcept {
    std::uint64_t h = fnv_bytes(kFnvOffset, seed, 8);
    for (ConstraintId c : sig.ids()) h = fnv_bytes(h, c, 4);
    return splitmix_finalize(h);
}

std::uint64_t point_seed(std::uint64_t node_seed, std::uint32_t point_id) noexcept {
    return splitmix_finalize(node_seed + (std::uint64_t{point_id} + 1) * kGolden);
}

SampleResult sample_region(const DomainConfig& config, const RegionSignature& sig, std::uint64_t seed) {
    (void)dimension_of(config, sig);
    SampleResult result;
    result.sample_points.reserve(config.samples_per_region);
    for (std::uint32_t p = 0; p < config.samples_per_region; ++p) {
        result.sample_points.push_back({p, busy_work(config.cost_units_per_sample, point_seed(seed, p))});
    }
    const auto children = children_of(config, sig);
    result.boundary_events.reserve(children.size() * (std::size_t{config.duplicate_factor} + 1));
    std::uint32_t k = 0;
    for (std::uint32_t pass = 0; pass <= config.duplicate_factor; ++pass) {
        for (const auto& child : children) {
            result.boundary_events.push_back({child, k++ % config.samples_per_region});
        }
    }
    return result;
}

ReferenceAtlas enumerate_reachable(const DomainConfig& config) {
    ReferenceAtlas ref;
    std::deque<RegionSignature> work;
    for (const auto& root : config.roots) {
        (void)dimension_of(config, root);
        if (ref.signatures.insert(root).second) work.push_back(root);
    }
    while (!work.empty()) {
        RegionSignature sig = std::move(work.front());
        work.pop_front();
        for (auto& child : children_of(config, sig)) {
            ref.edges.emplace(sig, child);
            if (ref.signatures.insert(child).second) work.push_back(std::move(child));
        }
    }
    return ref;
}

}  // namespace atlasforge
