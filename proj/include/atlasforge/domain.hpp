#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "atlasforge/signature.hpp"

namespace atlasforge {

/// A signature that references constraint ids outside the configured universe.
class InvalidSignatureError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Restricts which constraints may be added to a given signature.
///
/// Lookup order: an explicit table entry for the signature, then the optional seeded random
/// density, then "everything allowed".
class ChildMask {
public:
    static ChildMask allow_all() { return {}; }
    /// Each (signature, constraint) pair is allowed with probability keep_permille / 1000,
    /// decided by a hash of (seed, signature, constraint).
    static ChildMask random(std::uint64_t seed, std::uint32_t keep_permille);

    /// Only `allowed` may be added to `sig`.
    void restrict(const RegionSignature& sig, std::vector<ConstraintId> allowed);

    bool allows(const RegionSignature& sig, ConstraintId c) const;
    bool is_allow_all() const noexcept { return table_.empty() && !random_; }

private:
    struct RandomDensity {
        std::uint64_t seed;
        std::uint32_t keep_permille;
    };
    std::map<RegionSignature, std::set<ConstraintId>> table_;
    std::optional<RandomDensity> random_;
};

struct DomainConfig {
    std::uint32_t m = 0;
    std::vector<RegionSignature> roots{RegionSignature{}};
    ChildMask child_mask;
    std::uint32_t samples_per_region = 8;
    std::uint32_t duplicate_factor = 2;
    std::uint64_t cost_units_per_sample = 1000;
    std::uint64_t seed = 1;

    /// Throws std::invalid_argument when roots are empty or invalid, or samples_per_region is 0.
    void validate() const;
};

struct SamplePoint {
    std::uint32_t point_id = 0;
    std::uint64_t checksum = 0;

    friend bool operator==(const SamplePoint&, const SamplePoint&) = default;
};

struct BoundaryEvent {
    RegionSignature child_signature;
    std::uint32_t source_point_id = 0;

    friend bool operator==(const BoundaryEvent&, const BoundaryEvent&) = default;
};

struct SampleResult {
    std::vector<SamplePoint> sample_points;
    std::vector<BoundaryEvent> boundary_events;

    friend bool operator==(const SampleResult&, const SampleResult&) = default;
};

/// m - |sig|. Throws InvalidSignatureError for ids >= m.
std::uint32_t dimension_of(const DomainConfig& config, const RegionSignature& sig);

/// sig ∪ {c} for every c not in sig that the mask allows, ascending in c.
std::vector<RegionSignature> children_of(const DomainConfig& config, const RegionSignature& sig);

/// Applies the mix permutation `units` times starting from `seed`.
std::uint64_t busy_work(std::uint64_t units, std::uint64_t seed) noexcept;

/// The fixed 64-bit mix permutation used by busy_work (one step).
constexpr std::uint64_t mix_step(std::uint64_t x) noexcept {
    return x * 6364136223846793005ULL + 1442695040888963407ULL;
}

/// FNV-1a over the 8 little-endian bytes of `seed` followed by 4 little-endian bytes per
/// constraint id, finished with the splitmix64 finalizer.
std::uint64_t node_seed(std::uint64_t seed, const RegionSignature& sig) noexcept;

/// Seed for one sample point: splitmix64 finalizer of node_seed + (point_id + 1) * golden.
std::uint64_t point_seed(std::uint64_t node_seed, std::uint32_t point_id) noexcept;

/// Samples one region. Produces samples_per_region points, each checksummed by busy_work,
/// and (duplicate_factor + 1) passes over children_of, the k-th event attributed to point
/// k mod samples_per_region. Pure function of its arguments.
SampleResult sample_region(const DomainConfig& config, const RegionSignature& sig, std::uint64_t node_seed);

/// Sequential closure of the roots under children_of; no actors, no atlas.
struct ReferenceAtlas {
    std::set<RegionSignature> signatures;
    std::set<std::pair<RegionSignature, RegionSignature>> edges;  // (parent, child)
};

ReferenceAtlas enumerate_reachable(const DomainConfig& config);

}  // namespace atlasforge
