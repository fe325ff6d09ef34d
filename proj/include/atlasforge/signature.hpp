#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace atlasforge {

using ConstraintId = std::uint32_t;
using NodeId = std::uint32_t;

/// Raised when an operation would break an atlas, queue or protocol invariant.
/// These are never recoverable within a run.
class InconsistencyError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Canonical identity of a region: a strictly ascending set of constraint ids.
class RegionSignature {
public:
    RegionSignature() = default;
    RegionSignature(std::initializer_list<std::int64_t> ids);

    /// Sorts and deduplicates. Throws std::invalid_argument on negative ids.
    static RegionSignature canonicalize(std::span<const std::int64_t> ids);
    static RegionSignature from_sorted_unchecked(std::vector<ConstraintId> ids);

    std::span<const ConstraintId> ids() const noexcept { return ids_; }
    std::size_t size() const noexcept { return ids_.size(); }
    bool empty() const noexcept { return ids_.empty(); }
    bool contains(ConstraintId c) const noexcept;

    /// Signature with one more constraint. Throws InconsistencyError if c is already present.
    RegionSignature with(ConstraintId c) const;

    /// True iff *this ⊂ other and other has exactly one extra element.
    bool is_covered_by(const RegionSignature& other) const noexcept;

    /// "1,2,3"; empty signature gives "".
    std::string to_string() const;
    /// Inverse of to_string(). Accepts "" and "-" for the empty signature.
    static RegionSignature parse(std::string_view text);

    friend bool operator==(const RegionSignature&, const RegionSignature&) = default;
    friend std::strong_ordering operator<=>(const RegionSignature& a, const RegionSignature& b) = default;

private:
    std::vector<ConstraintId> ids_;
};

/// Size-major, then lexicographic. Used for canonical numbering of persisted atlases.
bool canonical_less(const RegionSignature& a, const RegionSignature& b) noexcept;

struct RegionSignatureHash {
    std::size_t operator()(const RegionSignature& sig) const noexcept;
};

}  // namespace atlasforge
