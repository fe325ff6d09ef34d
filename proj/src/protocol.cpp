#include "atlasforge/protocol.hpp"

#include <array>

namespace atlasforge {

std::string_view message_kind_name(std::size_t index) noexcept {
    static constexpr std::array<std::string_view, kMessageKinds> kNames{
        "Start", "Ready", "Process", "Sample", "SamplingResult",
        "BoundaryResult", "Done", "Kill", "WriteSamplePoints", "WriteIndex"};
    return index < kNames.size() ? kNames[index] : "Unknown";
}

}  // namespace atlasforge
