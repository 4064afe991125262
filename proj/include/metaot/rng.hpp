#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace metaot {

/// Counter-based seeding. Every random quantity in the library is drawn from a
/// generator derived from (master seed, purpose tag, index), so the values do
/// not depend on evaluation order or on how work is split across threads.
class SeedSequence {
public:
    explicit SeedSequence(std::uint64_t master) : master_(master) {}

    std::uint64_t master() const { return master_; }

    /// 64-bit seed for substream `index` of `tag`.
    std::uint64_t derive(std::string_view tag, std::uint64_t index) const;

    /// Fresh generator for substream `index` of `tag`.
    std::mt19937_64 stream(std::string_view tag, std::uint64_t index = 0) const {
        return std::mt19937_64(derive(tag, index));
    }

    /// Child sequence whose master is derived from (tag, index).
    SeedSequence child(std::string_view tag, std::uint64_t index = 0) const {
        return SeedSequence(derive(tag, index));
    }

private:
    std::uint64_t master_;
};

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t h = 0xcbf29ce484222325ULL);

}  // namespace metaot
