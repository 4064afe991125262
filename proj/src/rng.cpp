#include "metaot/rng.hpp"

namespace metaot {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t h) {
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t SeedSequence::derive(std::string_view tag, std::uint64_t index) const {
    std::uint64_t h = splitmix64(master_ ^ fnv1a64(tag));
    return splitmix64(h ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

}  // namespace metaot
