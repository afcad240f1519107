#include "anoqrl/rng.hpp"

namespace anoqrl {

namespace {

std::uint64_t fnv1a(std::string_view text) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

} // namespace

// splitmix64 finaliser
std::uint64_t Rng::mix(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

Rng Rng::split(std::string_view label) const {
    return Rng{mix(seed_ ^ fnv1a(label))};
}

Rng Rng::split(std::string_view label, std::uint64_t index) const {
    return Rng{mix(mix(seed_ ^ fnv1a(label)) + index)};
}

} // namespace anoqrl
