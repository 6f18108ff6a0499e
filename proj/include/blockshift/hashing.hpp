#pragma once

#include <cstdint>
#include <span>
#include <string_view>

namespace blockshift {

// splitmix64 finalizer. Every pseudo-random choice in the fast profile goes through this.
constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// mix64(mix64(mix64(mix64(seed) ^ a) ^ b) ^ c)
constexpr std::uint64_t mix_key(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    return mix64(mix64(mix64(mix64(seed) ^ a) ^ b) ^ c);
}

// 64-bit FNV-1a.
class Fnv1a {
public:
    void update(std::span<const std::uint8_t> bytes) {
        for (std::uint8_t b : bytes) {
            state_ ^= b;
            state_ *= 0x100000001B3ULL;
        }
    }
    void update(std::string_view text) {
        update(std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
    }
    std::uint64_t digest() const { return state_; }

private:
    std::uint64_t state_ = 0xCBF29CE484222325ULL;
};

}  // namespace blockshift
