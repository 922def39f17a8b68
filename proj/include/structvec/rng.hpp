#pragma once

#include <cstdint>
#include <string_view>

namespace structvec {

// Deterministic, platform-independent generator (splitmix64).  All
// randomness in the toolkit flows through this type so that a single seed
// reproduces every run bit for bit; std:: distributions are avoided because
// their output is implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1) with 53 bits of precision.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, n). n must be positive.
    std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

    // Child generator for an independent named stream.  Streams derived with
    // different labels from the same seed are decorrelated, so consuming one
    // never perturbs another.
    Rng derive(std::string_view label) const {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (char ch : label) {
            h ^= static_cast<unsigned char>(ch);
            h *= 0x100000001b3ULL;
        }
        Rng child(state_ ^ h);
        child.next_u64();
        return child;
    }

    Rng derive(std::string_view label, std::uint64_t index) const {
        Rng child = derive(label);
        child.state_ ^= 0x9e3779b97f4a7c15ULL * (index + 1);
        child.next_u64();
        return child;
    }

private:
    std::uint64_t state_;
};

// Fisher-Yates with the deterministic generator above.
template <typename RandomIt>
void shuffle_range(RandomIt first, RandomIt last, Rng& rng) {
    auto n = static_cast<std::uint64_t>(last - first);
    for (std::uint64_t i = n; i > 1; --i) {
        std::uint64_t j = rng.below(i);
        std::swap(first[i - 1], first[j]);
    }
}

}  // namespace structvec
