#pragma once

#include <charconv>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace dmine {

// FNV-1a, used for structural hashes and report digests.
constexpr std::uint64_t fnv1a(std::string_view s,
                              std::uint64_t h = 1469598103934665603ULL) {
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string to_hex(std::uint64_t v);

std::vector<std::string> split(std::string_view line, char delim);

// Strict numeric parse; rejects trailing garbage, inf and nan.
std::optional<double> parse_number(std::string_view s);

// Fixed-point formatting used in rule text and report files.
std::string format_fixed(double v, int decimals);

// Deterministic RNG wrapper; all draws go through explicit helpers so
// generated streams are bit-stable across platforms.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    double uniform01() {
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }
    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform01();
    }
    // inclusive bounds
    std::uint64_t uniform_int(std::uint64_t lo, std::uint64_t hi) {
        return lo + eng_() % (hi - lo + 1);
    }
    bool bernoulli(double p) { return uniform01() < p; }

private:
    std::mt19937_64 eng_;
};

}  // namespace dmine
