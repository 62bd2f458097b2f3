#pragma once

#include <cmath>
#include <cstdint>
#include <span>

namespace fpd {

/// Counter-based 64-bit generator (splitmix64 finalizer over key + counter).
/// Output i depends only on (key, i), so independent substreams are cheap and
/// results are identical regardless of evaluation order or thread count.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t key, std::uint64_t counter = 0)
        : key_(key), counter_(counter) {}

    static std::uint64_t finalize(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t next_u64() {
        ++counter_;
        return finalize(key_ + counter_ * 0x9E3779B97F4A7C15ULL);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform integer in [0, n); n must be positive.
    std::uint64_t bounded(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    bool bernoulli(double p) { return next_double() < p; }

    /// Standard normal via Box-Muller; consumes two uniforms per pair.
    void fill_normals(std::span<double> out) {
        for (std::size_t i = 0; i < out.size(); i += 2) {
            double u1 = next_double();
            double u2 = next_double();
            if (u1 <= 0.0) u1 = 0x1.0p-53;
            const double r = std::sqrt(-2.0 * std::log(u1));
            const double a = 6.283185307179586476925286766559 * u2;
            out[i] = r * std::cos(a);
            if (i + 1 < out.size()) out[i + 1] = r * std::sin(a);
        }
    }

    double next_normal() {
        double z[1];
        fill_normals(z);
        return z[0];
    }

    /// Exact Binomial(n, p) by Bernoulli counting.
    std::uint64_t binomial(std::uint64_t n, double p) {
        std::uint64_t hits = 0;
        for (std::uint64_t i = 0; i < n; ++i)
            if (bernoulli(p)) ++hits;
        return hits;
    }

    std::uint64_t key() const { return key_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_;
};

/// Derives an independent stream key from a user seed and a stream id.
inline std::uint64_t substream_key(std::uint64_t seed, std::uint64_t stream) {
    return CounterRng::finalize(CounterRng::finalize(seed ^ 0x5851F42D4C957F2DULL) +
                                stream * 0x9E3779B97F4A7C15ULL);
}

}  // namespace fpd
