#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sli/error.hpp"

namespace sli {

// splitmix64; used both as the stream-derivation mixer and as the
// generator itself. Output is identical on every platform, which is what
// the seed-reproducibility guarantees rest on.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {
        // warm up so that small seeds do not produce correlated leading draws
        splitmix64(state_);
        splitmix64(state_);
    }

    // Stream i of a master seed. Streams are independent for distinct i,
    // so parallel workers can own disjoint index ranges and still produce
    // the exact sequence a serial run would.
    static Rng stream(std::uint64_t seed, std::uint64_t index) {
        std::uint64_t s = seed;
        std::uint64_t a = splitmix64(s);
        s = a ^ (index * 0xD1B54A32D192ED03ULL + 0x8CB92BA72F3D8DD7ULL);
        return Rng(s);
    }

    std::uint64_t next_u64() { return splitmix64(state_); }

    // uniform in [0, 1)
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // uniform index in [0, n)
    int pick_uniform(int n) {
        if (n <= 0) throw ContractError("pick_uniform: n must be positive");
        return static_cast<int>(next_double() * n) % n;
    }

    // index sampled proportionally to the given nonnegative weights
    int pick_weighted(std::span<const double> weights) {
        if (weights.empty()) throw ContractError("pick_weighted: empty weights");
        double total = 0.0;
        for (double w : weights) total += w;
        if (total <= 0.0) throw ContractError("pick_weighted: weights sum to zero");
        double u = next_double() * total;
        double acc = 0.0;
        for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
            acc += weights[i];
            if (u < acc) return static_cast<int>(i);
        }
        return static_cast<int>(weights.size() - 1);
    }

private:
    std::uint64_t state_;
};

}  // namespace sli
