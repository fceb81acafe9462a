#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace ticketclass {

// xoshiro256++ seeded through splitmix64.
//
// The standard <random> engines are portable but the distributions are not,
// so every draw here is hand-rolled. Seeded runs therefore reproduce
// bit-for-bit across compilers and platforms, which the evaluation and GA
// reproducibility guarantees rely on.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t next_u64();

    // Uniform in [0, 1), 53-bit resolution.
    double next_double();

    // Uniform in [lo, hi).
    double uniform(double lo, double hi);

    // Uniform in [0, bound), unbiased. bound must be >= 1.
    std::uint64_t below(std::uint64_t bound);

    // Uniform integer in [lo, hi], both inclusive.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

    // Derive an independent child stream; deterministic in (state, stream).
    Rng fork(std::uint64_t stream) const;

    template <class T>
    void shuffle(std::vector<T>& values) {
        for (std::size_t i = values.size(); i > 1; --i) {
            std::swap(values[i - 1], values[below(i)]);
        }
    }

private:
    std::uint64_t state_[4];
};

}  // namespace ticketclass
