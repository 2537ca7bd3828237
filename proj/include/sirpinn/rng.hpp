#pragma once

#include <cstdint>
#include <random>

#include "sirpinn/errors.hpp"

namespace sirpinn {

/// Seeded random stream with fixed sampling algorithms, so that a given seed
/// reproduces the same draws on every platform. Distribution sampling from
/// the standard library is implementation-defined and is deliberately not
/// used here.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Box-Muller (one draw per pair, second discarded).
    double normal();

    /// Poisson draw. Inversion below mean 30, transformed rejection (PTRS)
    /// up to 1e7, matched-moments rounded normal above.
    long poisson(double mean);

private:
    long poisson_inversion(double mean);
    long poisson_ptrs(double mean);

    std::mt19937_64 gen_;
};

/// Decorrelated child seed for a named stream (splitmix64 finalizer).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

}  // namespace sirpinn
