#pragma once

#include <cstdint>
#include <random>

namespace coxstab {

// Deterministic random source used by every seeded component.
//
// The generator is std::mt19937_64 whose state is seeded through the
// splitmix64 finalizer, so nearby seeds produce unrelated streams. Substream
// `b` of master seed `s` is mt19937_64(mix(s ^ (b + 1) * 0x9E3779B97F4A7C15)).
// Bounded draws use the 128-bit multiply-shift reduction, uniform doubles use
// the top 53 bits. All of this is fixed so that a (seed, substream) pair
// reproduces bit-identically across runs and platforms with IEEE doubles.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(mix(seed)) {}

    static Rng substream(std::uint64_t seed, std::uint64_t stream) {
        return Rng(seed ^ ((stream + 1) * UINT64_C(0x9E3779B97F4A7C15)));
    }

    std::uint64_t next() { return gen_(); }

    // uniform on the open interval (0, 1), 53-bit resolution
    double uniform01() {
        return (static_cast<double>(gen_() >> 11) + 0.5) * 0x1.0p-53;
    }

    // standard normal via Box-Muller; the second deviate is cached
    double normal();

    // Exponential(rate), strictly positive
    double exponential(double rate) {
        return -std::log(uniform01()) / rate;
    }

    // uniform integer in [0, n), n >= 1
    std::uint64_t below(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(gen_()) * n) >> 64);
    }

    // splitmix64 finalizer
    static std::uint64_t mix(std::uint64_t z) {
        z += UINT64_C(0x9E3779B97F4A7C15);
        z = (z ^ (z >> 30)) * UINT64_C(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)) * UINT64_C(0x94D049BB133111EB);
        return z ^ (z >> 31);
    }

private:
    std::mt19937_64 gen_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace coxstab
