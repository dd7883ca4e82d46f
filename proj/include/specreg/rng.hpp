#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace specreg::rng {

// splitmix64 finalizer; used both as a mixer and as a seed deriver.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Derived stream seed for task `index` under a master seed. Every trial,
// sample row and worker draws its seed through this function, so results
// do not depend on scheduling or thread count.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    return splitmix64(splitmix64(master) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

// Deterministic uniform in (0,1]; 53 mantissa bits.
inline double uniform_closed_open(std::mt19937_64& gen) {
    return static_cast<double>((gen() >> 11) + 1) * 0x1.0p-53;
}

// Deterministic standard Gaussian via Box-Muller. std::normal_distribution is
// implementation-defined, which would break the cross-platform seed contract;
// this consumes exactly two engine draws per variate.
inline double gaussian(std::mt19937_64& gen) {
    const double u1 = uniform_closed_open(gen);
    const double u2 = uniform_closed_open(gen);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
}

// Stream of uniform random signs packed 64 per engine draw.
class SignStream {
public:
    explicit SignStream(std::uint64_t seed) : gen_(seed) {}

    double next_sign() {
        if (bits_left_ == 0) {
            word_ = gen_();
            bits_left_ = 64;
        }
        const double s = (word_ & 1u) ? 1.0 : -1.0;
        word_ >>= 1;
        --bits_left_;
        return s;
    }

    // Hands the underlying engine over (e.g. for a trailing Gaussian draw).
    std::mt19937_64& engine() { return gen_; }

private:
    std::mt19937_64 gen_;
    std::uint64_t word_ = 0;
    int bits_left_ = 0;
};

} // namespace specreg::rng
