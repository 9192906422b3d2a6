#ifndef KCMD_RNG_HPP
#define KCMD_RNG_HPP

#include <cmath>
#include <cstdint>

namespace kcmd {

// splitmix64 step; also used to derive substream states from (seed, id) pairs.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Mix a seed and a stream id into a single 64-bit state. The contract is that
// distinct (seed, id) pairs give statistically independent streams and the
// mapping is fixed forever; replicate/trial reproducibility depends on it.
inline std::uint64_t mix_stream(std::uint64_t seed, std::uint64_t id) {
    std::uint64_t s = seed ^ (0x9e3779b97f4a7c15ULL * (id + 1));
    std::uint64_t a = splitmix64(s);
    std::uint64_t b = splitmix64(s);
    return a ^ (b << 1);
}

// xoshiro256++ with Box-Muller normals. Self-contained so that sequences are
// identical on every platform and toolchain.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t s = seed;
        for (auto& word : state_) word = splitmix64(s);
    }

    static Rng stream(std::uint64_t seed, std::uint64_t id) {
        return Rng(mix_stream(seed, id));
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform on [0,1) with 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    // Standard normal via Box-Muller; the cosine/sine pair is cached.
    double normal() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 6.283185307179586476925286766559 * u2;
        cached_ = radius * std::sin(angle);
        have_cached_ = true;
        return radius * std::cos(angle);
    }

    double normal(double mean, double sd) { return mean + sd * normal(); }

    bool bernoulli(double p) { return uniform() < p; }

    // Index into `probs` (assumed to sum to 1); the last bucket absorbs
    // rounding slack.
    int categorical(const double* probs, int count) {
        const double u = uniform();
        double acc = 0.0;
        for (int level = 0; level < count - 1; ++level) {
            acc += probs[level];
            if (u < acc) return level;
        }
        return count - 1;
    }

    // (chi^2_1 - 1)/sqrt(2): centered, unit-variance squared normal.
    double centered_chisq1() {
        const double z = normal();
        return (z * z - 1.0) / 1.4142135623730950488;
    }

    // Student t with 1 df as a ratio of independent standard normals.
    double student_t1() {
        double denom = normal();
        while (denom == 0.0) denom = normal();
        return normal() / denom;
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t state_[4] = {};
    double cached_ = 0.0;
    bool have_cached_ = false;
};

}  // namespace kcmd

#endif
