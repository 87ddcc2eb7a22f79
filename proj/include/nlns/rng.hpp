#pragma once

#include <cstdint>
#include <random>

namespace nlns {

// splitmix64 finalizer, used to derive seeds for independent streams.
inline uint64_t mix64(uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline uint64_t derive_seed(uint64_t seed, uint64_t stream) {
    return mix64(seed ^ mix64(stream + 0x632be59bd9b4e019ULL));
}

// Seeded RNG where every draw goes through explicit extraction code, so
// sequences do not depend on the standard library's distribution
// implementations. One instance per worker/stream; not thread-safe.
class Rng {
public:
    explicit Rng(uint64_t seed) : gen_(seed) {}
    Rng(uint64_t seed, uint64_t stream) : gen_(derive_seed(seed, stream)) {}

    uint64_t next() { return gen_(); }

    // uniform in [0, 1)
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // uniform integer in [lo, hi], both inclusive; rejection keeps it unbiased
    int uniform_int(int lo, int hi) {
        auto span = static_cast<uint64_t>(static_cast<int64_t>(hi) - lo) + 1;
        uint64_t limit = UINT64_MAX - UINT64_MAX % span;
        uint64_t v;
        do {
            v = next();
        } while (v >= limit);
        return lo + static_cast<int>(v % span);
    }

    // uniform index into a container of size n (n >= 1)
    size_t index(size_t n) { return static_cast<size_t>(uniform_int(0, static_cast<int>(n) - 1)); }

    bool chance(double p) { return uniform() < p; }

private:
    std::mt19937_64 gen_;
};

}  // namespace nlns
