#ifndef REEFOPT_RNG_HPP
#define REEFOPT_RNG_HPP

#include <cstdint>
#include <random>
#include <vector>

namespace reefopt {

// 64-bit-seeded stream with hand-rolled distributions so that a run replays
// bit-identically on any platform (std:: distributions are implementation
// defined).
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : gen_(seed) {}

    static constexpr const char* kName = "mt19937_64";

    std::uint64_t next_u64() { return gen_(); }

    // [0,1)
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // inclusive range, rejection sampling keeps it unbiased
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

    bool bernoulli(double p) { return uniform() < p; }

    // standard normal, Box-Muller with one cached draw
    double gaussian();

    // Fisher-Yates permutation of 0..n-1
    std::vector<int> permutation(int n);

private:
    std::mt19937_64 gen_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

} // namespace reefopt

#endif
