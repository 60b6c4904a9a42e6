#pragma once

#include <cstdint>
#include <vector>

namespace ckl {

// splitmix64: small, fast, and bit-reproducible across platforms. We avoid
// std::uniform_real_distribution since its output is implementation-defined.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1)
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // uniform in [lo, hi)
    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    // uniform sign, +1 or -1
    double sign() { return (next_u64() & 1u) ? 1.0 : -1.0; }

  private:
    std::uint64_t state_;
};

// Halton low-discrepancy sequence, used for reproducible quasi-random
// sampling of phase domains.
class Halton {
  public:
    explicit Halton(int dim, std::uint64_t start_index = 1);

    // next point, each coordinate in (0, 1)
    std::vector<double> next();

  private:
    std::vector<int> bases_;
    std::uint64_t index_;
};

inline double radical_inverse(std::uint64_t i, int base) {
    double f = 1.0, r = 0.0;
    while (i > 0) {
        f /= base;
        r += f * static_cast<double>(i % static_cast<std::uint64_t>(base));
        i /= static_cast<std::uint64_t>(base);
    }
    return r;
}

inline Halton::Halton(int dim, std::uint64_t start_index) : index_(start_index) {
    static const int primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29};
    bases_.assign(primes, primes + (dim < 10 ? dim : 10));
}

inline std::vector<double> Halton::next() {
    std::vector<double> p(bases_.size());
    for (std::size_t d = 0; d < bases_.size(); ++d)
        p[d] = radical_inverse(index_, bases_[d]);
    ++index_;
    return p;
}

} // namespace ckl
