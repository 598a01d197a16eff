#ifndef PROFSKETCH_HASHING_HPP
#define PROFSKETCH_HASHING_HPP

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace profsketch {

// Opaque entropy source. The same seed yields identical hash outputs for
// all inputs, so every randomized structure in this library is replayable.
struct HashSeed {
    std::uint64_t value = 0;
};

inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Seeded PRF-style 64-bit hash. Two mixing rounds with the seed folded in
// at both stages keep distinct seeds statistically unrelated.
inline std::uint64_t hash_u64(HashSeed seed, std::uint64_t x) {
    const std::uint64_t k = seed.value * 0x9e3779b97f4a7c15ULL + 0xd1b54a32d192ed03ULL;
    return mix64(mix64(x ^ k) + std::rotl(k, 32));
}

// Derives an independent sub-seed; used to split one master seed into the
// per-structure seeds (sampling hash, bucket hashes, trial seeds, ...).
inline HashSeed derive(HashSeed seed, std::uint64_t tag) {
    return HashSeed{hash_u64(seed, tag ^ 0xa0761d6478bd642fULL)};
}

// Top 53 bits of a hash as a uniform real in [0, 1).
inline double unit_real(std::uint64_t h) {
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

// 1-based index of the lowest set bit. A zero input returns 65, treated as
// "sampled at every level" (reachable with probability 2^-64).
inline std::uint32_t lsb_level(std::uint64_t v) {
    return v == 0 ? 65u : static_cast<std::uint32_t>(std::countr_zero(v)) + 1u;
}

// Inverse-transform sample of Poisson(1): smallest j with CDF(j) > u.
inline std::uint32_t poisson_unit_draw(double u) {
    if (u < 0.0 || u >= 1.0) throw std::domain_error("poisson_unit_draw: u outside [0,1)");
    double pmf = 0.36787944117144233;  // e^-1
    double cdf = pmf;
    std::uint32_t j = 0;
    while (cdf <= u && j < 256) {
        ++j;
        pmf /= static_cast<double>(j);
        cdf += pmf;
    }
    return j;
}

// Polynomial hash family over a prime field: x -> (sum_j c_j x^j mod p) mod range.
// With random coefficients the family is k-wise independent. This is the
// optional high-fidelity backend; the default randomness is hash_u64.
class KWiseFamily {
  public:
    // Mersenne prime; products fit in 128 bits for operands below it.
    static constexpr std::uint64_t kDefaultPrime = (1ULL << 61) - 1;

    KWiseFamily(std::vector<std::uint64_t> coefficients, std::uint64_t prime, std::uint64_t range)
        : coefficients_(std::move(coefficients)), prime_(prime), range_(range) {
        if (coefficients_.size() < 2) throw std::invalid_argument("KWiseFamily: degree must be >= 2");
        if (range_ == 0) throw std::invalid_argument("KWiseFamily: empty range");
        for (auto c : coefficients_)
            if (c >= prime_) throw std::invalid_argument("KWiseFamily: coefficient outside field");
    }

    static KWiseFamily random(std::uint32_t degree, std::uint64_t range, HashSeed seed) {
        std::vector<std::uint64_t> coeffs(degree);
        for (std::uint32_t j = 0; j < degree; ++j)
            coeffs[j] = hash_u64(seed, j) % kDefaultPrime;
        return KWiseFamily(std::move(coeffs), kDefaultPrime, range);
    }

    std::uint64_t operator()(std::uint64_t x) const {
        if (x >= prime_) throw std::domain_error("KWiseFamily: input outside field");
        unsigned __int128 acc = 0;
        for (auto it = coefficients_.rbegin(); it != coefficients_.rend(); ++it) {
            acc = (acc * x + *it) % prime_;
        }
        return static_cast<std::uint64_t>(acc) % range_;
    }

    std::uint32_t degree() const { return static_cast<std::uint32_t>(coefficients_.size()); }
    std::uint64_t prime() const { return prime_; }
    std::uint64_t range() const { return range_; }

  private:
    std::vector<std::uint64_t> coefficients_;
    std::uint64_t prime_;
    std::uint64_t range_;
};

}  // namespace profsketch

#endif
