#ifndef PROFSKETCH_DISTINCT_HPP
#define PROFSKETCH_DISTINCT_HPP

#include <cmath>
#include <cstdint>
#include <queue>
#include <unordered_set>
#include <vector>

#include "profsketch/hashing.hpp"

namespace profsketch {

// K-minimum-values distinct counter. Keeps the k smallest distinct hash
// values seen; below capacity the count is exact, above it the k-th
// smallest hash gives the estimate (k-1)/v_k with v_k a fraction of the
// 64-bit range. Relative standard error is about 1/sqrt(k).
class KmvSketch {
  public:
    KmvSketch(std::size_t capacity, HashSeed seed);

    void update(std::uint64_t x);
    double estimate() const;

    std::size_t size() const { return heap_.size(); }
    std::size_t capacity() const { return capacity_; }

    // Retained hashes in ascending order (test hook).
    std::vector<std::uint64_t> sorted_values() const;

    // Capacity needed for relative error eps at >= 90% of trials.
    static std::size_t capacity_for(double eps, double c = 100.0) {
        return static_cast<std::size_t>(std::ceil(c / (eps * eps)));
    }

  private:
    std::size_t capacity_;
    HashSeed seed_;
    std::priority_queue<std::uint64_t> heap_;   // max-heap over retained hashes
    std::unordered_set<std::uint64_t> member_;  // dedup for retained hashes
};

// Constant-factor distinct tracker, readable after every update. A small
// fixed-capacity KMV queried continuously; stands in for a strong tracking
// sketch at desk scale.
class TrackingDistinct {
  public:
    explicit TrackingDistinct(HashSeed seed, std::size_t capacity = 64) : inner_(capacity, seed) {}

    void update(std::uint64_t x) { inner_.update(x); }
    double estimate() const { return inner_.estimate(); }

  private:
    KmvSketch inner_;
};

}  // namespace profsketch

#endif
