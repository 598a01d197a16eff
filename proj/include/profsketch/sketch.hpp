#ifndef PROFSKETCH_SKETCH_HPP
#define PROFSKETCH_SKETCH_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "profsketch/distinct.hpp"
#include "profsketch/hashing.hpp"

namespace profsketch {

enum class ErrorType { D, M };

// Tuning constants of the main sketch. Defaults derive everything from the
// error parameter:
//   B = ceil(kBucketConstD / eps^2)                 (error type D)
//   B = ceil(kBucketConstM * ln(2 + 1/eps) / eps^2) (error type M)
//   tau = ceil(2/eps) for type M, caller-chosen for type D
//   T = 64 B^2,  H = ceil(2 log2 B) + 4,  K = 16
// K = 16 keeps the expected sample size at or below B/8 for any stream.
// Setting sampling_constant to 0 disables level advancement (the sketch
// then samples at probability 1), which several statistical tests rely on.
struct SketchConfig {
    double epsilon = 0.1;
    ErrorType error_type = ErrorType::D;
    std::uint64_t bucket_count = 0;      // B
    std::uint32_t tau = 0;               // frequency threshold
    std::uint32_t max_copies = 0;        // H
    std::uint64_t compressed_domain = 0; // T
    double sampling_constant = 16.0;     // K
    std::uint64_t domain_upper_bound = ~0ULL;  // n, used by the type-M level trigger
    std::uint32_t initial_level = 1;
    HashSeed seed;

    static SketchConfig defaults(double epsilon, ErrorType error_type, HashSeed seed,
                                 std::uint32_t tau_for_type_d = 3);
    void validate() const;  // throws std::invalid_argument on a bad config
};

// Bucket-count constants calibrated on the acceptance benchmarks.
inline constexpr double kBucketConstD = 64.0;
inline constexpr double kBucketConstM = 4.0;
inline constexpr double kSamplingConstant = 16.0;

// One per-level counter inside a bucket. Counts cap at tau + 1; a count of
// tau + 1 marks the entry as saturated.
struct BucketEntry {
    std::uint32_t level = 0;
    std::uint32_t count = 0;
};

struct BucketStats {
    std::uint64_t nonempty = 0;       // G
    std::vector<std::uint64_t> b;     // b[i-1] = buckets with total count i, i in [1, tau]
};

// The main array: B buckets, each a small list of (level, counter) entries
// with distinct levels.
class BucketArray {
  public:
    BucketArray(std::uint64_t bucket_count, std::uint32_t tau);

    // Adds one counter tick at `level` to each listed bucket: an existing
    // entry at that level is incremented unless already past tau, otherwise
    // a fresh (level, 1) entry is appended.
    void increment(std::span<const std::uint64_t> bucket_indices, std::uint32_t level);

    // Level advancement: every entry's level drops by one and entries at
    // level 0 are removed.
    void advance_level();

    // G and the count histogram b. A bucket whose total exceeds tau, or
    // that holds any saturated entry, contributes to G only.
    BucketStats stats() const;

    std::uint64_t bucket_count() const { return buckets_.size(); }
    std::uint32_t tau() const { return tau_; }
    const std::vector<BucketEntry>& bucket(std::uint64_t i) const { return buckets_[i]; }

    // Rough payload size, for observability.
    std::size_t entry_bytes() const;

  private:
    std::vector<std::vector<BucketEntry>> buckets_;
    std::uint32_t tau_;
};

// Streaming state of the profile sketch: level-based sampling, Poissonized
// multi-copy bucket insertion and level advancement. Single writer; readers
// may inspect a quiesced sketch.
class ProfileSketch {
  public:
    explicit ProfileSketch(SketchConfig cfg);

    void update(std::uint64_t x);

    const SketchConfig& config() const { return cfg_; }
    std::uint64_t stream_length() const { return stream_length_; }
    std::uint32_t current_level() const { return level_cur_; }
    BucketStats stats() const { return array_.stats(); }
    const BucketArray& array() const { return array_; }
    const KmvSketch& distinct() const { return kmv_; }
    const TrackingDistinct& tracker() const { return tracker_; }

  private:
    bool should_advance() const;

    SketchConfig cfg_;
    BucketArray array_;
    std::uint32_t level_cur_;
    std::uint64_t stream_length_ = 0;
    KmvSketch kmv_;
    TrackingDistinct tracker_;
    HashSeed seed_g1_, seed_g2_, seed_z_;
    std::vector<HashSeed> seeds_h_;
    std::vector<std::uint64_t> scratch_buckets_;
};

}  // namespace profsketch

#endif
