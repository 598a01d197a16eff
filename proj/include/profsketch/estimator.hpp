#ifndef PROFSKETCH_ESTIMATOR_HPP
#define PROFSKETCH_ESTIMATOR_HPP

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "profsketch/invert.hpp"
#include "profsketch/sketch.hpp"

namespace profsketch {

// Final output of any estimator: phi_hat[i] for i in [1, tau], implicitly
// zero beyond tau, together with the auxiliary estimates it was built from.
struct EstimatedProfile {
    std::map<std::uint32_t, double> phi_hat;
    std::uint32_t tau = 0;
    ErrorType error_type = ErrorType::D;
    double d_hat = 0.0;
    double s_hat = 0.0;
    std::vector<std::string> warnings;

    double at(std::uint32_t i) const {
        auto it = phi_hat.find(i);
        return it == phi_hat.end() ? 0.0 : it->second;
    }
};

// Post-processing of the main sketch: D_hat from the distinct sketch,
// (G, b) from the bucket array, S_hat from occupancy, F_hat from the
// inversion DP, then phi_hat_i = (D_hat / S_hat) F_hat_i.
EstimatedProfile finalize(const ProfileSketch& sketch);

// One-pass modified Datar-Muthukrishnan baseline. Each distinct element is
// kept with probability s/m by hash-thresholding its id, where
// s = ceil(8 ln(2 + 1/eps) / eps^2); kept elements get exact counts and the
// rescaled sample profile is reported up to frequency ceil(2/eps). The
// compressed variant hashes kept ids into a domain of 64 s^2 and caps
// counts at ceil(2/eps), dropping overflowing entries from the profile.
class DmEstimator {
  public:
    DmEstimator(double epsilon, std::uint64_t stream_length, HashSeed seed, bool compressed);

    void update(std::uint64_t x);
    EstimatedProfile finalize(double d_hat) const;

    std::uint64_t sample_size() const { return counts_.size(); }
    double sampling_rate() const { return rate_; }

    static std::uint64_t sample_target(double epsilon);
    static std::uint32_t frequency_cap(double epsilon);

  private:
    double epsilon_;
    std::uint32_t cap_;
    double rate_;
    bool compressed_;
    std::uint64_t compressed_domain_ = 0;
    HashSeed seed_sample_, seed_compress_;
    std::unordered_map<std::uint64_t, std::uint64_t> counts_;
};

// Conveniences over in-memory streams.
EstimatedProfile dm_estimate(std::span<const std::uint64_t> stream, double epsilon, double d_hat,
                             HashSeed seed);
EstimatedProfile dm_compressed(std::span<const std::uint64_t> stream, double epsilon, double d_hat,
                               HashSeed seed);

}  // namespace profsketch

#endif
