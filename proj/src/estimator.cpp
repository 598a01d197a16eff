#include "profsketch/estimator.hpp"

#include <cmath>

namespace profsketch {

EstimatedProfile finalize(const ProfileSketch& sketch) {
    const SketchConfig& cfg = sketch.config();
    EstimatedProfile out;
    out.tau = cfg.tau;
    out.error_type = cfg.error_type;
    for (std::uint32_t i = 1; i <= cfg.tau; ++i) out.phi_hat[i] = 0.0;

    out.d_hat = sketch.distinct().estimate();
    const BucketStats stats = sketch.stats();
    const SampleSizeEstimate s = estimate_sample_size(stats.nonempty, cfg.bucket_count);
    out.s_hat = s.value;
    if (s.saturated)
        out.warnings.push_back("sample-size estimate saturated (all buckets nonempty); "
                               "estimates degraded");
    if (out.d_hat == 0.0 || out.s_hat == 0.0) return out;

    InvertInput in;
    in.bucket_count = static_cast<double>(cfg.bucket_count);
    in.s_hat = out.s_hat;
    in.b.assign(stats.b.begin(), stats.b.end());
    const SampleProfile f = invert_counts(in);

    const double scale = out.d_hat / out.s_hat;
    for (std::uint32_t i = 1; i <= cfg.tau; ++i) out.phi_hat[i] = scale * f.f_hat[i - 1];
    return out;
}

std::uint64_t DmEstimator::sample_target(double epsilon) {
    return static_cast<std::uint64_t>(std::ceil(8.0 * std::log(2.0 + 1.0 / epsilon) / (epsilon * epsilon)));
}

std::uint32_t DmEstimator::frequency_cap(double epsilon) {
    return static_cast<std::uint32_t>(std::ceil(2.0 / epsilon));
}

DmEstimator::DmEstimator(double epsilon, std::uint64_t stream_length, HashSeed seed, bool compressed)
    : epsilon_(epsilon),
      cap_(frequency_cap(epsilon)),
      compressed_(compressed),
      seed_sample_(derive(seed, 11)),
      seed_compress_(derive(seed, 12)) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("DmEstimator: epsilon outside (0,1)");
    const std::uint64_t s = sample_target(epsilon);
    rate_ = stream_length == 0
                ? 1.0
                : std::min(1.0, static_cast<double>(s) / static_cast<double>(stream_length));
    compressed_domain_ = 64 * s * s;
}

void DmEstimator::update(std::uint64_t x) {
    if (rate_ < 1.0 && unit_real(hash_u64(seed_sample_, x)) >= rate_) return;
    const std::uint64_t key = compressed_ ? hash_u64(seed_compress_, x) % compressed_domain_ : x;
    auto [it, inserted] = counts_.try_emplace(key, 0);
    if (compressed_) {
        // cap_ + 1 marks the count as unusable ("N/A").
        if (it->second <= cap_) ++it->second;
    } else {
        ++it->second;
    }
}

EstimatedProfile DmEstimator::finalize(double d_hat) const {
    EstimatedProfile out;
    out.tau = cap_;
    out.error_type = ErrorType::M;
    out.d_hat = d_hat;
    out.s_hat = static_cast<double>(counts_.size());
    for (std::uint32_t i = 1; i <= cap_; ++i) out.phi_hat[i] = 0.0;
    if (counts_.empty() || d_hat == 0.0) return out;

    std::vector<std::uint64_t> freq_counts(cap_ + 1, 0);
    for (const auto& [key, count] : counts_) {
        if (count >= 1 && count <= cap_) ++freq_counts[count];
    }
    const double scale = d_hat / out.s_hat;
    for (std::uint32_t i = 1; i <= cap_; ++i)
        out.phi_hat[i] = scale * static_cast<double>(freq_counts[i]);
    return out;
}

EstimatedProfile dm_estimate(std::span<const std::uint64_t> stream, double epsilon, double d_hat,
                             HashSeed seed) {
    DmEstimator est(epsilon, stream.size(), seed, false);
    for (std::uint64_t x : stream) est.update(x);
    return est.finalize(d_hat);
}

EstimatedProfile dm_compressed(std::span<const std::uint64_t> stream, double epsilon, double d_hat,
                               HashSeed seed) {
    DmEstimator est(epsilon, stream.size(), seed, true);
    for (std::uint64_t x : stream) est.update(x);
    return est.finalize(d_hat);
}

}  // namespace profsketch
