#include "profsketch/sketch.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace profsketch {

SketchConfig SketchConfig::defaults(double epsilon, ErrorType error_type, HashSeed seed,
                                    std::uint32_t tau_for_type_d) {
    SketchConfig cfg;
    cfg.epsilon = epsilon;
    cfg.error_type = error_type;
    cfg.seed = seed;
    if (error_type == ErrorType::D) {
        cfg.bucket_count = static_cast<std::uint64_t>(std::ceil(kBucketConstD / (epsilon * epsilon)));
        cfg.tau = tau_for_type_d;
    } else {
        cfg.bucket_count = static_cast<std::uint64_t>(
            std::ceil(kBucketConstM * std::log(2.0 + 1.0 / epsilon) / (epsilon * epsilon)));
        cfg.tau = static_cast<std::uint32_t>(std::ceil(2.0 / epsilon));
    }
    cfg.compressed_domain = 64 * cfg.bucket_count * cfg.bucket_count;
    cfg.max_copies = static_cast<std::uint32_t>(std::ceil(2.0 * std::log2(static_cast<double>(cfg.bucket_count)))) + 4;
    cfg.sampling_constant = kSamplingConstant;
    cfg.validate();
    return cfg;
}

void SketchConfig::validate() const {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("SketchConfig: epsilon outside (0,1)");
    if (bucket_count < 1) throw std::invalid_argument("SketchConfig: bucket count must be >= 1");
    if (tau < 1) throw std::invalid_argument("SketchConfig: tau must be >= 1");
    if (max_copies < 2) throw std::invalid_argument("SketchConfig: max copies must be >= 2");
    if (compressed_domain < bucket_count * bucket_count)
        throw std::invalid_argument("SketchConfig: compressed domain must be >= B^2");
    if (sampling_constant < 0.0) throw std::invalid_argument("SketchConfig: negative sampling constant");
    if (initial_level < 1) throw std::invalid_argument("SketchConfig: initial level must be >= 1");
}

BucketArray::BucketArray(std::uint64_t bucket_count, std::uint32_t tau)
    : buckets_(bucket_count), tau_(tau) {}

void BucketArray::increment(std::span<const std::uint64_t> bucket_indices, std::uint32_t level) {
    for (std::uint64_t idx : bucket_indices) {
        auto& entries = buckets_[idx];
        bool found = false;
        for (auto& e : entries) {
            if (e.level == level) {
                if (e.count <= tau_) ++e.count;  // caps at tau + 1
                found = true;
                break;
            }
        }
        if (!found) entries.push_back(BucketEntry{level, 1});
    }
}

void BucketArray::advance_level() {
    for (auto& entries : buckets_) {
        std::erase_if(entries, [](const BucketEntry& e) { return e.level == 0; });
        for (auto& e : entries) --e.level;
    }
}

BucketStats BucketArray::stats() const {
    BucketStats out;
    out.b.assign(tau_, 0);
    for (const auto& entries : buckets_) {
        if (entries.empty()) continue;
        ++out.nonempty;
        std::uint64_t total = 0;
        bool saturated = false;
        for (const auto& e : entries) {
            total += e.count;
            saturated |= e.count > tau_;
        }
        if (!saturated && total >= 1 && total <= tau_) ++out.b[total - 1];
    }
    return out;
}

std::size_t BucketArray::entry_bytes() const {
    std::size_t n = 0;
    for (const auto& entries : buckets_) n += entries.size();
    return n * sizeof(BucketEntry) + buckets_.size() * sizeof(std::vector<BucketEntry>);
}

namespace {
SketchConfig checked(SketchConfig cfg) {
    cfg.validate();
    return cfg;
}
}  // namespace

ProfileSketch::ProfileSketch(SketchConfig cfg)
    : cfg_(checked(cfg)),
      array_(cfg_.bucket_count, cfg_.tau),
      level_cur_(cfg_.initial_level),
      kmv_(KmvSketch::capacity_for(cfg_.epsilon / 10.0), derive(cfg_.seed, 1)),
      tracker_(derive(cfg_.seed, 2)),
      seed_g1_(derive(cfg_.seed, 3)),
      seed_g2_(derive(cfg_.seed, 4)),
      seed_z_(derive(cfg_.seed, 5)) {
    seeds_h_.reserve(cfg_.max_copies);
    for (std::uint32_t i = 0; i < cfg_.max_copies; ++i) seeds_h_.push_back(derive(cfg_.seed, 100 + i));
    scratch_buckets_.reserve(cfg_.max_copies);
}

bool ProfileSketch::should_advance() const {
    if (cfg_.sampling_constant == 0.0) return false;
    const double threshold_base = cfg_.sampling_constant / static_cast<double>(cfg_.bucket_count);
    const double level_value = std::ldexp(1.0, static_cast<int>(level_cur_));
    if (cfg_.error_type == ErrorType::M) {
        const double bound = std::min(static_cast<double>(stream_length_) * threshold_base,
                                      static_cast<double>(cfg_.domain_upper_bound));
        return level_value < bound;
    }
    return level_value < tracker_.estimate() * threshold_base;
}

void ProfileSketch::update(std::uint64_t x) {
    kmv_.update(x);
    if (cfg_.error_type == ErrorType::D) tracker_.update(x);
    ++stream_length_;

    if (should_advance()) {
        ++level_cur_;
        array_.advance_level();
    }

    const std::uint32_t level = lsb_level(hash_u64(seed_g1_, x));
    if (level < level_cur_) return;

    const std::uint64_t compressed = hash_u64(seed_g2_, x) % cfg_.compressed_domain;
    const std::uint32_t copies = poisson_unit_draw(unit_real(hash_u64(seed_z_, compressed)));
    const std::uint32_t use = std::min(copies, cfg_.max_copies);
    if (use == 0) return;

    scratch_buckets_.clear();
    for (std::uint32_t i = 0; i < use; ++i)
        scratch_buckets_.push_back(hash_u64(seeds_h_[i], compressed) % cfg_.bucket_count);
    array_.increment(scratch_buckets_, level - level_cur_);
}

}  // namespace profsketch
