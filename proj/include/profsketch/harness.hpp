#ifndef PROFSKETCH_HARNESS_HPP
#define PROFSKETCH_HARNESS_HPP

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "profsketch/estimator.hpp"
#include "profsketch/hashing.hpp"
#include "profsketch/sketch.hpp"

namespace profsketch {

using Profile = std::map<std::uint64_t, std::uint64_t>;

// Synthetic stream description. A profile-targeted spec realizes an exact
// frequency-of-frequencies vector; zipf and uniform specs draw m elements
// from a fixed support.
struct StreamSpec {
    enum class Kind { ProfileTargeted, Zipf, Uniform };
    Kind kind = Kind::ProfileTargeted;
    Profile target_profile;            // ProfileTargeted
    double zipf_alpha = 1.0;           // Zipf
    std::uint64_t support = 0;         // Zipf / Uniform
    std::uint64_t length = 0;          // m for Zipf / Uniform; optional cross-check otherwise
    std::uint64_t seed = 0;            // shuffle / draw seed
    bool shuffle = true;               // ProfileTargeted only
};

std::vector<std::uint64_t> generate_stream(const StreamSpec& spec);

Profile exact_profile(std::span<const std::uint64_t> stream);

double head_l1(const Profile& exact, const EstimatedProfile& est, std::uint32_t tau);
double full_l1(const Profile& exact, const EstimatedProfile& est);

// One evaluation run: error metrics and pass flags for a single seed.
struct TrialReport {
    std::uint64_t seed = 0;
    double head_l1 = 0.0;
    double full_l1 = 0.0;
    double distinct = 0.0;   // exact D
    double mass = 0.0;       // exact m
    double d_hat = 0.0;
    double s_hat = 0.0;
    bool head_pass = false;
    bool full_pass = false;
    double wall_ms = 0.0;
};

struct TrialConfig {
    enum class Algo { Sketch, Dm, DmCompressed };
    Algo algo = Algo::Sketch;
    double epsilon = 0.1;
    ErrorType error_type = ErrorType::D;
    std::uint32_t tau = 3;   // head-metric width; type-D sketch threshold
    HashSeed seed;
    std::uint32_t threads = 1;
};

// Pass thresholds relative to the guarantees: head budget = head_factor *
// eps * D, full budget = full_factor * eps * m.
struct PassThresholds {
    double head_factor = 1.0;
    double full_factor = 1.0;
};

struct TrialSummary {
    std::size_t trials = 0;
    double head_pass_rate = 0.0;
    double full_pass_rate = 0.0;
    double head_pass_stderr = 0.0;
    double full_pass_stderr = 0.0;
    double head_l1_median = 0.0;
    double head_l1_p90 = 0.0;
    double full_l1_median = 0.0;
    double full_l1_p90 = 0.0;
};

struct TrialRun {
    std::vector<TrialReport> reports;
    TrialSummary summary;
};

// Runs n independent seeded trials of the configured estimator against the
// exact-profile oracle. Trials share nothing and may run on several threads;
// the report order is by trial index either way.
TrialRun run_trials(const StreamSpec& spec, const TrialConfig& cfg, std::size_t n_trials,
                    const PassThresholds& thresholds = {});

}  // namespace profsketch

#endif
