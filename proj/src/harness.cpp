#include "profsketch/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <thread>
#include <unordered_map>

#include "profsketch/distinct.hpp"

namespace profsketch {

namespace {

// Counter-mode generator: deterministic, splittable, no state to carry.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : seed_{seed} {}
    std::uint64_t next() { return hash_u64(seed_, counter_++); }
    double next_unit() { return unit_real(next()); }
    // Uniform in [0, bound) by rejection.
    std::uint64_t next_bounded(std::uint64_t bound) {
        const std::uint64_t limit = ~0ULL - ~0ULL % bound;
        std::uint64_t v = next();
        while (v >= limit) v = next();
        return v % bound;
    }

  private:
    HashSeed seed_;
    std::uint64_t counter_ = 0;
};

std::vector<std::uint64_t> generate_profile_targeted(const StreamSpec& spec) {
    std::uint64_t total = 0;
    for (const auto& [freq, count] : spec.target_profile) {
        if (freq == 0) throw std::invalid_argument("generate_stream: zero frequency in target profile");
        total += freq * count;
    }
    if (spec.length != 0 && spec.length != total)
        throw std::invalid_argument("generate_stream: target profile mass does not match requested length");

    std::vector<std::uint64_t> stream;
    stream.reserve(total);
    std::uint64_t next_id = 1;
    for (const auto& [freq, count] : spec.target_profile) {
        for (std::uint64_t c = 0; c < count; ++c, ++next_id) {
            for (std::uint64_t r = 0; r < freq; ++r) stream.push_back(next_id);
        }
    }
    if (spec.shuffle && stream.size() > 1) {
        Rng rng(spec.seed);
        for (std::size_t i = stream.size() - 1; i > 0; --i)
            std::swap(stream[i], stream[rng.next_bounded(i + 1)]);
    }
    return stream;
}

std::vector<std::uint64_t> generate_zipf(const StreamSpec& spec) {
    if (spec.support == 0) throw std::invalid_argument("generate_stream: zipf needs a support size");
    std::vector<double> cumulative(spec.support);
    double acc = 0.0;
    for (std::uint64_t k = 1; k <= spec.support; ++k) {
        acc += std::pow(static_cast<double>(k), -spec.zipf_alpha);
        cumulative[k - 1] = acc;
    }
    Rng rng(spec.seed);
    std::vector<std::uint64_t> stream;
    stream.reserve(spec.length);
    for (std::uint64_t t = 0; t < spec.length; ++t) {
        const double u = rng.next_unit() * acc;
        const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
        stream.push_back(static_cast<std::uint64_t>(it - cumulative.begin()) + 1);
    }
    return stream;
}

std::vector<std::uint64_t> generate_uniform(const StreamSpec& spec) {
    if (spec.support == 0) throw std::invalid_argument("generate_stream: uniform needs a support size");
    Rng rng(spec.seed);
    std::vector<std::uint64_t> stream;
    stream.reserve(spec.length);
    for (std::uint64_t t = 0; t < spec.length; ++t) stream.push_back(rng.next_bounded(spec.support) + 1);
    return stream;
}

}  // namespace

std::vector<std::uint64_t> generate_stream(const StreamSpec& spec) {
    switch (spec.kind) {
        case StreamSpec::Kind::ProfileTargeted: return generate_profile_targeted(spec);
        case StreamSpec::Kind::Zipf: return generate_zipf(spec);
        case StreamSpec::Kind::Uniform: return generate_uniform(spec);
    }
    throw std::invalid_argument("generate_stream: unknown kind");
}

Profile exact_profile(std::span<const std::uint64_t> stream) {
    std::unordered_map<std::uint64_t, std::uint64_t> freq;
    freq.reserve(stream.size());
    for (std::uint64_t x : stream) ++freq[x];
    Profile profile;
    for (const auto& [id, f] : freq) ++profile[f];
    return profile;
}

double head_l1(const Profile& exact, const EstimatedProfile& est, std::uint32_t tau) {
    double err = 0.0;
    for (std::uint32_t i = 1; i <= tau; ++i) {
        const auto it = exact.find(i);
        const double truth = it == exact.end() ? 0.0 : static_cast<double>(it->second);
        err += std::abs(truth - est.at(i));
    }
    return err;
}

double full_l1(const Profile& exact, const EstimatedProfile& est) {
    double err = 0.0;
    for (std::uint32_t i = 1; i <= est.tau; ++i) {
        const auto it = exact.find(i);
        const double truth = it == exact.end() ? 0.0 : static_cast<double>(it->second);
        err += std::abs(truth - est.at(i));
    }
    for (const auto& [freq, count] : exact)
        if (freq > est.tau) err += static_cast<double>(count);
    return err;
}

namespace {

TrialReport run_one_trial(const StreamSpec& spec, const TrialConfig& cfg,
                          const PassThresholds& thresholds, std::size_t index) {
    const HashSeed trial_seed = derive(cfg.seed, index);
    StreamSpec trial_spec = spec;
    trial_spec.seed = derive(trial_seed, 1).value;
    const HashSeed algo_seed = derive(trial_seed, 2);

    const std::vector<std::uint64_t> stream = generate_stream(trial_spec);
    const Profile truth = exact_profile(stream);
    double distinct = 0.0;
    double mass = 0.0;
    for (const auto& [freq, count] : truth) {
        distinct += static_cast<double>(count);
        mass += static_cast<double>(freq * count);
    }

    const auto start = std::chrono::steady_clock::now();
    EstimatedProfile est;
    if (cfg.algo == TrialConfig::Algo::Sketch) {
        ProfileSketch sketch(SketchConfig::defaults(cfg.epsilon, cfg.error_type, algo_seed, cfg.tau));
        for (std::uint64_t x : stream) sketch.update(x);
        est = finalize(sketch);
    } else {
        KmvSketch kmv(KmvSketch::capacity_for(cfg.epsilon / 10.0), derive(algo_seed, 7));
        for (std::uint64_t x : stream) kmv.update(x);
        const bool compressed = cfg.algo == TrialConfig::Algo::DmCompressed;
        DmEstimator dm(cfg.epsilon, stream.size(), algo_seed, compressed);
        for (std::uint64_t x : stream) dm.update(x);
        est = dm.finalize(kmv.estimate());
    }
    const auto stop = std::chrono::steady_clock::now();

    TrialReport report;
    report.seed = trial_seed.value;
    report.head_l1 = head_l1(truth, est, cfg.tau);
    report.full_l1 = full_l1(truth, est);
    report.distinct = distinct;
    report.mass = mass;
    report.d_hat = est.d_hat;
    report.s_hat = est.s_hat;
    report.head_pass = report.head_l1 <= thresholds.head_factor * cfg.epsilon * distinct;
    report.full_pass = report.full_l1 <= thresholds.full_factor * cfg.epsilon * mass;
    report.wall_ms = std::chrono::duration<double, std::milli>(stop - start).count();
    return report;
}

double quantile(std::vector<double> values, double q) {
    if (values.empty()) return 0.0;
    std::sort(values.begin(), values.end());
    const auto rank = static_cast<std::size_t>(q * static_cast<double>(values.size() - 1) + 0.5);
    return values[std::min(rank, values.size() - 1)];
}

}  // namespace

TrialRun run_trials(const StreamSpec& spec, const TrialConfig& cfg, std::size_t n_trials,
                    const PassThresholds& thresholds) {
    if (n_trials == 0) throw std::invalid_argument("run_trials: need at least one trial");
    TrialRun run;
    run.reports.resize(n_trials);

    const std::uint32_t threads = std::max<std::uint32_t>(1, cfg.threads);
    if (threads == 1) {
        for (std::size_t i = 0; i < n_trials; ++i)
            run.reports[i] = run_one_trial(spec, cfg, thresholds, i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (std::uint32_t w = 0; w < threads; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < n_trials; i = next.fetch_add(1))
                    run.reports[i] = run_one_trial(spec, cfg, thresholds, i);
            });
        }
        for (auto& t : pool) t.join();
    }

    TrialSummary& s = run.summary;
    s.trials = n_trials;
    std::vector<double> heads, fulls;
    heads.reserve(n_trials);
    fulls.reserve(n_trials);
    std::size_t head_passes = 0, full_passes = 0;
    for (const auto& r : run.reports) {
        heads.push_back(r.head_l1);
        fulls.push_back(r.full_l1);
        head_passes += r.head_pass;
        full_passes += r.full_pass;
    }
    const double n = static_cast<double>(n_trials);
    s.head_pass_rate = static_cast<double>(head_passes) / n;
    s.full_pass_rate = static_cast<double>(full_passes) / n;
    s.head_pass_stderr = std::sqrt(s.head_pass_rate * (1.0 - s.head_pass_rate) / n);
    s.full_pass_stderr = std::sqrt(s.full_pass_rate * (1.0 - s.full_pass_rate) / n);
    s.head_l1_median = quantile(heads, 0.5);
    s.head_l1_p90 = quantile(heads, 0.9);
    s.full_l1_median = quantile(fulls, 0.5);
    s.full_l1_p90 = quantile(fulls, 0.9);
    return run;
}

}  // namespace profsketch
