#include "profsketch/symfuncs.hpp"

#include <cmath>
#include <unordered_map>
#include <vector>

#include "doctest.h"
#include "profsketch/harness.hpp"

using namespace profsketch;

namespace {

// Brute-force oracle straight from raw element frequencies.
struct RawOracle {
    std::vector<double> freqs;

    double count_at_most(double tau) const {
        double n = 0;
        for (double f : freqs) n += f <= tau;
        return n;
    }
    double mass_at_most(double tau) const {
        double n = 0;
        for (double f : freqs) n += f <= tau ? f : 0;
        return n;
    }
    double capped(double tau) const {
        double n = 0;
        for (double f : freqs) n += std::min(f, tau);
        return n;
    }
    double tukey(double tau) const {
        double n = 0;
        for (double f : freqs) {
            if (f <= tau) {
                const double r = 1.0 - f * f / (tau * tau);
                n += tau * tau / 6.0 * (1.0 - r * r * r);
            } else {
                n += tau * tau / 6.0;
            }
        }
        return n;
    }
    double huber(double tau) const {
        double n = 0;
        for (double f : freqs) n += f <= tau ? f * f / 2.0 : tau * f - 0.5;
        return n;
    }
};

RawOracle oracle_from(const std::vector<std::uint64_t>& stream) {
    std::unordered_map<std::uint64_t, std::uint64_t> counts;
    for (auto x : stream) ++counts[x];
    RawOracle o;
    for (const auto& [id, f] : counts) o.freqs.push_back(static_cast<double>(f));
    return o;
}

StreamAggregates aggregates_from(const std::vector<std::uint64_t>& stream) {
    const Profile p = exact_profile(stream);
    double d = 0, m = 0;
    for (const auto& [freq, count] : p) {
        d += static_cast<double>(count);
        m += static_cast<double>(freq * count);
    }
    return StreamAggregates::from_exact(p, d, m);
}

}  // namespace

TEST_CASE("hand-worked values") {
    StreamAggregates agg;
    agg.profile = {{1, 5}, {2, 3}};
    agg.distinct = 8;
    agg.mass = 11;

    CHECK(count_freq_at_most(agg, 1) == 5.0);
    CHECK(count_freq_at_least(agg, 2) == 3.0);
    CHECK(count_freq_at_least(agg, 0) == 8.0);
    CHECK(mass_at_least(agg, 0) == 11.0);

    StreamAggregates two_threes;  // profile {2:3}
    two_threes.profile = {{2, 3}};
    two_threes.distinct = 3;
    two_threes.mass = 6;
    CHECK(mass_at_most(two_threes, 2) == 6.0);
    CHECK(huber_objective(two_threes, 3) == 6.0);

    StreamAggregates tail_only;  // profile {5:2}
    tail_only.profile = {{5, 2}};
    tail_only.distinct = 2;
    tail_only.mass = 10;
    CHECK(huber_objective(tail_only, 3) == 29.0);

    StreamAggregates mixed;  // profile {1:1, 5:1}
    mixed.profile = {{1, 1}, {5, 1}};
    mixed.distinct = 2;
    mixed.mass = 6;
    CHECK(huber_objective(mixed, 3) == 15.0);

    StreamAggregates capped_case;  // profile {1:2, 5:1}
    capped_case.profile = {{1, 2}, {5, 1}};
    capped_case.distinct = 3;
    capped_case.mass = 7;
    CHECK(capped_statistic(capped_case, 3) == 5.0);
    CHECK(capped_statistic(capped_case, 1) == capped_case.distinct);
    CHECK(capped_statistic(capped_case, 5) == capped_case.mass);

    StreamAggregates one_single;  // profile {1:1}
    one_single.profile = {{1, 1}};
    one_single.distinct = 1;
    one_single.mass = 1;
    CHECK(tukey_objective(one_single, 2) == doctest::Approx(37.0 / 96.0).epsilon(1e-12));

    StreamAggregates beyond;  // profile {tau+5: 4}, tail-only tukey
    beyond.profile = {{8, 4}};
    beyond.distinct = 4;
    beyond.mass = 32;
    CHECK(tukey_objective(beyond, 3) == doctest::Approx(4.0 * 9.0 / 6.0).epsilon(1e-12));
}

TEST_CASE("boundary weight at i = tau is tau^2/6") {
    StreamAggregates agg;
    agg.profile = {{3, 1}};
    agg.distinct = 1;
    agg.mass = 3;
    CHECK(tukey_objective(agg, 3) == doctest::Approx(9.0 / 6.0).epsilon(1e-12));
}

TEST_CASE("tau beyond an estimated profile's range is rejected") {
    EstimatedProfile est;
    est.tau = 3;
    est.d_hat = 10;
    est.phi_hat = {{1, 4.0}, {2, 3.0}, {3, 3.0}};
    const StreamAggregates agg = StreamAggregates::from_estimate(est, 19.0);
    CHECK(capped_statistic(agg, 3) > 0.0);
    CHECK_THROWS_AS(capped_statistic(agg, 4), std::domain_error);
    CHECK_THROWS_AS(huber_objective(agg, 4), std::domain_error);
}

TEST_CASE("classical huber tail variant") {
    StreamAggregates tail_only;
    tail_only.profile = {{5, 2}};
    tail_only.distinct = 2;
    tail_only.mass = 10;
    // tail weight tau*i - tau^2/2: 2 * (15 - 4.5) = 21
    CHECK(huber_objective(tail_only, 3, true) == 21.0);
}

TEST_CASE("exact-profile consistency against raw frequencies") {
    for (int trial = 0; trial < 100; ++trial) {
        StreamSpec spec;
        spec.kind = StreamSpec::Kind::Uniform;
        spec.support = 50 + 37 * trial % 400;
        spec.length = 100 + 91 * trial % 9000;
        spec.seed = 7000 + trial;
        const auto stream = generate_stream(spec);
        const RawOracle raw = oracle_from(stream);
        const StreamAggregates agg = aggregates_from(stream);

        for (double tau : {1.0, 2.0, 3.0, 7.0}) {
            const auto t = static_cast<std::uint64_t>(tau);
            CHECK(count_freq_at_most(agg, t) == doctest::Approx(raw.count_at_most(tau)).epsilon(1e-9));
            CHECK(mass_at_most(agg, t) == doctest::Approx(raw.mass_at_most(tau)).epsilon(1e-9));
            CHECK(capped_statistic(agg, t) == doctest::Approx(raw.capped(tau)).epsilon(1e-9));
            CHECK(tukey_objective(agg, t) == doctest::Approx(raw.tukey(tau)).epsilon(1e-9));
            CHECK(huber_objective(agg, t) == doctest::Approx(raw.huber(tau)).epsilon(1e-9));
        }
    }
}

// Per-coordinate Lipschitz propagation: perturbing the head of the profile
// moves each function by at most its maximum coordinate weight times the
// L1 perturbation, plus the weight of the D term times the D perturbation.
TEST_CASE("lipschitz propagation under head perturbations") {
    StreamAggregates base;
    base.profile = {{1, 40.0}, {2, 25.0}, {3, 10.0}, {5, 6.0}, {9, 2.0}};
    base.distinct = 83.0;
    base.mass = 178.0;
    const std::uint64_t tau = 3;
    const double t2 = 9.0;

    for (int trial = 0; trial < 50; ++trial) {
        StreamAggregates bent = base;
        double l1 = 0.0;
        for (std::uint64_t i = 1; i <= tau; ++i) {
            const double delta = 8.0 * unit_real(hash_u64(HashSeed{4242}, 10 * trial + i)) - 4.0;
            bent.profile[i] = std::max(0.0, bent.profile[i] + delta);
            l1 += std::abs(bent.profile[i] - base.profile[i]);
        }
        const double d_delta = 0.0;  // D held fixed here

        CHECK(std::abs(capped_statistic(bent, tau) - capped_statistic(base, tau)) <=
              (static_cast<double>(tau) - 1.0) * l1 + d_delta + 1e-9);
        CHECK(std::abs(huber_objective(bent, tau) - huber_objective(base, tau)) <=
              (t2 / 2.0) * l1 + d_delta + 1e-9);
        CHECK(std::abs(tukey_objective(bent, tau) - tukey_objective(base, tau)) <=
              (t2 / 6.0) * l1 + d_delta + 1e-9);
    }
}
