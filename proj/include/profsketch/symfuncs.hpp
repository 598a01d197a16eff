#ifndef PROFSKETCH_SYMFUNCS_HPP
#define PROFSKETCH_SYMFUNCS_HPP

#include <cstdint>
#include <map>
#include <stdexcept>

#include "profsketch/estimator.hpp"

namespace profsketch {

// Profile plus the two scalar aggregates every symmetric function needs.
// `freq_limit` bounds the frequencies the profile is valid for; estimated
// profiles are only trustworthy up to their tau, exact profiles have no
// limit.
struct StreamAggregates {
    std::map<std::uint64_t, double> profile;
    double distinct = 0.0;      // D (or D_hat)
    double mass = 0.0;          // m
    std::uint64_t freq_limit = ~0ULL;

    static StreamAggregates from_exact(const std::map<std::uint64_t, std::uint64_t>& profile,
                                       double distinct, double mass) {
        StreamAggregates agg;
        for (const auto& [freq, count] : profile) agg.profile[freq] = static_cast<double>(count);
        agg.distinct = distinct;
        agg.mass = mass;
        return agg;
    }

    static StreamAggregates from_estimate(const EstimatedProfile& est, double mass) {
        StreamAggregates agg;
        for (const auto& [freq, value] : est.phi_hat) agg.profile[freq] = value;
        agg.distinct = est.d_hat;
        agg.mass = mass;
        agg.freq_limit = est.tau;
        return agg;
    }
};

namespace detail {
inline void check_tau(const StreamAggregates& agg, std::uint64_t tau) {
    if (tau > agg.freq_limit) throw std::domain_error("symmetric function: tau beyond profile range");
}
inline double head_count(const StreamAggregates& agg, std::uint64_t tau) {
    double acc = 0.0;
    for (const auto& [freq, value] : agg.profile) {
        if (freq > tau) break;
        acc += value;
    }
    return acc;
}
inline double head_mass(const StreamAggregates& agg, std::uint64_t tau) {
    double acc = 0.0;
    for (const auto& [freq, value] : agg.profile) {
        if (freq > tau) break;
        acc += value * static_cast<double>(freq);
    }
    return acc;
}
}  // namespace detail

inline double count_freq_at_most(const StreamAggregates& agg, std::uint64_t tau) {
    detail::check_tau(agg, tau);
    return detail::head_count(agg, tau);
}

inline double count_freq_at_least(const StreamAggregates& agg, std::uint64_t tau) {
    if (tau == 0) return agg.distinct;
    detail::check_tau(agg, tau - 1);
    return agg.distinct - detail::head_count(agg, tau - 1);
}

inline double mass_at_most(const StreamAggregates& agg, std::uint64_t tau) {
    detail::check_tau(agg, tau);
    return detail::head_mass(agg, tau);
}

inline double mass_at_least(const StreamAggregates& agg, std::uint64_t tau) {
    if (tau == 0) return agg.mass;
    detail::check_tau(agg, tau - 1);
    return agg.mass - detail::head_mass(agg, tau - 1);
}

// sum over elements of min(frequency, tau): head mass plus tau for every
// element above the cap. Interpolates between the distinct count (tau = 1)
// and the stream length (tau beyond all counts).
inline double capped_statistic(const StreamAggregates& agg, std::uint64_t tau) {
    detail::check_tau(agg, tau);
    return detail::head_mass(agg, tau) +
           static_cast<double>(tau) * (agg.distinct - detail::head_count(agg, tau));
}

inline double tukey_objective(const StreamAggregates& agg, std::uint64_t tau) {
    detail::check_tau(agg, tau);
    const double t2 = static_cast<double>(tau) * static_cast<double>(tau);
    double head = 0.0;
    for (const auto& [freq, value] : agg.profile) {
        if (freq > tau) break;
        const double r = 1.0 - static_cast<double>(freq) * static_cast<double>(freq) / t2;
        head += value * (t2 / 6.0) * (1.0 - r * r * r);
    }
    return head + (agg.distinct - detail::head_count(agg, tau)) * (t2 / 6.0);
}

// Head term i^2/2 up to tau; the tail follows the printed decomposition
// tau * (mass at frequency >= tau+1) - (1/2) * (count at frequency >= tau+1).
// `classical_tail` switches the tail weight to the textbook tau*i - tau^2/2.
inline double huber_objective(const StreamAggregates& agg, std::uint64_t tau,
                              bool classical_tail = false) {
    detail::check_tau(agg, tau);
    double head = 0.0;
    for (const auto& [freq, value] : agg.profile) {
        if (freq > tau) break;
        head += value * static_cast<double>(freq) * static_cast<double>(freq) / 2.0;
    }
    const double tail_mass = agg.mass - detail::head_mass(agg, tau);
    const double tail_count = agg.distinct - detail::head_count(agg, tau);
    const double t = static_cast<double>(tau);
    const double tail_weight = classical_tail ? t * t / 2.0 : 0.5;
    return head + t * tail_mass - tail_weight * tail_count;
}

}  // namespace profsketch

#endif
