#include "profsketch/invert.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace profsketch {

SampleSizeEstimate estimate_sample_size(std::uint64_t nonempty, std::uint64_t bucket_count) {
    if (nonempty > bucket_count) throw std::domain_error("estimate_sample_size: G > B");
    const double b = static_cast<double>(bucket_count);
    if (nonempty == bucket_count) return {b * std::log(b), true};
    const double g = static_cast<double>(nonempty);
    return {-b * std::log1p(-g / b), false};
}

DpTable::DpTable(std::size_t tau, double bucket_count)
    : tau_(tau), bucket_count_(bucket_count), cells_(tau * tau, 0.0) {
    if (tau_ == 0) throw std::invalid_argument("DpTable: tau must be positive");
    if (!(bucket_count_ > 0.0)) throw std::invalid_argument("DpTable: bucket count must be positive");
}

DpTable::DpTable(std::span<const double> diagonal, double bucket_count)
    : DpTable(diagonal.size(), bucket_count) {
    for (std::size_t i = 1; i <= tau_; ++i) {
        fill_row(i);
        cell(i, i) = diagonal[i - 1];
    }
}

// Off-diagonal entries of row i. Each DP[i,x] peels k >= 1 elements of the
// minimum frequency x off a count-i bucket, leaving a bucket of total i-kx
// whose minimum frequency exceeds x:
//   DP[i,x] = sum_k sum_{x'>x} DP[i-kx, x'] (F_x/B)^k / k!
// plus, when x divides i, the assignment made of i/x frequency-x elements
// alone. All referenced cells live in earlier rows or on earlier diagonals.
void DpTable::fill_row(std::size_t i) {
    const double binv = 1.0 / bucket_count_;
    for (std::size_t x = 1; x <= i / 2; ++x) {
        const double q = cell(x, x) * binv;  // F_x / B
        double acc = 0.0;
        double weight = 1.0;  // q^k / k!
        const std::size_t kmax = i / x - 1;  // x <= i/2, so i/x >= 2
        for (std::size_t k = 1; k <= kmax; ++k) {
            weight *= q / static_cast<double>(k);
            double inner = 0.0;
            for (std::size_t xp = x + 1; xp <= i - k * x; ++xp) inner += cell(i - k * x, xp);
            acc += inner * weight;
        }
        if (i % x == 0) {
            const std::size_t k = i / x;
            double term = bucket_count_;  // B (F_x/B)^k / k!
            for (std::size_t j = 1; j <= k; ++j) term *= q / static_cast<double>(j);
            acc += term;
        }
        cell(i, x) = acc;
    }
}

double DpTable::collision_mass(std::size_t i) const {
    if (i < 1 || i > tau_) throw std::domain_error("DpTable::collision_mass: index outside table");
    double acc = 0.0;
    for (std::size_t x = 1; x <= i / 2; ++x) acc += cell(i, x);
    return acc;
}

SampleProfile invert_counts(const InvertInput& in) {
    const std::size_t tau = in.b.size();
    if (tau == 0) return {};
    if (!(in.bucket_count > 0.0)) throw std::invalid_argument("invert_counts: bucket count must be positive");
    if (!std::isfinite(in.s_hat)) throw std::invalid_argument("invert_counts: S_hat must be finite");

    const double scale = std::exp(in.s_hat / in.bucket_count);
    DpTable dp(tau, in.bucket_count);
    SampleProfile out;
    out.f_hat.resize(tau);
    for (std::size_t i = 1; i <= tau; ++i) {
        dp.fill_row(i);
        double bad = 0.0;
        for (std::size_t x = 1; x <= i / 2; ++x) bad += dp.cell(i, x);
        const double est = std::max(in.b[i - 1] * scale - bad, 0.0);
        dp.cell(i, i) = est;
        out.f_hat[i - 1] = est;
    }
    return out;
}

namespace {

// Sum over partitions of `remaining` into parts <= max_part, accumulating
// prod_j (F_j/B)^{y_j} / y_j! for the multiplicity vector y of each partition.
double partition_sum(std::span<const double> f, double binv, std::size_t remaining,
                     std::size_t max_part, double acc) {
    if (remaining == 0) return acc;
    double total = 0.0;
    const std::size_t top = std::min(max_part, remaining);
    for (std::size_t v = top; v >= 1; --v) {
        const double q = f[v - 1] * binv;
        double factor = 1.0;
        for (std::size_t c = 1; c * v <= remaining; ++c) {
            factor *= q / static_cast<double>(c);
            total += partition_sum(f, binv, remaining - c * v, v - 1, acc * factor);
        }
    }
    return total;
}

}  // namespace

double rhat_bruteforce(std::span<const double> f, double bucket_count, std::size_t i) {
    if (i < 2) throw std::domain_error("rhat_bruteforce: need i >= 2");
    if (f.size() + 1 < i) throw std::domain_error("rhat_bruteforce: need frequencies up to i-1");
    // Restricting parts to i-1 forces every partition to have >= 2 parts.
    return bucket_count * partition_sum(f, 1.0 / bucket_count, i, i - 1, 1.0);
}

}  // namespace profsketch
