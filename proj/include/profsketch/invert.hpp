#ifndef PROFSKETCH_INVERT_HPP
#define PROFSKETCH_INVERT_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace profsketch {

// Occupancy estimate of the sampled-set size from the count of nonempty
// buckets: -B ln(1 - G/B). G = B makes the formula diverge; the value is
// clamped to B ln B and flagged.
struct SampleSizeEstimate {
    double value = 0.0;
    bool saturated = false;
};

SampleSizeEstimate estimate_sample_size(std::uint64_t nonempty, std::uint64_t bucket_count);

// Inputs recovered from the bucket array after the stream ends: bucket
// count B, occupancy estimate S_hat, and b[i-1] = number of buckets with
// total count exactly i for i in [1, tau]. The b entries are counts in
// production but real-valued inputs (expectations) are accepted.
struct InvertInput {
    double bucket_count = 0.0;
    double s_hat = 0.0;
    std::vector<double> b;
};

struct SampleProfile {
    std::vector<double> f_hat;  // f_hat[i-1] estimates the count of sampled elements with frequency i
};

// Expected-bucket-count table indexed by (total count j, minimum colliding
// frequency x). Row j holds the collision decomposition of count-j buckets:
//   DP[j,j]   = estimated count of frequency-j elements,
//   DP[j,x]   = expected buckets of total j whose smallest element has
//               frequency x (only x <= floor(j/2) can occur),
// and sum_x DP[j,x] is the expected number of collision-formed ("bad")
// buckets of count j.
class DpTable {
  public:
    // Builds the table with the diagonal pinned to the given frequency
    // estimates; off-diagonal entries follow from the recurrence.
    DpTable(std::span<const double> diagonal, double bucket_count);

    double at(std::size_t j, std::size_t x) const { return cell(j, x); }

    // sum_{x=1}^{floor(i/2)} DP[i,x]: the estimated count of bad buckets
    // with total i under the pinned frequencies.
    double collision_mass(std::size_t i) const;

    std::size_t tau() const { return tau_; }

  private:
    friend SampleProfile invert_counts(const InvertInput&);

    explicit DpTable(std::size_t tau, double bucket_count);
    double& cell(std::size_t j, std::size_t x) { return cells_[(j - 1) * tau_ + (x - 1)]; }
    const double& cell(std::size_t j, std::size_t x) const { return cells_[(j - 1) * tau_ + (x - 1)]; }
    void fill_row(std::size_t i);

    std::size_t tau_;
    double bucket_count_;
    std::vector<double> cells_;
};

// Iterative recovery of the sample profile from collision-corrupted bucket
// counts: F_hat_i = max{b_i e^{S_hat/B} - rhat_i(F_hat_1..F_hat_{i-1}), 0},
// with the rhat terms computed by the dynamic program.
SampleProfile invert_counts(const InvertInput& in);

// Testing oracle for the DP: rhat_i computed by exhaustively enumerating
// the integer partitions of i with at least two parts, all parts below i.
// Exponential in i; intended for i <= ~32.
double rhat_bruteforce(std::span<const double> f, double bucket_count, std::size_t i);

}  // namespace profsketch

#endif
