#include "profsketch/distinct.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"

using namespace profsketch;

TEST_CASE("repeated inserts are idempotent") {
    KmvSketch sk(16, HashSeed{1});
    for (int i = 0; i < 100; ++i) sk.update(42);
    CHECK(sk.size() == 1);
    CHECK(sk.estimate() == 1.0);
}

TEST_CASE("exact below capacity") {
    KmvSketch sk(1000, HashSeed{2});
    for (std::uint64_t x = 0; x < 50; ++x) sk.update(x);
    CHECK(sk.size() == 50);
    CHECK(sk.estimate() == 50.0);
}

TEST_CASE("empty sketch estimates zero") {
    KmvSketch sk(8, HashSeed{3});
    CHECK(sk.estimate() == 0.0);
}

TEST_CASE("holds exactly the k smallest hashes") {
    const HashSeed seed{4};
    const std::size_t k = 1000, n = 1'000'000;
    KmvSketch sk(k, seed);
    std::vector<std::uint64_t> hashes;
    hashes.reserve(n);
    for (std::uint64_t x = 0; x < n; ++x) {
        sk.update(x);
        hashes.push_back(hash_u64(seed, x));
    }
    std::sort(hashes.begin(), hashes.end());
    hashes.resize(k);
    CHECK(sk.sorted_values() == hashes);
}

TEST_CASE("order and duplication invariance") {
    const HashSeed seed{5};
    KmvSketch forward(64, seed), backward(64, seed), doubled(64, seed);
    for (std::uint64_t x = 0; x < 500; ++x) forward.update(x);
    for (std::uint64_t x = 500; x-- > 0;) backward.update(x);
    for (std::uint64_t x = 0; x < 500; ++x) {
        doubled.update(x);
        doubled.update(x);
    }
    CHECK(forward.sorted_values() == backward.sorted_values());
    CHECK(forward.estimate() == doubled.estimate());
}

TEST_CASE("estimate is monotone in the stream") {
    const HashSeed seed{6};
    KmvSketch sk(32, seed);
    double last = 0.0;
    for (std::uint64_t x = 0; x < 5000; ++x) {
        sk.update(hash_u64(HashSeed{77}, x));  // arbitrary distinct ids
        const double est = sk.estimate();
        CHECK(est >= last);
        last = est;
    }
}

// Accuracy contract: capacity ceil(100/eps^2) gives relative error <= eps
// in at least 90% of trials. The margin at this capacity is wide (the
// estimator's relative standard error is eps/10), so the observed rate
// should be essentially 1.
TEST_CASE("accuracy contract across scales") {
    const double eps = 0.1;
    const std::size_t k = KmvSketch::capacity_for(eps);
    for (std::uint64_t d : {1000ULL, 10000ULL, 100000ULL}) {
        std::size_t hits = 0;
        const int trials = 20;
        for (int t = 0; t < trials; ++t) {
            KmvSketch sk(k, derive(HashSeed{900}, 10 * d + t));
            for (std::uint64_t x = 0; x < d; ++x) sk.update(x * 2654435761ULL + t);
            const double rel = std::abs(sk.estimate() - static_cast<double>(d)) / static_cast<double>(d);
            if (rel <= eps) ++hits;
        }
        CHECK(hits >= static_cast<std::size_t>(0.9 * trials));
    }
}

// Concentration over seeds at D = 1e5. The kth-order-statistic estimator
// has relative standard error 1/sqrt(k), about 1% at this capacity, so a
// 3-sigma interval should cover nearly every trial.
TEST_CASE("estimate concentrates near the truth over seeds") {
    const std::size_t k = KmvSketch::capacity_for(0.1);  // 10000
    const double d = 100000.0;
    const double sigma = 1.0 / std::sqrt(static_cast<double>(k));
    int inside = 0;
    const int trials = 100;
    double sum_rel = 0.0;
    for (int t = 0; t < trials; ++t) {
        KmvSketch sk(k, derive(HashSeed{1234}, t));
        for (std::uint64_t x = 0; x < static_cast<std::uint64_t>(d); ++x) sk.update(x);
        const double rel = std::abs(sk.estimate() - d) / d;
        sum_rel += rel;
        if (rel <= 3.0 * sigma) ++inside;
    }
    CHECK(inside >= 95);
    CHECK(sum_rel / trials < 1.5 * sigma);
}

TEST_CASE("tracking sketch stays within a factor of two") {
    int ok_prefixes = 0, total = 0;
    for (int t = 0; t < 10; ++t) {
        TrackingDistinct tracker(derive(HashSeed{31}, t));
        for (std::uint64_t x = 1; x <= 100000; ++x) {
            tracker.update(x * 0x9e3779b97f4a7c15ULL + t);
            if ((x & (x - 1)) == 0) {  // check at powers of two
                ++total;
                const double est = tracker.estimate();
                const double truth = static_cast<double>(x);
                if (est >= truth / 2.0 && est <= truth * 2.0) ++ok_prefixes;
            }
        }
    }
    CHECK(static_cast<double>(ok_prefixes) >= 0.9 * static_cast<double>(total));
}
