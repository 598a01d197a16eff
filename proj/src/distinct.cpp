#include "profsketch/distinct.hpp"

#include <algorithm>
#include <stdexcept>

namespace profsketch {

KmvSketch::KmvSketch(std::size_t capacity, HashSeed seed) : capacity_(capacity), seed_(seed) {
    if (capacity_ == 0) throw std::invalid_argument("KmvSketch: capacity must be positive");
}

void KmvSketch::update(std::uint64_t x) {
    const std::uint64_t h = hash_u64(seed_, x);
    if (heap_.size() == capacity_) {
        // Fast path: not among the k smallest.
        if (h >= heap_.top()) return;
        if (!member_.insert(h).second) return;
        member_.erase(heap_.top());
        heap_.pop();
        heap_.push(h);
    } else {
        if (!member_.insert(h).second) return;
        heap_.push(h);
    }
}

double KmvSketch::estimate() const {
    if (heap_.size() < capacity_) return static_cast<double>(heap_.size());
    const double v_k = static_cast<double>(heap_.top()) * 0x1.0p-64;
    return static_cast<double>(capacity_ - 1) / v_k;
}

std::vector<std::uint64_t> KmvSketch::sorted_values() const {
    std::vector<std::uint64_t> out(member_.begin(), member_.end());
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace profsketch
