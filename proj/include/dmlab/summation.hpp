#pragma once

#include <cmath>
#include <cstddef>
#include <span>

namespace dmlab {

// Neumaier-compensated running sum.
class KahanSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    KahanSum& operator+=(double x) {
        add(x);
        return *this;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

// Fixed-shape pairwise reduction; the tree depends only on values.size().
template <typename T>
T pairwise_sum(std::span<const T> values) {
    const std::size_t n = values.size();
    if (n == 0) return T{};
    if (n <= 8) {
        T acc = values[0];
        for (std::size_t i = 1; i < n; ++i) acc += values[i];
        return acc;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

}  // namespace dmlab
