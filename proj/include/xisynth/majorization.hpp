#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "xisynth/error.hpp"

namespace xisynth {

using IntVector = std::vector<std::int64_t>;

/// True iff every prefix sum of x is at most the matching prefix sum of y.
inline bool weakly_majorizes(const IntVector& y, const IntVector& x) {
    require(x.size() == y.size(), ErrorCode::kDimension, "majorization: length mismatch");
    std::int64_t sx = 0, sy = 0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        sx += x[k];
        sy += y[k];
        if (sx > sy) return false;
    }
    return true;
}

/// Weak majorization with at least one strict prefix inequality.
inline bool strictly_weakly_majorizes(const IntVector& y, const IntVector& x) {
    require(x.size() == y.size(), ErrorCode::kDimension, "majorization: length mismatch");
    std::int64_t sx = 0, sy = 0;
    bool strict = false;
    for (std::size_t k = 0; k < x.size(); ++k) {
        sx += x[k];
        sy += y[k];
        if (sx > sy) return false;
        if (sx < sy) strict = true;
    }
    return strict;
}

/// Sum over k of the k-th prefix sum.
inline std::int64_t prefix_sum_total(const IntVector& x) {
    std::int64_t s = 0, total = 0;
    for (auto v : x) {
        s += v;
        total += s;
    }
    return total;
}

inline bool is_non_increasing(const IntVector& x) {
    for (std::size_t k = 1; k < x.size(); ++k)
        if (x[k] > x[k - 1] || x[k] < 0) return false;
    return x.empty() || x.back() >= 0;
}

}  // namespace xisynth
