#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace adopt {

// Task quantities per period. Ops validate non-negativity/finiteness where
// their contracts require it.
using TaskVector = std::vector<double>;

inline double dot(const TaskVector& a, const TaskVector& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

inline double norm2(const TaskVector& a) { return std::sqrt(dot(a, a)); }

inline TaskVector scaled(const TaskVector& a, double c) {
    TaskVector out(a);
    for (double& v : out) v *= c;
    return out;
}

// a + c*b
inline TaskVector axpy(const TaskVector& a, double c, const TaskVector& b) {
    TaskVector out(a);
    for (std::size_t i = 0; i < a.size(); ++i) out[i] += c * b[i];
    return out;
}

inline bool all_finite(const TaskVector& a) {
    for (double v : a)
        if (!std::isfinite(v)) return false;
    return true;
}

inline bool all_nonneg(const TaskVector& a) {
    for (double v : a)
        if (v < 0.0) return false;
    return true;
}

inline double max_abs(const TaskVector& a) {
    double m = 0.0;
    for (double v : a) m = std::max(m, std::abs(v));
    return m;
}

inline double sum(const TaskVector& a) {
    double acc = 0.0;
    for (double v : a) acc += v;
    return acc;
}

}  // namespace adopt
