#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "lipext/errors.hpp"

namespace lipext {

using VecD = std::vector<double>;

inline double euclidean_distance(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw PreconditionError("euclidean_distance: dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

inline double supnorm_distance(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw PreconditionError("supnorm_distance: dimension mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = std::fabs(a[i] - b[i]);
        if (d > m) m = d;
    }
    return m;
}

inline double norm2(std::span<const double> a) {
    double s = 0.0;
    for (double x : a) s += x * x;
    return std::sqrt(s);
}

inline double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline VecD sub(std::span<const double> a, std::span<const double> b) {
    VecD r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

inline VecD add(std::span<const double> a, std::span<const double> b) {
    VecD r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

// c + t * (v - c): scaling toward a center, used by generators and transports.
inline VecD scale_toward(std::span<const double> center, std::span<const double> v, double t) {
    VecD r(center.size());
    for (std::size_t i = 0; i < center.size(); ++i) r[i] = center[i] + t * (v[i] - center[i]);
    return r;
}

inline bool all_finite(std::span<const double> a) {
    for (double x : a)
        if (!std::isfinite(x)) return false;
    return true;
}

}  // namespace lipext
