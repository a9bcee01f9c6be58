#include "fts/math.hpp"

#include <cmath>

namespace fts {

double sum(std::span<const double> xs) {
    KahanSum acc;
    for (double x : xs) acc.add(x);
    return acc.value();
}

double mean(std::span<const double> xs) {
    if (xs.empty()) throw DataError("mean of empty series");
    return sum(xs) / static_cast<double>(xs.size());
}

double population_std(std::span<const double> xs) {
    if (xs.empty()) throw DataError("std of empty series");
    const double m = mean(xs);
    KahanSum acc;
    for (double x : xs) {
        const double d = x - m;
        acc.add(d * d);
    }
    return std::sqrt(acc.value() / static_cast<double>(xs.size()));
}

double dot(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw ShapeError("dot: dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw ShapeError("squared_distance: dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

}  // namespace fts
