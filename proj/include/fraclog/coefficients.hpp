#pragma once

#include <cmath>
#include <vector>

#include "fraclog/grid.hpp"

namespace fraclog {

/// c(x) = base + amplitude * exp(-((x - center) / width)^2). Constants have amplitude 0.
struct Coefficient {
    double base = 1.0;
    double amplitude = 0.0;
    double center = 0.0;
    double width = 1.0;

    static Coefficient constant(double c) { return {c, 0.0, 0.0, 1.0}; }
    static Coefficient bump(double at_infinity, double amp, double center = 0.0, double width = 1.0) {
        return {at_infinity, amp, center, width};
    }

    double operator()(double x) const {
        const double z = (x - center) / width;
        return base + amplitude * std::exp(-z * z);
    }

    Coefficient scaled(double factor) const { return {factor * base, factor * amplitude, center, width}; }

    double sup() const { return amplitude > 0.0 ? base + amplitude : base; }
    double inf() const { return amplitude < 0.0 ? base + amplitude : base; }
};

/// Values at the interior nodes, in interior order.
inline std::vector<double> sample_interior(const Coefficient& c, const Grid& grid) {
    std::vector<double> out;
    out.reserve(grid.interior_size());
    for (std::size_t j : grid.interior) out.push_back(c(grid.nodes[j]));
    return out;
}

}  // namespace fraclog
