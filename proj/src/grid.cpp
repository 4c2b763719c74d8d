#include "fraclog/grid.hpp"

#include <cmath>
#include <sstream>

#include "fraclog/errors.hpp"

namespace fraclog {

namespace {

bool near_integer(double v) { return std::abs(v - std::round(v)) < 1e-9 * std::max(1.0, std::abs(v)); }

}  // namespace

std::size_t Grid::center_index() const {
    std::size_t best = interior.front();
    for (std::size_t j : interior) {
        if (std::abs(nodes[j]) < std::abs(nodes[best])) best = j;
    }
    return best;
}

Grid build_grid(double R, double h, double L) {
    if (!(h > 0.0) || !std::isfinite(h)) {
        std::ostringstream os;
        os << "grid spacing must be positive, got h=" << h;
        fail(ErrorKind::configuration, os.str());
    }
    if (!(R > h) || !std::isfinite(R)) {
        std::ostringstream os;
        os << "domain radius must exceed the spacing, got R=" << R << ", h=" << h;
        fail(ErrorKind::configuration, os.str());
    }
    if (!(L >= R) || !std::isfinite(L)) {
        std::ostringstream os;
        os << "box radius must be at least the domain radius, got L=" << L << ", R=" << R;
        fail(ErrorKind::configuration, os.str());
    }
    if (L / h > max_box_cells) {
        std::ostringstream os;
        os << "grid too large: L/h=" << L / h << " exceeds " << max_box_cells;
        fail(ErrorKind::configuration, os.str());
    }

    Grid g;
    g.domain_radius = R;
    g.spacing = h;
    g.box_radius = L;

    // Half-integer placement puts a node on R exactly when R/h - 1/2 is an integer.
    const bool half_integer = !near_integer(R / h - 0.5);
    if (half_integer) {
        const auto half = static_cast<long>(std::floor(L / h + 0.5 + 1e-9));
        for (long k = -half; k < half; ++k) g.nodes.push_back((static_cast<double>(k) + 0.5) * h);
    } else {
        const auto half = static_cast<long>(std::floor(L / h + 1e-9));
        for (long k = -half; k <= half; ++k) g.nodes.push_back(static_cast<double>(k) * h);
    }

    g.kind.resize(g.nodes.size());
    g.dist.resize(g.nodes.size());
    for (std::size_t j = 0; j < g.nodes.size(); ++j) {
        const double ax = std::abs(g.nodes[j]);
        if (ax < R) {
            g.kind[j] = NodeKind::interior;
            g.dist[j] = R - ax;
            g.interior.push_back(j);
        } else {
            g.kind[j] = NodeKind::exterior;
            g.dist[j] = ax - R;
        }
    }
    if (g.interior.empty()) fail(ErrorKind::configuration, "grid has no interior nodes");
    return g;
}

}  // namespace fraclog
