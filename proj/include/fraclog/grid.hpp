#pragma once

#include <cstddef>
#include <vector>

namespace fraclog {

enum class NodeKind { interior, exterior };

/**
 * Uniform 1-D mesh on the box [-L, L] around the domain (-R, R).
 *
 * Nodes are symmetric about the origin. They sit at half-integer multiples of h
 * unless that would put a node exactly on +-R, in which case they sit at integer
 * multiples of h. No node ever lies on the boundary, so d > 0 on interior nodes.
 */
struct Grid {
    double domain_radius = 0.0;
    double spacing = 0.0;
    double box_radius = 0.0;
    std::vector<double> nodes;
    std::vector<NodeKind> kind;
    /// Distance to the boundary: R - |x| on interior nodes, |x| - R on exterior nodes.
    std::vector<double> dist;
    /// Indices of interior nodes, ascending.
    std::vector<std::size_t> interior;

    std::size_t size() const noexcept { return nodes.size(); }
    std::size_t interior_size() const noexcept { return interior.size(); }
    bool is_interior(std::size_t j) const { return kind[j] == NodeKind::interior; }

    /// Index (into nodes) of the interior node closest to the origin.
    std::size_t center_index() const;
};

/// Largest permitted L/h.
inline constexpr double max_box_cells = 1.0e5;

Grid build_grid(double R, double h, double L);

/// Grid with the default box L = 2R.
inline Grid build_grid(double R, double h) { return build_grid(R, h, 2.0 * R); }

}  // namespace fraclog
