#pragma once

#include <span>
#include <utility>
#include <vector>

#include "hierevo/network.hpp"

namespace hierevo {

struct Point {
    double x = 0.0;
    double y = 0.0;
    bool operator==(const Point&) const = default;
};

/// Position of every genome node. Inputs sit at x = -3.5 .. 3.5, y = 0; the
/// output at (0, layers - 1); hidden nodes wherever the placement put them.
struct NodeLayout {
    std::vector<Point> positions;
    std::vector<bool> fixed;
};

/// Minimizes the summed squared length of `edges` over the non-fixed nodes.
///
/// x and y decouple, so each axis is one linear solve in which every free
/// node sits at the mean of its neighbours, fixed nodes acting as boundary
/// values. A connected group of free nodes touching no fixed node has a
/// zero-cost optimum and is collapsed onto the centroid of its members'
/// starting positions. Free nodes without edges keep their starting position.
std::vector<Point> place_free_nodes(std::span<const Point> start, const std::vector<bool>& fixed,
                                    std::span<const std::pair<int, int>> edges);

double squared_length(std::span<const Point> positions, std::span<const std::pair<int, int>> edges);

/// Anchors inputs and output, starts hidden nodes at (0, layer index), then
/// runs place_free_nodes over the genome's connections.
NodeLayout optimal_layout(const NetworkGenome& genome);

/// Summed squared Euclidean length of all connections under `layout`.
double layout_cost(const NetworkGenome& genome, const NodeLayout& layout);

/// layout_cost under optimal_layout.
double connection_cost(const NetworkGenome& genome);

}  // namespace hierevo
