#include "hierevo/placement.hpp"

#include <numeric>

#include <Eigen/Dense>

namespace hierevo {

namespace {

int find_root(std::vector<int>& parent, int v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
}

}  // namespace

std::vector<Point> place_free_nodes(std::span<const Point> start, const std::vector<bool>& fixed,
                                    std::span<const std::pair<int, int>> edges) {
    const int n = static_cast<int>(start.size());
    std::vector<Point> out(start.begin(), start.end());

    std::vector<int> parent(static_cast<std::size_t>(n));
    std::iota(parent.begin(), parent.end(), 0);
    std::vector<char> touches_fixed(static_cast<std::size_t>(n), 0);
    for (auto [a, b] : edges) {
        if (!fixed[a] && !fixed[b]) {
            parent[find_root(parent, a)] = find_root(parent, b);
        } else if (!fixed[a]) {
            touches_fixed[a] = 1;
        } else if (!fixed[b]) {
            touches_fixed[b] = 1;
        }
    }
    std::vector<char> anchored(static_cast<std::size_t>(n), 0);
    for (int v = 0; v < n; ++v) {
        if (touches_fixed[v]) anchored[find_root(parent, v)] = 1;
    }

    std::vector<int> row(static_cast<std::size_t>(n), -1);
    int dim = 0;
    for (int v = 0; v < n; ++v) {
        if (!fixed[v] && anchored[find_root(parent, v)]) row[v] = dim++;
    }
    if (dim > 0) {
        Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(dim, dim);
        Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(dim, 2);
        for (auto [a, b] : edges) {
            const int ra = row[a];
            const int rb = row[b];
            if (ra >= 0 && rb >= 0) {
                lap(ra, ra) += 1;
                lap(rb, rb) += 1;
                lap(ra, rb) -= 1;
                lap(rb, ra) -= 1;
            } else if (ra >= 0 || rb >= 0) {
                const int r = ra >= 0 ? ra : rb;
                const Point& anchor = start[ra >= 0 ? b : a];
                lap(r, r) += 1;
                rhs(r, 0) += anchor.x;
                rhs(r, 1) += anchor.y;
            }
        }
        const Eigen::MatrixXd solution = lap.ldlt().solve(rhs);
        for (int v = 0; v < n; ++v) {
            if (row[v] >= 0) out[v] = {solution(row[v], 0), solution(row[v], 1)};
        }
    }

    // Unanchored groups with at least one edge collapse to their centroid.
    std::vector<char> wired(static_cast<std::size_t>(n), 0);
    for (auto [a, b] : edges) wired[a] = wired[b] = 1;
    std::vector<Point> centroid(static_cast<std::size_t>(n));
    std::vector<int> members(static_cast<std::size_t>(n), 0);
    for (int v = 0; v < n; ++v) {
        if (fixed[v] || row[v] >= 0 || !wired[v]) continue;
        const int root = find_root(parent, v);
        centroid[root].x += start[v].x;
        centroid[root].y += start[v].y;
        ++members[root];
    }
    for (int v = 0; v < n; ++v) {
        if (fixed[v] || row[v] >= 0 || !wired[v]) continue;
        const int root = find_root(parent, v);
        out[v] = {centroid[root].x / members[root], centroid[root].y / members[root]};
    }
    return out;
}

double squared_length(std::span<const Point> positions, std::span<const std::pair<int, int>> edges) {
    double cost = 0.0;
    for (auto [a, b] : edges) {
        const double dx = positions[a].x - positions[b].x;
        const double dy = positions[a].y - positions[b].y;
        cost += dx * dx + dy * dy;
    }
    return cost;
}

namespace {

std::vector<std::pair<int, int>> edge_list(const NetworkGenome& genome) {
    std::vector<std::pair<int, int>> edges;
    for (const auto& c : genome.connections()) edges.emplace_back(c.from, c.to);
    return edges;
}

}  // namespace

NodeLayout optimal_layout(const NetworkGenome& genome) {
    const LayerShape& shape = genome.shape();
    const int n = shape.node_count();
    std::vector<Point> start(static_cast<std::size_t>(n));
    NodeLayout layout;
    layout.fixed.assign(static_cast<std::size_t>(n), false);
    const int inputs = shape.layer_size(0);
    for (int i = 0; i < inputs; ++i) {
        start[i] = {i - (inputs - 1) / 2.0, 0.0};
        layout.fixed[i] = true;
    }
    for (NodeId v = inputs; v < n; ++v) start[v] = {0.0, static_cast<double>(shape.layer_of(v))};
    layout.fixed[shape.output_node()] = true;
    layout.positions = place_free_nodes(start, layout.fixed, edge_list(genome));
    return layout;
}

double layout_cost(const NetworkGenome& genome, const NodeLayout& layout) {
    return squared_length(layout.positions, edge_list(genome));
}

double connection_cost(const NetworkGenome& genome) {
    return layout_cost(genome, optimal_layout(genome));
}

}  // namespace hierevo
