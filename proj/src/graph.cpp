#include "hierevo/graph.hpp"

#include <algorithm>
#include <stdexcept>

namespace hierevo {

StructuralGraph::StructuralGraph(int node_count, std::vector<std::pair<int, int>> edges)
    : out_(static_cast<std::size_t>(node_count)), in_degree_(static_cast<std::size_t>(node_count), 0),
      edges_(std::move(edges)) {
    for (auto [from, to] : edges_) {
        if (from < 0 || to < 0 || from >= node_count || to >= node_count) {
            throw std::invalid_argument("edge endpoint outside graph");
        }
        out_[from].push_back(to);
        ++in_degree_[to];
    }
}

StructuralGraph StructuralGraph::from_genome(const NetworkGenome& genome, bool include_isolated,
                                             EdgeOrientation orientation) {
    const auto connections = genome.connections();
    std::vector<char> touched(static_cast<std::size_t>(genome.node_count()), include_isolated ? 1 : 0);
    for (const auto& c : connections) touched[c.from] = touched[c.to] = 1;

    std::vector<int> local(static_cast<std::size_t>(genome.node_count()), -1);
    std::vector<NodeId> nodes;
    for (NodeId n = 0; n < genome.node_count(); ++n) {
        if (!touched[n]) continue;
        local[n] = static_cast<int>(nodes.size());
        nodes.push_back(n);
    }
    std::vector<std::pair<int, int>> edges;
    edges.reserve(connections.size());
    for (const auto& c : connections) {
        if (orientation == EdgeOrientation::TowardOutput) {
            edges.emplace_back(local[c.from], local[c.to]);
        } else {
            edges.emplace_back(local[c.to], local[c.from]);
        }
    }

    StructuralGraph graph(static_cast<int>(nodes.size()), std::move(edges));
    graph.genome_nodes_ = std::move(nodes);
    return graph;
}

bool StructuralGraph::has_edge(int from, int to) const {
    return std::find(out_[from].begin(), out_[from].end(), to) != out_[from].end();
}

Measured local_reach(const StructuralGraph& graph, int node) {
    const int n = graph.node_count();
    if (n < 2) return {0.0, true};
    std::vector<int> dist(static_cast<std::size_t>(n), -1);
    std::vector<int> queue{node};
    dist[node] = 0;
    double sum = 0.0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const int v = queue[head];
        for (int w : graph.successors(v)) {
            if (dist[w] >= 0) continue;
            dist[w] = dist[v] + 1;
            sum += 1.0 / dist[w];
            queue.push_back(w);
        }
    }
    return {sum / (n - 1), false};
}

Measured hierarchy(const StructuralGraph& graph) {
    const int n = graph.node_count();
    if (n < 2) return {0.0, true};
    std::vector<double> reach(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) reach[v] = local_reach(graph, v).value;
    const double top = *std::max_element(reach.begin(), reach.end());
    double sum = 0.0;
    for (double r : reach) sum += top - r;
    return {sum / (n - 1), false};
}

}  // namespace hierevo
