#pragma once

#include <span>
#include <utility>
#include <vector>

#include "hierevo/network.hpp"

namespace hierevo {

/// A value paired with a flag for inputs where the measure is undefined
/// (too few nodes or no edges); value is 0 in that case.
struct Measured {
    double value = 0.0;
    bool degenerate = false;
};

/// Which way genome connections point in a StructuralGraph.
enum class EdgeOrientation {
    TowardOutput,  ///< information flow: input -> hidden -> output
    TowardInputs,  ///< reversed: the output is the root
};

/// Directed, unweighted view of a genome's wiring. Edges point towards the
/// output. Nodes are renumbered 0..N-1; genome_node() maps back.
class StructuralGraph {
public:
    StructuralGraph() = default;
    /// Abstract graph on nodes 0..node_count-1.
    StructuralGraph(int node_count, std::vector<std::pair<int, int>> edges);

    /// Drops nodes without any incident connection unless include_isolated.
    static StructuralGraph from_genome(const NetworkGenome& genome, bool include_isolated = false,
                                       EdgeOrientation orientation = EdgeOrientation::TowardOutput);

    int node_count() const { return static_cast<int>(out_.size()); }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }
    std::span<const int> successors(int v) const { return out_[v]; }
    int out_degree(int v) const { return static_cast<int>(out_[v].size()); }
    int in_degree(int v) const { return in_degree_[v]; }
    bool has_edge(int from, int to) const;
    NodeId genome_node(int v) const { return genome_nodes_.empty() ? v : genome_nodes_[v]; }

private:
    std::vector<std::vector<int>> out_;
    std::vector<int> in_degree_;
    std::vector<std::pair<int, int>> edges_;
    std::vector<NodeId> genome_nodes_;
};

/// Distance-discounted share of the graph reachable from `node` along
/// outgoing edges: (1/(N-1)) * sum of 1/d over reachable nodes.
Measured local_reach(const StructuralGraph& graph, int node);

/// Global reaching centrality: sum over nodes of (max reach - reach) / (N-1).
Measured hierarchy(const StructuralGraph& graph);

}  // namespace hierevo
