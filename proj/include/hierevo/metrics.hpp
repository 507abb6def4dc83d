#pragma once

#include "hierevo/functional.hpp"
#include "hierevo/graph.hpp"
#include "hierevo/modularity.hpp"
#include "hierevo/placement.hpp"

namespace hierevo {

struct MetricsOptions {
    bool include_isolated_nodes = false;
    /// Reach for hierarchy is measured from the output down to the inputs
    /// unless set to TowardOutput.
    EdgeOrientation hierarchy_orientation = EdgeOrientation::TowardInputs;
    bool include_root_subproblem = false;
    double lambda = kDefaultLambda;
};

struct MetricsReport {
    double performance = 0.0;
    double hierarchy = 0.0;
    double modularity = 0.0;
    Partition partition;
    double cost = 0.0;
    NodeLayout layout;
    SubproblemReport subproblems;
};

/// Hierarchy of a genome's structural graph under `options`.
double network_hierarchy(const NetworkGenome& genome, const MetricsOptions& options = {});
/// Detected modularity of a genome's structural graph.
double network_modularity(const NetworkGenome& genome, const MetricsOptions& options = {});

MetricsReport compute_metrics(const NetworkGenome& genome, const LogicProblem& problem,
                              const MetricsOptions& options = {});

}  // namespace hierevo
