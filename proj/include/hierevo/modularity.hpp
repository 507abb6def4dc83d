#pragma once

#include <vector>

#include "hierevo/graph.hpp"

namespace hierevo {

/// Module label per graph node (local numbering of StructuralGraph).
struct Partition {
    std::vector<int> labels;

    int module_count() const;
    bool operator==(const Partition&) const = default;
};

/// Directed modularity:
///   Q = (1/m) sum_ij [A_ij - k_i^in k_j^out / m] delta(c_i, c_j)
/// with A_ij = 1 iff there is an edge i -> j.
Measured modularity_q(const StructuralGraph& graph, const Partition& partition);

struct ModuleDetection {
    Partition partition;
    double q = 0.0;
};

/// Recursive spectral bisection on the symmetrized directed modularity
/// matrix. Each split is refined by single-node moves between the two halves
/// (Kernighan-Lin style sweeps) and accepted only if it raises Q. A final
/// greedy pass moves single nodes between any modules, or merges modules,
/// while Q rises. Labels are numbered in order of first appearance. The
/// returned q is modularity_q of the returned partition.
ModuleDetection detect_modules(const StructuralGraph& graph);

}  // namespace hierevo
