#include "hierevo/functional.hpp"

#include <algorithm>
#include <limits>

namespace hierevo {

bool threshold_separable(std::span<const double> values, const PatternVector& truth) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    double min_true = inf, max_true = -inf, min_false = inf, max_false = -inf;
    for (int p = 0; p < kPatternCount; ++p) {
        const double v = values[p];
        if (truth[p]) {
            min_true = std::min(min_true, v);
            max_true = std::max(max_true, v);
        } else {
            min_false = std::min(min_false, v);
            max_false = std::max(max_false, v);
        }
    }
    if (min_true == inf || min_false == inf) return true;
    return min_true > max_false || min_false > max_true;
}

SubproblemReport solved_subproblems(const NetworkGenome& genome, const LogicProblem& problem,
                                    const ActivationTrace& trace, bool include_root) {
    const LayerShape& shape = genome.shape();
    const auto subproblems = subproblem_truth_vectors(problem, include_root);
    SubproblemReport report;
    report.total = static_cast<int>(subproblems.size());
    report.per_gate.assign(subproblems.size(), false);

    std::vector<double> sum(kPatternCount);
    for (std::size_t g = 0; g < subproblems.size(); ++g) {
        const PatternVector& truth = subproblems[g].truth;
        bool solved = false;
        for (NodeId node = shape.layer_size(0); node < shape.node_count() && !solved; ++node) {
            solved = threshold_separable(trace.node(node), truth);
        }
        for (int layer = 1; layer < shape.layer_count() && !solved; ++layer) {
            const int size = shape.layer_size(layer);
            const NodeId first = shape.first_node(layer);
            for (unsigned mask = 1; mask < (1u << size) && !solved; ++mask) {
                if ((mask & (mask - 1)) == 0) continue;  // singletons done above
                std::fill(sum.begin(), sum.end(), 0.0);
                for (int j = 0; j < size; ++j) {
                    if (!(mask & (1u << j))) continue;
                    const auto values = trace.node(first + j);
                    for (int p = 0; p < kPatternCount; ++p) sum[p] += values[p];
                }
                solved = threshold_separable(sum, truth);
            }
        }
        report.per_gate[g] = solved;
        report.solved += solved;
    }
    return report;
}

}  // namespace hierevo
