#include "hierevo/metrics.hpp"

namespace hierevo {

double network_hierarchy(const NetworkGenome& genome, const MetricsOptions& options) {
    return hierarchy(StructuralGraph::from_genome(genome, options.include_isolated_nodes,
                                                  options.hierarchy_orientation))
        .value;
}

double network_modularity(const NetworkGenome& genome, const MetricsOptions& options) {
    return detect_modules(StructuralGraph::from_genome(genome, options.include_isolated_nodes)).q;
}

MetricsReport compute_metrics(const NetworkGenome& genome, const LogicProblem& problem,
                              const MetricsOptions& options) {
    MetricsReport report;
    report.hierarchy = network_hierarchy(genome, options);
    auto modules = detect_modules(StructuralGraph::from_genome(genome, options.include_isolated_nodes));
    report.modularity = modules.q;
    report.partition = std::move(modules.partition);
    report.layout = optimal_layout(genome);
    report.cost = layout_cost(genome, report.layout);
    const auto eval = evaluate_all(genome, problem, options.lambda);
    report.performance = eval.performance;
    report.subproblems = solved_subproblems(genome, problem, eval.trace, options.include_root_subproblem);
    return report;
}

}  // namespace hierevo
