#pragma once

#include <span>
#include <vector>

#include "hierevo/network.hpp"
#include "hierevo/problems.hpp"

namespace hierevo {

struct SubproblemReport {
    int solved = 0;
    int total = 0;
    /// One flag per sub-problem in gate-id order.
    std::vector<bool> per_gate;

    double fraction() const { return total == 0 ? 0.0 : static_cast<double>(solved) / total; }
};

/// True iff some threshold puts every `truth` pattern strictly on one side of
/// every other pattern. Equal extreme values do not separate.
bool threshold_separable(std::span<const double> values, const PatternVector& truth);

/// Counts sub-problems solved by a single non-input node or, failing that,
/// by the summed outputs of a group (size >= 2) of nodes within one
/// non-input layer. Search for a sub-problem stops at its first solver.
SubproblemReport solved_subproblems(const NetworkGenome& genome, const LogicProblem& problem,
                                    const ActivationTrace& trace, bool include_root = false);

}  // namespace hierevo
