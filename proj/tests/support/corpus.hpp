#pragma once

// Fixed corpus of small digraphs for checking module detection against
// exhaustive search. Generated from a constant seed so every run sees the
// same 20 graphs.

#include <vector>

#include "hierevo/rng.hpp"
#include "support/oracles.hpp"

namespace hierevo::testing {

inline std::vector<oracle::Digraph> module_corpus() {
    std::vector<oracle::Digraph> corpus;
    // Two feedforward blocks with dense internal wiring and one cross edge.
    corpus.push_back({8, {{0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}, {4, 6}, {4, 7}, {5, 6}, {5, 7}, {6, 7}, {3, 4}}});
    // Complete bipartite 4 -> 4.
    {
        oracle::Digraph g{8, {}};
        for (int a = 0; a < 4; ++a)
            for (int b = 4; b < 8; ++b) g.edges.emplace_back(a, b);
        corpus.push_back(g);
    }
    // Three chains joined at a sink.
    corpus.push_back({10, {{0, 1}, {1, 2}, {3, 4}, {4, 5}, {6, 7}, {7, 8}, {2, 9}, {5, 9}, {8, 9}}});
    // Layered tree 4 -> 2 -> 1.
    corpus.push_back({7, {{0, 4}, {1, 4}, {2, 5}, {3, 5}, {4, 6}, {5, 6}}});

    Rng rng(20240611);
    while (corpus.size() < 20) {
        const int n = static_cast<int>(rng.between(4, 10));
        oracle::Digraph g{n, {}};
        const bool blocky = rng.coin();
        const double p_in = blocky ? 0.6 : 0.3;
        const double p_out = blocky ? 0.08 : 0.3;
        for (int a = 0; a < n; ++a) {
            for (int b = 0; b < n; ++b) {
                if (a == b) continue;
                const bool same = (a < n / 2) == (b < n / 2);
                if (rng.bernoulli(same ? p_in : p_out)) g.edges.emplace_back(a, b);
            }
        }
        if (!g.edges.empty()) corpus.push_back(g);
    }
    return corpus;
}

}  // namespace hierevo::testing
