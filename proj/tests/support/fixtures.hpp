#pragma once

// Hand-built genomes shared by the unit and acceptance suites.

#include "hierevo/network.hpp"

namespace hierevo::testing {

// Perfect 8\4\4\2\1 solver for AND-XOR-AND (or AND-EQU-AND with equ = true).
//
// Layer 1: node 8+k outputs 0 when AND(i2k, i2k+1) holds and -1 otherwise
// (weights 1,1, bias -2). Layer 2 computes a&!b and !a&b for each pair of
// ANDs, layer 3 ORs them into XOR (or NORs them into EQU), the output ANDs.
inline NetworkGenome perfect_and_x_and(bool equ = false) {
    NetworkGenome g(LayerShape::standard());
    for (int k = 0; k < 4; ++k) {
        g.set_connection(2 * k, 8 + k, 1);
        g.set_connection(2 * k + 1, 8 + k, 1);
        g.set_bias(8 + k, -2);
    }
    for (int pair = 0; pair < 2; ++pair) {
        const NodeId a = 8 + 2 * pair;
        const NodeId b = a + 1;
        const NodeId u = 12 + 2 * pair;
        const NodeId v = u + 1;
        g.set_connection(a, u, 2);
        g.set_connection(b, u, -2);
        g.set_bias(u, -1);
        g.set_connection(a, v, -2);
        g.set_connection(b, v, 2);
        g.set_bias(v, -1);
        const NodeId x = 16 + pair;
        const int w = equ ? -1 : 1;
        g.set_connection(u, x, w);
        g.set_connection(v, x, w);
        g.set_bias(x, equ ? -1 : 1);
        g.set_connection(x, 18, 1);
    }
    g.set_bias(18, -1);
    return g;
}

inline NetworkGenome fully_connected(const LayerShape& shape, int weight = 1) {
    NetworkGenome g(shape);
    for (int s = 0; s < shape.slot_count(); ++s) g.set_slot_weight(s, weight);
    return g;
}

// Every input feeds node 8, which chains through one node per hidden layer.
inline NetworkGenome minimal_chain() {
    NetworkGenome g(LayerShape::standard());
    for (int i = 0; i < 8; ++i) g.set_connection(i, 8, 1);
    g.set_connection(8, 12, 1);
    g.set_connection(12, 16, 1);
    g.set_connection(16, 18, 1);
    return g;
}

}  // namespace hierevo::testing
