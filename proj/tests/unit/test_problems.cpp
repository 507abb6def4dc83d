#include <doctest.h>

#include <stdexcept>

#include "hierevo/problems.hpp"

using namespace hierevo;

namespace {

// Written straight from the gate definitions, independent of the gate tree.
bool and_xor_and_oracle(int p) {
    auto b = [p](int i) { return input_bit(p, i); };
    const bool left = (b(0) && b(1)) != (b(2) && b(3));
    const bool right = (b(4) && b(5)) != (b(6) && b(7));
    return left && right;
}

bool and_equ_and_oracle(int p) {
    auto b = [p](int i) { return input_bit(p, i); };
    return ((b(0) && b(1)) == (b(2) && b(3))) && ((b(4) && b(5)) == (b(6) && b(7)));
}

bool or_xor_and_oracle(int p) {
    auto b = [p](int i) { return input_bit(p, i); };
    return ((b(0) || b(1)) != (b(2) || b(3))) && ((b(4) || b(5)) != (b(6) || b(7)));
}

bool or_xor_equ_equ_oracle(int p) {
    auto b = [p](int i) { return input_bit(p, i); };
    const bool x = (b(0) || b(1)) != (b(2) || b(3));
    const bool e = (b(4) || b(5)) == (b(6) || b(7));
    return x == e;
}

int pattern_of(const char* bits) {
    int p = 0;
    for (int i = 0; i < 8; ++i) p = (p << 1) | (bits[i] - '0');
    return p;
}

}  // namespace

TEST_CASE("table example: AND-XOR-AND on 00110111") {
    const auto problem = LogicProblem::and_xor_and();
    const auto v = problem.gate_values(pattern_of("00110111"));
    CHECK(v[0] == false);
    CHECK(v[1] == true);
    CHECK(v[2] == false);
    CHECK(v[3] == true);
    CHECK(v[4] == true);
    CHECK(v[5] == true);
    CHECK(v[6] == true);
    CHECK(problem.truth(pattern_of("00110111")));
    CHECK_FALSE(problem.truth(0));
}

TEST_CASE("AND-EQU-AND on 00110111 is false") {
    const auto v = LogicProblem::and_equ_and().gate_values(pattern_of("00110111"));
    CHECK(v[4] == false);
    CHECK(v[5] == false);
    CHECK(v[6] == false);
}

TEST_CASE("truth tables match direct boolean evaluation") {
    const auto axa = LogicProblem::and_xor_and();
    const auto aea = LogicProblem::and_equ_and();
    const auto oxa = LogicProblem::or_xor_and();
    const auto oxee = LogicProblem::or_xor_equ_equ();
    for (int p = 0; p < kPatternCount; ++p) {
        CHECK(axa.truth(p) == and_xor_and_oracle(p));
        CHECK(aea.truth(p) == and_equ_and_oracle(p));
        CHECK(oxa.truth(p) == or_xor_and_oracle(p));
        CHECK(oxee.truth(p) == or_xor_equ_equ_oracle(p));
    }
    CHECK(axa.truth_vector().count() == 36);
}

TEST_CASE("sub-problems") {
    const auto subs = subproblem_truth_vectors(LogicProblem::and_xor_and());
    REQUIRE(subs.size() == 6);
    CHECK(subs[0].gate == Gate::And);
    CHECK(subs[0].truth.count() == 64);
    CHECK(subproblem_truth_vectors(LogicProblem::and_xor_and(), true).size() == 7);

    const auto deep = subproblem_truth_vectors(LogicProblem::or_xor_equ_equ());
    REQUIRE(deep.size() == 6);
    CHECK(deep[4].gate == Gate::Xor);
    CHECK(deep[5].gate == Gate::Equ);
    // Children of both second-level gates are ORs on disjoint inputs, so the
    // two vectors differ; check each against its own complement instead.
    for (int p = 0; p < kPatternCount; ++p) {
        const bool left = input_bit(p, 0) || input_bit(p, 1);
        const bool right = input_bit(p, 2) || input_bit(p, 3);
        CHECK(deep[4].truth[p] == (left != right));
        CHECK((LogicProblem("mirror", {Gate::Or, Gate::Or, Gate::Or, Gate::Or, Gate::Equ, Gate::Equ, Gate::Equ})
                   .gate_vector(4)[p]) == !deep[4].truth[p]);
    }
}

TEST_CASE("problem lookup") {
    for (const auto& name : LogicProblem::names()) CHECK(LogicProblem::by_name(name).name() == name);
    CHECK_THROWS_AS(LogicProblem::by_name("nand"), std::invalid_argument);
    CHECK(LogicProblem::or_xor_equ_equ().default_shape() == LayerShape::deep());
    CHECK(LogicProblem::and_xor_and().default_shape().slot_count() == 58);
}
