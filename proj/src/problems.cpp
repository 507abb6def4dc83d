#include "hierevo/problems.hpp"

#include <stdexcept>

namespace hierevo {

bool apply_gate(Gate gate, bool a, bool b) {
    switch (gate) {
        case Gate::And: return a && b;
        case Gate::Or: return a || b;
        case Gate::Xor: return a != b;
        case Gate::Equ: return a == b;
    }
    return false;
}

std::string_view gate_name(Gate gate) {
    switch (gate) {
        case Gate::And: return "AND";
        case Gate::Or: return "OR";
        case Gate::Xor: return "XOR";
        case Gate::Equ: return "EQU";
    }
    return "?";
}

LogicProblem::LogicProblem(std::string name, std::array<Gate, kGateCount> gates)
    : name_(std::move(name)), gates_(gates) {
    for (int pattern = 0; pattern < kPatternCount; ++pattern) {
        const auto values = gate_values(pattern);
        for (int g = 0; g < kGateCount; ++g) gate_truth_[g][pattern] = values[g];
    }
    truth_ = gate_truth_[kRootGate];
}

std::array<bool, LogicProblem::kGateCount> LogicProblem::gate_values(int pattern) const {
    std::array<bool, kGateCount> v{};
    for (int g = 0; g < 4; ++g) {
        v[g] = apply_gate(gates_[g], input_bit(pattern, 2 * g), input_bit(pattern, 2 * g + 1));
    }
    v[4] = apply_gate(gates_[4], v[0], v[1]);
    v[5] = apply_gate(gates_[5], v[2], v[3]);
    v[6] = apply_gate(gates_[6], v[4], v[5]);
    return v;
}

bool LogicProblem::truth(const std::array<std::uint8_t, kInputCount>& bits) const {
    int pattern = 0;
    for (int i = 0; i < kInputCount; ++i) {
        if (bits[i] > 1) throw std::invalid_argument("input pattern entries must be 0 or 1");
        pattern = (pattern << 1) | bits[i];
    }
    return truth_[pattern];
}

LogicProblem LogicProblem::and_xor_and() {
    using enum Gate;
    return LogicProblem("and-xor-and", {And, And, And, And, Xor, Xor, And});
}

LogicProblem LogicProblem::and_equ_and() {
    using enum Gate;
    return LogicProblem("and-equ-and", {And, And, And, And, Equ, Equ, And});
}

LogicProblem LogicProblem::or_xor_and() {
    using enum Gate;
    return LogicProblem("or-xor-and", {Or, Or, Or, Or, Xor, Xor, And});
}

LogicProblem LogicProblem::or_xor_equ_equ() {
    using enum Gate;
    return LogicProblem("or-xor-equ-equ", {Or, Or, Or, Or, Xor, Equ, Equ});
}

LogicProblem LogicProblem::by_name(std::string_view name) {
    if (name == "and-xor-and") return and_xor_and();
    if (name == "and-equ-and") return and_equ_and();
    if (name == "or-xor-and") return or_xor_and();
    if (name == "or-xor-equ-equ") return or_xor_equ_equ();
    throw std::invalid_argument("unknown problem '" + std::string(name) + "'");
}

std::vector<std::string> LogicProblem::names() {
    return {"and-xor-and", "and-equ-and", "or-xor-and", "or-xor-equ-equ"};
}

LayerShape LogicProblem::default_shape() const {
    return name_ == "or-xor-equ-equ" ? LayerShape::deep() : LayerShape::standard();
}

std::vector<SubProblem> subproblem_truth_vectors(const LogicProblem& problem, bool include_root) {
    std::vector<SubProblem> out;
    const int last = include_root ? LogicProblem::kGateCount : LogicProblem::kRootGate;
    for (int g = 0; g < last; ++g) out.push_back({g, problem.gates()[g], problem.gate_vector(g)});
    return out;
}

}  // namespace hierevo
