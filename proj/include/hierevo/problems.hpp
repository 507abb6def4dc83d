#pragma once

#include <array>
#include <bitset>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "hierevo/shape.hpp"

namespace hierevo {

/// One bit per input pattern. Pattern k assigns input i0 the most
/// significant bit of k and i7 the least significant.
using PatternVector = std::bitset<kPatternCount>;

enum class Gate { And, Or, Xor, Equ };

bool apply_gate(Gate gate, bool a, bool b);
std::string_view gate_name(Gate gate);

/// Value of input `input` (0..7) in pattern `pattern`.
constexpr bool input_bit(int pattern, int input) {
    return ((pattern >> (kInputCount - 1 - input)) & 1) != 0;
}

/// A three-level tree of two-input gates over the 8 inputs.
///
/// Gate ids 0..3 are the first level, reading (i0,i1) .. (i6,i7); ids 4 and 5
/// combine gates (0,1) and (2,3); id 6 is the root.
class LogicProblem {
public:
    static constexpr int kGateCount = 7;
    static constexpr int kRootGate = 6;

    LogicProblem(std::string name, std::array<Gate, kGateCount> gates);

    static LogicProblem and_xor_and();
    static LogicProblem and_equ_and();
    static LogicProblem or_xor_and();
    static LogicProblem or_xor_equ_equ();
    /// Accepts and-xor-and, and-equ-and, or-xor-and, or-xor-equ-equ.
    static LogicProblem by_name(std::string_view name);
    static std::vector<std::string> names();

    const std::string& name() const { return name_; }
    const std::array<Gate, kGateCount>& gates() const { return gates_; }

    /// Every gate's output for one pattern, in gate-id order.
    std::array<bool, kGateCount> gate_values(int pattern) const;
    bool truth(int pattern) const { return truth_[pattern]; }
    bool truth(const std::array<std::uint8_t, kInputCount>& bits) const;
    const PatternVector& truth_vector() const { return truth_; }
    const PatternVector& gate_vector(int gate) const { return gate_truth_[gate]; }

    /// Layer shape the problem is evolved on.
    LayerShape default_shape() const;

private:
    std::string name_;
    std::array<Gate, kGateCount> gates_;
    std::array<PatternVector, kGateCount> gate_truth_;
    PatternVector truth_;
};

struct SubProblem {
    int gate_id;
    Gate gate;
    PatternVector truth;
};

/// The non-root gates (6), or all 7 when include_root is set.
std::vector<SubProblem> subproblem_truth_vectors(const LogicProblem& problem,
                                                 bool include_root = false);

}  // namespace hierevo
