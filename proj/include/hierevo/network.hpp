#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "hierevo/problems.hpp"
#include "hierevo/rng.hpp"
#include "hierevo/shape.hpp"

namespace hierevo {

inline constexpr double kDefaultLambda = 20.0;
inline constexpr std::array<int, 4> kWeightValues{-2, -1, 1, 2};
inline constexpr int kMinBias = -2;
inline constexpr int kMaxBias = 2;

constexpr bool is_valid_weight(int w) { return w >= -2 && w <= 2 && w != 0; }
constexpr bool is_valid_bias(int b) { return b >= kMinBias && b <= kMaxBias; }

struct Connection {
    NodeId from;
    NodeId to;
    int weight;

    bool operator==(const Connection&) const = default;
};

/// Raised for malformed genome documents and invariant violations.
class GenomeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Layered feedforward network with integer weights and biases.
///
/// Connections live in "slots", one per possible (from, to) pair between
/// consecutive layers. Slot order is layer block, then source, then target,
/// which coincides with lexicographic (from, to) order. A slot weight of 0
/// means "no connection".
class NetworkGenome {
public:
    explicit NetworkGenome(LayerShape shape);

    const LayerShape& shape() const { return shape_; }
    int node_count() const { return shape_.node_count(); }
    int connection_count() const { return connection_count_; }

    /// 0 when the pair is unconnected or not a consecutive-layer pair.
    int weight(NodeId from, NodeId to) const;
    bool connected(NodeId from, NodeId to) const { return weight(from, to) != 0; }
    void set_connection(NodeId from, NodeId to, int weight);
    void remove_connection(NodeId from, NodeId to);

    int bias(NodeId node) const { return biases_[node]; }
    /// Inputs carry no bias; setting one throws.
    void set_bias(NodeId node, int bias);

    /// All connections in slot order.
    std::vector<Connection> connections() const;

    int slot_count() const { return shape_.slot_count(); }
    int slot_weight(int slot) const { return slot_weights_[slot]; }
    /// weight 0 clears the slot.
    void set_slot_weight(int slot, int weight);
    /// Slot index of (from, to); -1 unless the nodes are on consecutive layers.
    int slot_of(NodeId from, NodeId to) const;
    std::pair<NodeId, NodeId> slot_endpoints(int slot) const;

    bool operator==(const NetworkGenome& other) const;

private:
    LayerShape shape_;
    std::vector<std::int8_t> slot_weights_;
    std::vector<std::int8_t> biases_;
    int connection_count_ = 0;
};

/// Node outputs for every input pattern, stored node-major.
class ActivationTrace {
public:
    ActivationTrace() = default;
    explicit ActivationTrace(int node_count)
        : node_count_(node_count), values_(static_cast<std::size_t>(node_count) * kPatternCount) {}

    int node_count() const { return node_count_; }
    double value(NodeId node, int pattern) const {
        return values_[static_cast<std::size_t>(node) * kPatternCount + pattern];
    }
    std::span<const double> node(NodeId node) const {
        return {values_.data() + static_cast<std::size_t>(node) * kPatternCount, kPatternCount};
    }
    std::span<double> node(NodeId node) {
        return {values_.data() + static_cast<std::size_t>(node) * kPatternCount, kPatternCount};
    }

private:
    int node_count_ = 0;
    std::vector<double> values_;
};

using InputPattern = std::array<std::uint8_t, kInputCount>;

/// Bits of pattern index k, i0 first (most significant).
InputPattern pattern_bits(int pattern);

/// tanh(lambda * x), short-circuiting the saturated range where std::tanh
/// returns exactly +-1.
double squash(double x, double lambda = kDefaultLambda);

/// Per-node outputs for one input pattern. Input nodes echo the pattern.
std::vector<double> activate(const NetworkGenome& genome, std::span<const std::uint8_t> pattern,
                             double lambda = kDefaultLambda);

/// Activates the network on all 256 patterns.
ActivationTrace trace_all(const NetworkGenome& genome, double lambda = kDefaultLambda);

struct Evaluation {
    double performance = 0.0;
    /// Bit k set iff the output on pattern k is strictly positive.
    PatternVector behavior;
    ActivationTrace trace;
};

/// Fraction of patterns where (output >= 0) matches the problem's truth value.
Evaluation evaluate_all(const NetworkGenome& genome, const LogicProblem& problem,
                        double lambda = kDefaultLambda);

/// Performance from an existing trace.
double performance_from_trace(const ActivationTrace& trace, const LogicProblem& problem);

/// True iff every input node has a directed path to the output node.
bool is_valid(const NetworkGenome& genome);

/// Genome with exactly conn_count connections and uniformly drawn weights
/// and biases. With require_valid, inputs are first routed to the output
/// through random relay nodes and the remaining connections are scattered
/// over unused slots.
NetworkGenome random_genome(const LayerShape& shape, int conn_count, bool require_valid, Rng& rng);

/// Minimum connection count of a valid network for the shape.
int min_valid_connections(const LayerShape& shape);

nlohmann::json to_json(const NetworkGenome& genome);
NetworkGenome genome_from_json(const nlohmann::json& doc);

void save_genome(const NetworkGenome& genome, const std::string& path);
NetworkGenome load_genome(const std::string& path);

}  // namespace hierevo
