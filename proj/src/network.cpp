#include "hierevo/network.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <queue>
#include <set>

namespace hierevo {

NetworkGenome::NetworkGenome(LayerShape shape)
    : shape_(std::move(shape)),
      slot_weights_(static_cast<std::size_t>(shape_.slot_count()), 0),
      biases_(static_cast<std::size_t>(shape_.node_count()), 0) {}

int NetworkGenome::slot_of(NodeId from, NodeId to) const {
    if (from < 0 || to < 0 || from >= node_count() || to >= node_count()) return -1;
    const int layer = shape_.layer_of(from);
    if (shape_.layer_of(to) != layer + 1) return -1;
    return shape_.slot_offset(layer) + (from - shape_.first_node(layer)) * shape_.layer_size(layer + 1) +
           (to - shape_.first_node(layer + 1));
}

std::pair<NodeId, NodeId> NetworkGenome::slot_endpoints(int slot) const {
    int t = 0;
    while (shape_.slot_offset(t + 1) <= slot) ++t;
    const int local = slot - shape_.slot_offset(t);
    const int width = shape_.layer_size(t + 1);
    return {shape_.first_node(t) + local / width, shape_.first_node(t + 1) + local % width};
}

int NetworkGenome::weight(NodeId from, NodeId to) const {
    const int slot = slot_of(from, to);
    return slot < 0 ? 0 : slot_weights_[slot];
}

void NetworkGenome::set_slot_weight(int slot, int weight) {
    if (weight != 0 && !is_valid_weight(weight)) throw GenomeError("weight out of range");
    auto& cell = slot_weights_.at(slot);
    connection_count_ += (weight != 0) - (cell != 0);
    cell = static_cast<std::int8_t>(weight);
}

void NetworkGenome::set_connection(NodeId from, NodeId to, int weight) {
    if (!is_valid_weight(weight)) throw GenomeError("weight out of range");
    const int slot = slot_of(from, to);
    if (slot < 0) throw GenomeError("non-consecutive layers");
    set_slot_weight(slot, weight);
}

void NetworkGenome::remove_connection(NodeId from, NodeId to) {
    const int slot = slot_of(from, to);
    if (slot >= 0) set_slot_weight(slot, 0);
}

void NetworkGenome::set_bias(NodeId node, int bias) {
    if (node < shape_.layer_size(0) || node >= node_count()) throw GenomeError("bias on input or unknown node");
    if (!is_valid_bias(bias)) throw GenomeError("bias out of range");
    biases_[node] = static_cast<std::int8_t>(bias);
}

std::vector<Connection> NetworkGenome::connections() const {
    std::vector<Connection> out;
    out.reserve(connection_count_);
    for (int slot = 0; slot < slot_count(); ++slot) {
        if (slot_weights_[slot] == 0) continue;
        auto [from, to] = slot_endpoints(slot);
        out.push_back({from, to, slot_weights_[slot]});
    }
    return out;
}

bool NetworkGenome::operator==(const NetworkGenome& other) const {
    return shape_ == other.shape_ && slot_weights_ == other.slot_weights_ && biases_ == other.biases_;
}

InputPattern pattern_bits(int pattern) {
    InputPattern bits{};
    for (int i = 0; i < kInputCount; ++i) bits[i] = input_bit(pattern, i) ? 1 : 0;
    return bits;
}

double squash(double x, double lambda) {
    const double z = lambda * x;
    // std::tanh rounds to exactly +-1 well before |z| = 19.5.
    if (z >= 19.5) return 1.0;
    if (z <= -19.5) return -1.0;
    return std::tanh(z);
}

namespace {

// Propagates `width` patterns at once; values is node-major with stride width.
void propagate(const NetworkGenome& genome, double lambda, double* values, int width) {
    const LayerShape& shape = genome.shape();
    std::vector<double> net(static_cast<std::size_t>(width));
    for (int t = 0; t + 1 < shape.layer_count(); ++t) {
        const NodeId src0 = shape.first_node(t);
        const NodeId dst0 = shape.first_node(t + 1);
        const int fan = shape.layer_size(t + 1);
        for (int j = 0; j < fan; ++j) {
            std::fill(net.begin(), net.end(), 0.0);
            for (int i = 0; i < shape.layer_size(t); ++i) {
                const int w = genome.slot_weight(shape.slot_offset(t) + i * fan + j);
                if (w == 0) continue;
                const double* src = values + static_cast<std::size_t>(src0 + i) * width;
                for (int p = 0; p < width; ++p) net[p] += w * src[p];
            }
            const double b = genome.bias(dst0 + j);
            double* dst = values + static_cast<std::size_t>(dst0 + j) * width;
            for (int p = 0; p < width; ++p) dst[p] = squash(net[p] + b, lambda);
        }
    }
}

}  // namespace

std::vector<double> activate(const NetworkGenome& genome, std::span<const std::uint8_t> pattern, double lambda) {
    if (static_cast<int>(pattern.size()) != genome.shape().layer_size(0)) {
        throw std::invalid_argument("input pattern must have 8 entries");
    }
    std::vector<double> values(static_cast<std::size_t>(genome.node_count()), 0.0);
    for (std::size_t i = 0; i < pattern.size(); ++i) {
        if (pattern[i] > 1) throw std::invalid_argument("input pattern entries must be 0 or 1");
        values[i] = pattern[i];
    }
    propagate(genome, lambda, values.data(), 1);
    return values;
}

ActivationTrace trace_all(const NetworkGenome& genome, double lambda) {
    ActivationTrace trace(genome.node_count());
    for (int i = 0; i < kInputCount; ++i) {
        auto column = trace.node(i);
        for (int p = 0; p < kPatternCount; ++p) column[p] = input_bit(p, i) ? 1.0 : 0.0;
    }
    propagate(genome, lambda, trace.node(0).data(), kPatternCount);
    return trace;
}

double performance_from_trace(const ActivationTrace& trace, const LogicProblem& problem) {
    const auto out = trace.node(trace.node_count() - 1);
    int correct = 0;
    for (int p = 0; p < kPatternCount; ++p) correct += (out[p] >= 0.0) == problem.truth(p);
    return static_cast<double>(correct) / kPatternCount;
}

Evaluation evaluate_all(const NetworkGenome& genome, const LogicProblem& problem, double lambda) {
    Evaluation ev;
    ev.trace = trace_all(genome, lambda);
    ev.performance = performance_from_trace(ev.trace, problem);
    const auto out = ev.trace.node(genome.shape().output_node());
    for (int p = 0; p < kPatternCount; ++p) ev.behavior[p] = out[p] > 0.0;
    return ev;
}

bool is_valid(const NetworkGenome& genome) {
    const LayerShape& shape = genome.shape();
    // Walk backwards from the output; every input must be reached.
    std::vector<char> reaches(static_cast<std::size_t>(genome.node_count()), 0);
    reaches[shape.output_node()] = 1;
    for (int t = shape.layer_count() - 2; t >= 0; --t) {
        for (int i = 0; i < shape.layer_size(t); ++i) {
            const NodeId from = shape.first_node(t) + i;
            for (int j = 0; j < shape.layer_size(t + 1); ++j) {
                const NodeId to = shape.first_node(t + 1) + j;
                if (reaches[to] && genome.connected(from, to)) {
                    reaches[from] = 1;
                    break;
                }
            }
        }
    }
    for (int i = 0; i < shape.layer_size(0); ++i) {
        if (!reaches[i]) return false;
    }
    return true;
}

int min_valid_connections(const LayerShape& shape) {
    return shape.layer_size(0) + shape.layer_count() - 2;
}

namespace {

int random_weight(Rng& rng) { return kWeightValues[rng.below(kWeightValues.size())]; }

// Routes every input to the output. Inputs are handled in order; each walk
// picks a uniformly random node per layer and stops as soon as it lands on a
// node that already reaches the output. When the budget left could not pay
// for one more hop plus one edge per pending input, the walk is forced onto
// an already-routed node.
void route_inputs(NetworkGenome& genome, int budget, Rng& rng) {
    const LayerShape& shape = genome.shape();
    std::vector<char> routed(static_cast<std::size_t>(genome.node_count()), 0);
    routed[shape.output_node()] = 1;
    int used = 0;
    const int inputs = shape.layer_size(0);
    for (int input = 0; input < inputs; ++input) {
        const int pending = inputs - input - 1;
        std::vector<NodeId> path{input};
        NodeId current = input;
        for (int layer = 1; layer < shape.layer_count(); ++layer) {
            const bool last = layer == shape.layer_count() - 1;
            std::vector<NodeId> options;
            const bool can_explore = used + 2 + pending <= budget;
            for (int j = 0; j < shape.layer_size(layer); ++j) {
                const NodeId node = shape.first_node(layer) + j;
                if (can_explore || routed[node]) options.push_back(node);
            }
            const NodeId next = options[rng.below(options.size())];
            genome.set_connection(current, next, random_weight(rng));
            ++used;
            path.push_back(next);
            current = next;
            if (routed[next] || last) break;
        }
        for (NodeId node : path) routed[node] = 1;
    }
}

}  // namespace

NetworkGenome random_genome(const LayerShape& shape, int conn_count, bool require_valid, Rng& rng) {
    if (conn_count < 0 || conn_count > shape.slot_count()) {
        throw std::invalid_argument("connection count " + std::to_string(conn_count) + " outside [0, " +
                                    std::to_string(shape.slot_count()) + "]");
    }
    if (require_valid && conn_count < min_valid_connections(shape)) {
        throw std::invalid_argument("a valid network needs at least " +
                                    std::to_string(min_valid_connections(shape)) + " connections");
    }
    NetworkGenome genome(shape);
    if (require_valid) route_inputs(genome, conn_count, rng);

    std::vector<int> free_slots;
    for (int s = 0; s < shape.slot_count(); ++s) {
        if (genome.slot_weight(s) == 0) free_slots.push_back(s);
    }
    // Partial Fisher-Yates over the unused slots.
    const int missing = conn_count - genome.connection_count();
    for (int k = 0; k < missing; ++k) {
        const auto pick = k + static_cast<int>(rng.below(free_slots.size() - k));
        std::swap(free_slots[k], free_slots[pick]);
        genome.set_slot_weight(free_slots[k], random_weight(rng));
    }
    for (NodeId node = shape.layer_size(0); node < shape.node_count(); ++node) {
        genome.set_bias(node, static_cast<int>(rng.between(kMinBias, kMaxBias)));
    }
    return genome;
}

nlohmann::json to_json(const NetworkGenome& genome) {
    nlohmann::json doc;
    doc["shape"] = genome.shape().sizes();
    auto conns = nlohmann::json::array();
    for (const auto& c : genome.connections()) conns.push_back({c.from, c.to, c.weight});
    doc["connections"] = std::move(conns);
    auto biases = nlohmann::json::object();
    for (NodeId node = genome.shape().layer_size(0); node < genome.node_count(); ++node) {
        biases[std::to_string(node)] = genome.bias(node);
    }
    doc["biases"] = std::move(biases);
    return doc;
}

NetworkGenome genome_from_json(const nlohmann::json& doc) {
    if (!doc.is_object() || !doc.contains("shape") || !doc.contains("connections")) {
        throw GenomeError("genome document needs 'shape' and 'connections'");
    }
    NetworkGenome genome{LayerShape(doc.at("shape").get<std::vector<int>>())};
    for (const auto& entry : doc.at("connections")) {
        if (!entry.is_array() || entry.size() != 3) throw GenomeError("connection must be [from, to, weight]");
        const auto from = entry[0].get<NodeId>();
        const auto to = entry[1].get<NodeId>();
        const int w = entry[2].get<int>();
        if (!is_valid_weight(w)) throw GenomeError("weight out of range");
        if (genome.slot_of(from, to) < 0) throw GenomeError("non-consecutive layers");
        if (genome.connected(from, to)) throw GenomeError("duplicate edge");
        genome.set_connection(from, to, w);
    }
    if (doc.contains("biases")) {
        for (const auto& [key, value] : doc.at("biases").items()) {
            NodeId node = 0;
            try {
                node = std::stoi(key);
            } catch (const std::exception&) {
                throw GenomeError("bias key '" + key + "' is not a node id");
            }
            genome.set_bias(node, value.get<int>());
        }
    }
    return genome;
}

void save_genome(const NetworkGenome& genome, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << to_json(genome).dump(1) << '\n';
}

NetworkGenome load_genome(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw GenomeError(std::string("malformed genome JSON: ") + e.what());
    }
    return genome_from_json(doc);
}

}  // namespace hierevo
