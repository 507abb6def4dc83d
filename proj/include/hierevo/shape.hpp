#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace hierevo {

/// Global node index: inputs first, then each layer left to right.
using NodeId = std::int32_t;

inline constexpr int kInputCount = 8;
inline constexpr int kPatternCount = 1 << kInputCount;

/// Node counts per layer of a strictly layered feedforward network.
/// The first layer holds the 8 inputs and the last the single output.
class LayerShape {
public:
    /// Throws std::invalid_argument unless sizes = {8, ..., 1} with every
    /// entry >= 1 and at least one hidden layer.
    explicit LayerShape(std::vector<int> sizes);

    /// 8\4\4\2\1
    static LayerShape standard();
    /// 8\4\4\4\2\1, one extra hidden layer for the deeper problem.
    static LayerShape deep();
    /// Parses "8,4,4,2,1" or "8\4\4\2\1".
    static LayerShape parse(const std::string& text);

    const std::vector<int>& sizes() const { return sizes_; }
    int layer_count() const { return static_cast<int>(sizes_.size()); }
    int layer_size(int layer) const { return sizes_[layer]; }
    int node_count() const { return node_count_; }
    NodeId first_node(int layer) const { return layer_offset_[layer]; }
    int layer_of(NodeId node) const { return node_layer_[node]; }
    NodeId output_node() const { return node_count_ - 1; }

    /// Number of possible connections (58 for 8\4\4\2\1).
    int slot_count() const { return slot_count_; }
    /// First slot of the block joining layer t to layer t + 1.
    int slot_offset(int transition) const { return slot_offset_[transition]; }

    std::string to_string() const;

    bool operator==(const LayerShape& other) const { return sizes_ == other.sizes_; }

private:
    std::vector<int> sizes_;
    std::vector<NodeId> layer_offset_;
    std::vector<int> node_layer_;
    std::vector<int> slot_offset_;
    int node_count_ = 0;
    int slot_count_ = 0;
};

}  // namespace hierevo
