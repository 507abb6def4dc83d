#include "hierevo/shape.hpp"

#include <charconv>
#include <stdexcept>

namespace hierevo {

LayerShape::LayerShape(std::vector<int> sizes) : sizes_(std::move(sizes)) {
    if (sizes_.size() < 3) throw std::invalid_argument("layer shape needs at least one hidden layer");
    if (sizes_.front() != kInputCount) throw std::invalid_argument("layer shape must start with 8 inputs");
    if (sizes_.back() != 1) throw std::invalid_argument("layer shape must end with a single output");
    for (int s : sizes_) {
        if (s < 1) throw std::invalid_argument("layer sizes must be >= 1");
    }
    for (int layer = 0; layer < layer_count(); ++layer) {
        layer_offset_.push_back(node_count_);
        for (int i = 0; i < sizes_[layer]; ++i) node_layer_.push_back(layer);
        node_count_ += sizes_[layer];
    }
    for (int t = 0; t + 1 < layer_count(); ++t) {
        slot_offset_.push_back(slot_count_);
        slot_count_ += sizes_[t] * sizes_[t + 1];
    }
    slot_offset_.push_back(slot_count_);
}

LayerShape LayerShape::standard() { return LayerShape({8, 4, 4, 2, 1}); }

LayerShape LayerShape::deep() { return LayerShape({8, 4, 4, 4, 2, 1}); }

LayerShape LayerShape::parse(const std::string& text) {
    std::vector<int> sizes;
    const char* p = text.data();
    const char* end = p + text.size();
    while (p < end) {
        while (p < end && (*p == ',' || *p == '\\' || *p == ' ')) ++p;
        if (p == end) break;
        int value = 0;
        auto [next, ec] = std::from_chars(p, end, value);
        if (ec != std::errc()) throw std::invalid_argument("malformed layer shape '" + text + "'");
        sizes.push_back(value);
        p = next;
    }
    return LayerShape(std::move(sizes));
}

std::string LayerShape::to_string() const {
    std::string out;
    for (std::size_t i = 0; i < sizes_.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(sizes_[i]);
    }
    return out;
}

}  // namespace hierevo
