#pragma once

#include <cstdint>
#include <vector>

#include "hierevo/config_error.hpp"
#include "hierevo/metrics.hpp"

namespace hierevo {

struct SampleRecord {
    int connections = 0;
    double cost = 0.0;
    double hierarchy = 0.0;
    double modularity = 0.0;
};

struct SamplingConfig {
    std::vector<int> shape;  // empty = 8\4\4\2\1
    int per_count = 20000;
    int min_connections = 11;
    int max_connections = 58;
    MetricsOptions metrics;
    std::uint64_t seed = 1;

    LayerShape layer_shape() const;
    void validate() const;
};

/// Random valid networks at every connection count in range; records are
/// ordered by count, then draw. Each count uses its own derived stream.
std::vector<SampleRecord> sample_networks(const SamplingConfig& config, int workers = 1);

}  // namespace hierevo
