#include "hierevo/sampling.hpp"

#include "hierevo/evolution.hpp"
#include "hierevo/parallel.hpp"

namespace hierevo {

LayerShape SamplingConfig::layer_shape() const { return shape.empty() ? LayerShape::standard() : LayerShape(shape); }

void SamplingConfig::validate() const {
    LayerShape resolved = LayerShape::standard();
    try {
        resolved = layer_shape();
    } catch (const std::invalid_argument& e) {
        throw ConfigError("shape", e.what());
    }
    if (per_count < 1) throw ConfigError("per_count", "must be >= 1");
    if (min_connections < min_valid_connections(resolved)) {
        throw ConfigError("min_connections",
                          "valid networks need at least " + std::to_string(min_valid_connections(resolved)));
    }
    if (max_connections > resolved.slot_count()) {
        throw ConfigError("max_connections", "shape has only " + std::to_string(resolved.slot_count()) + " slots");
    }
    if (max_connections < min_connections) throw ConfigError("max_connections", "must be >= min_connections");
}

std::vector<SampleRecord> sample_networks(const SamplingConfig& config, int workers) {
    config.validate();
    const LayerShape shape = config.layer_shape();
    const int counts = config.max_connections - config.min_connections + 1;
    std::vector<std::vector<SampleRecord>> per_count(static_cast<std::size_t>(counts));
    parallel_for(per_count.size(), workers, [&](std::size_t k) {
        const int count = config.min_connections + static_cast<int>(k);
        Rng rng(derive_seed(config.seed, "sample", static_cast<std::uint64_t>(count)));
        auto& out = per_count[k];
        out.reserve(config.per_count);
        for (int i = 0; i < config.per_count; ++i) {
            const auto g = random_genome(shape, count, true, rng);
            out.push_back({count, connection_cost(g), network_hierarchy(g, config.metrics),
                           network_modularity(g, config.metrics)});
        }
    });
    std::vector<SampleRecord> records;
    records.reserve(static_cast<std::size_t>(counts) * config.per_count);
    for (auto& block : per_count) records.insert(records.end(), block.begin(), block.end());
    return records;
}

}  // namespace hierevo
