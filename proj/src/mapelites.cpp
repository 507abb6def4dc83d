#include "hierevo/mapelites.hpp"

#include <algorithm>
#include <cmath>

#include "hierevo/parallel.hpp"

namespace hierevo {

namespace {

int bin_count(double width) { return std::max(1, static_cast<int>(std::ceil(1.0 / width - 1e-9))); }

int clamp_bin(double value, double width, int bins) {
    if (!(value > 0.0)) return 0;
    return std::min(bins - 1, static_cast<int>(std::floor(value / width + 1e-9)));
}

}  // namespace

Cell feature_bin(double modularity, double hierarchy, double bin_width) {
    const int bins = bin_count(bin_width);
    return {clamp_bin(modularity, bin_width, bins), clamp_bin(hierarchy, bin_width, bins)};
}

EliteArchive::EliteArchive(double bin_width)
    : bin_width_(bin_width), bins_(bin_count(bin_width)), grid_(static_cast<std::size_t>(bins_) * bins_) {}

bool EliteArchive::offer(Elite candidate) {
    const Cell c = feature_bin(candidate.modularity, candidate.hierarchy, bin_width_);
    auto& slot = grid_[index(c)];
    if (slot && candidate.performance <= slot->performance) return false;
    if (!slot) occupied_cells_.push_back(c);
    slot = std::move(candidate);
    return true;
}

void MapElitesConfig::validate() const {
    try {
        LogicProblem::by_name(problem);
    } catch (const std::invalid_argument& e) {
        throw ConfigError("problem", e.what());
    }
    if (!shape.empty()) {
        try {
            static_cast<void>(LayerShape(shape));
        } catch (const std::invalid_argument& e) {
            throw ConfigError("shape", e.what());
        }
    }
    if (initial_batch < 1) throw ConfigError("initial_batch", "must be >= 1");
    if (evaluations < initial_batch) throw ConfigError("evaluations", "must be >= initial_batch");
    if (batch < 1) throw ConfigError("batch", "must be >= 1");
    if (!(bin_width > 0.0 && bin_width <= 1.0)) throw ConfigError("bin_width", "must lie in (0, 1]");
    if (init_conn_min < 0) throw ConfigError("init_conn_min", "must be >= 0");
    if (init_conn_max < init_conn_min) throw ConfigError("init_conn_max", "must be >= init_conn_min");
}

Elite evaluate_elite(NetworkGenome genome, const LogicProblem& problem, const MapElitesConfig& config) {
    Elite e{std::move(genome)};
    e.performance = evaluate_all(e.genome, problem, config.lambda).performance;
    e.modularity = network_modularity(e.genome, config.metrics);
    e.hierarchy = network_hierarchy(e.genome, config.metrics);
    return e;
}

EliteArchive run_map_elites(const MapElitesConfig& config, int workers, const ArchiveObserver& observer) {
    config.validate();
    const LogicProblem problem = LogicProblem::by_name(config.problem);
    const LayerShape shape = config.shape.empty() ? problem.default_shape() : LayerShape(config.shape);
    Rng rng(config.seed);
    EliteArchive archive(config.bin_width);
    long long done = 0;

    auto evaluate_batch = [&](std::vector<NetworkGenome> genomes) {
        std::vector<std::optional<Elite>> out(genomes.size());
        parallel_for(genomes.size(), workers,
                     [&](std::size_t i) { out[i] = evaluate_elite(std::move(genomes[i]), problem, config); });
        for (auto& e : out) {
            archive.offer(std::move(*e));
            ++done;
            if (observer) observer(done, archive);
        }
    };

    std::vector<NetworkGenome> initial;
    initial.reserve(config.initial_batch);
    for (int i = 0; i < config.initial_batch; ++i) {
        const auto drawn = static_cast<int>(rng.between(config.init_conn_min, config.init_conn_max));
        initial.push_back(random_genome(shape, std::min(drawn, shape.slot_count()), false, rng));
    }
    evaluate_batch(std::move(initial));

    while (done < config.evaluations) {
        const auto n = static_cast<int>(std::min<long long>(config.batch, config.evaluations - done));
        std::vector<NetworkGenome> children;
        children.reserve(n);
        const auto& cells = archive.occupied_cells();
        for (int i = 0; i < n; ++i) {
            const Cell c = cells[rng.below(cells.size())];
            children.push_back(mutate(archive.at(c)->genome, config.rates, rng));
        }
        evaluate_batch(std::move(children));
    }
    return archive;
}

}  // namespace hierevo
