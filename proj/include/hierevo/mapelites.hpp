#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hierevo/evolution.hpp"

namespace hierevo {

struct Cell {
    int row = 0;  // modularity bin
    int col = 0;  // hierarchy bin
    bool operator==(const Cell&) const = default;
};

/// floor(feature / bin_width), clamped into [0, bins - 1].
Cell feature_bin(double modularity, double hierarchy, double bin_width = 0.05);

struct Elite {
    NetworkGenome genome;
    double performance = 0.0;
    double modularity = 0.0;
    double hierarchy = 0.0;
};

class EliteArchive {
public:
    explicit EliteArchive(double bin_width = 0.05);

    int bins() const { return bins_; }
    double bin_width() const { return bin_width_; }
    const std::optional<Elite>& at(Cell c) const { return grid_[index(c)]; }
    std::size_t occupied() const { return occupied_cells_.size(); }
    /// Occupied cells in order of first occupation.
    const std::vector<Cell>& occupied_cells() const { return occupied_cells_; }

    /// Stores `candidate` in its cell if the cell is empty or the candidate
    /// performs strictly better. Returns whether it was stored.
    bool offer(Elite candidate);

private:
    std::size_t index(Cell c) const { return static_cast<std::size_t>(c.row) * bins_ + c.col; }

    double bin_width_;
    int bins_;
    std::vector<std::optional<Elite>> grid_;
    std::vector<Cell> occupied_cells_;
};

struct MapElitesConfig {
    std::string problem = "and-xor-and";
    std::vector<int> shape;
    long long evaluations = 200000;
    int initial_batch = 1000;
    /// Offspring produced per iteration; the sequential algorithm is batch 1.
    int batch = 1;
    double bin_width = 0.05;
    int init_conn_min = 20;
    int init_conn_max = 100;
    MutationRates rates;
    double lambda = kDefaultLambda;
    MetricsOptions metrics;
    std::uint64_t seed = 1;

    void validate() const;
};

Elite evaluate_elite(NetworkGenome genome, const LogicProblem& problem, const MapElitesConfig& config);

/// Observer called after every evaluation with the running count.
using ArchiveObserver = std::function<void(long long evaluations, const EliteArchive&)>;

EliteArchive run_map_elites(const MapElitesConfig& config, int workers = 1, const ArchiveObserver& observer = {});

}  // namespace hierevo
