#include "hierevo/evolution.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <numeric>

#include "hierevo/parallel.hpp"

namespace hierevo {

std::string_view treatment_name(Treatment t) {
    switch (t) {
        case Treatment::PA: return "PA";
        case Treatment::PCC: return "PCC";
        case Treatment::PCCNonMod: return "PCC-NonMod";
    }
    return "?";
}

Treatment parse_treatment(std::string_view text) {
    std::string key;
    for (char c : text) {
        if (c != '&') key += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    if (key == "pa") return Treatment::PA;
    if (key == "pcc") return Treatment::PCC;
    if (key == "pcc-nonmod") return Treatment::PCCNonMod;
    throw ConfigError("treatment", "unknown treatment '" + std::string(text) + "'");
}

LayerShape EvolutionConfig::layer_shape() const {
    if (!shape.empty()) return LayerShape(shape);
    return LogicProblem::by_name(problem).default_shape();
}

void EvolutionConfig::validate() const {
    try {
        LogicProblem::by_name(problem);
    } catch (const std::invalid_argument& e) {
        throw ConfigError("problem", e.what());
    }
    LayerShape resolved = LayerShape::standard();
    try {
        resolved = layer_shape();
    } catch (const std::invalid_argument& e) {
        throw ConfigError("shape", e.what());
    }
    if (pop_size < 2 || pop_size % 2 != 0) throw ConfigError("pop_size", "must be an even number >= 2");
    if (generations < 0) throw ConfigError("generations", "must be >= 0");
    if (!(cost_probability >= 0.0 && cost_probability <= 1.0)) {
        throw ConfigError("cost_probability", "must lie in [0, 1]");
    }
    auto rate = [](const char* key, double v) {
        if (!(v >= 0.0 && v <= 1.0)) throw ConfigError(key, "must lie in [0, 1]");
    };
    rate("add_conn_rate", rates.add_connection);
    rate("remove_conn_rate", rates.remove_connection);
    rate("bias_mutation_rate", rates.bias_per_node);
    if (!(rates.weight_scale >= 0.0)) throw ConfigError("weight_mutation_scale", "must be >= 0");
    if (init_conn_min < 0) throw ConfigError("init_conn_min", "must be >= 0");
    if (init_conn_max < init_conn_min) throw ConfigError("init_conn_max", "must be >= init_conn_min");
    if (init_require_valid && init_conn_min < min_valid_connections(resolved)) {
        throw ConfigError("init_conn_min", "valid initial networks need at least " +
                                               std::to_string(min_valid_connections(resolved)) + " connections");
    }
    if (!(lambda > 0.0)) throw ConfigError("lambda", "must be > 0");
}

NetworkGenome mutate(const NetworkGenome& parent, const MutationRates& rates, Rng& rng, MutationLog* log) {
    NetworkGenome child = parent;
    MutationLog local;
    if (rng.bernoulli(rates.add_connection)) {
        std::vector<int> free_slots;
        for (int s = 0; s < child.slot_count(); ++s) {
            if (child.slot_weight(s) == 0) free_slots.push_back(s);
        }
        if (!free_slots.empty()) {
            const int slot = free_slots[rng.below(free_slots.size())];
            child.set_slot_weight(slot, kWeightValues[rng.below(kWeightValues.size())]);
            ++local.added;
        }
    }
    if (rng.bernoulli(rates.remove_connection) && child.connection_count() > 0) {
        std::vector<int> used;
        for (int s = 0; s < child.slot_count(); ++s) {
            if (child.slot_weight(s) != 0) used.push_back(s);
        }
        child.set_slot_weight(used[rng.below(used.size())], 0);
        ++local.removed;
    }
    const LayerShape& shape = child.shape();
    for (NodeId node = shape.layer_size(0); node < shape.node_count(); ++node) {
        if (!rng.bernoulli(rates.bias_per_node)) continue;
        ++local.bias_attempts;
        const int next = child.bias(node) + (rng.coin() ? 1 : -1);
        if (is_valid_bias(next)) child.set_bias(node, next);
    }
    const int n = child.connection_count();
    if (n > 0) {
        const double p = rates.weight_scale / n;
        for (int s = 0; s < child.slot_count(); ++s) {
            const int w = child.slot_weight(s);
            if (w == 0 || !rng.bernoulli(p)) continue;
            ++local.weight_attempts;
            const int next = w + (rng.coin() ? 1 : -1);
            if (is_valid_weight(next)) child.set_slot_weight(s, next);
        }
    }
    if (log) *log = local;
    return child;
}

double behavioral_diversity(std::size_t index, std::span<const PatternVector> behaviors) {
    if (behaviors.size() < 2) return 0.0;
    std::size_t total = 0;
    for (std::size_t j = 0; j < behaviors.size(); ++j) {
        if (j != index) total += (behaviors[index] ^ behaviors[j]).count();
    }
    return static_cast<double>(total) / (static_cast<double>(kPatternCount) * (behaviors.size() - 1));
}

std::vector<double> behavioral_diversity(std::span<const PatternVector> behaviors) {
    const std::size_t n = behaviors.size();
    std::vector<double> out(n, 0.0);
    if (n < 2) return out;
    std::vector<std::size_t> totals(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const std::size_t d = (behaviors[i] ^ behaviors[j]).count();
            totals[i] += d;
            totals[j] += d;
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = static_cast<double>(totals[i]) / (static_cast<double>(kPatternCount) * (n - 1));
    }
    return out;
}

bool dominates(const ObjectiveVector& a, const ObjectiveVector& b, const ObjectiveMask& active) {
    bool strictly = false;
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (!active[k]) continue;
        if (a[k] < b[k]) return false;
        if (a[k] > b[k]) strictly = true;
    }
    return strictly;
}

namespace {

// relation(i, j) returns +1 if i dominates j, -1 if j dominates i, else 0.
// Called once per unordered pair, i < j, in lexicographic order.
template <typename Relation>
std::vector<std::vector<int>> sort_fronts(int n, Relation&& relation) {
    std::vector<std::vector<int>> dominated(static_cast<std::size_t>(n));
    std::vector<int> counts(static_cast<std::size_t>(n), 0);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const int r = relation(i, j);
            if (r > 0) {
                dominated[i].push_back(j);
                ++counts[j];
            } else if (r < 0) {
                dominated[j].push_back(i);
                ++counts[i];
            }
        }
    }
    std::vector<std::vector<int>> fronts;
    std::vector<int> current;
    for (int i = 0; i < n; ++i) {
        if (counts[i] == 0) current.push_back(i);
    }
    while (!current.empty()) {
        std::vector<int> next;
        for (int i : current) {
            for (int j : dominated[i]) {
                if (--counts[j] == 0) next.push_back(j);
            }
        }
        std::sort(next.begin(), next.end());
        fronts.push_back(std::move(current));
        current = std::move(next);
    }
    return fronts;
}

}  // namespace

std::vector<std::vector<int>> nondominated_sort(std::span<const ObjectiveVector> objectives,
                                                const ObjectiveMask& active) {
    return sort_fronts(static_cast<int>(objectives.size()), [&](int i, int j) {
        if (dominates(objectives[i], objectives[j], active)) return 1;
        if (dominates(objectives[j], objectives[i], active)) return -1;
        return 0;
    });
}

std::vector<std::vector<int>> nondominated_sort(std::span<const ObjectiveVector> objectives,
                                                std::span<const double> inclusion, Rng& rng) {
    ObjectiveMask mask(inclusion.size());
    return sort_fronts(static_cast<int>(objectives.size()), [&](int i, int j) {
        for (std::size_t k = 0; k < inclusion.size(); ++k) {
            mask[k] = inclusion[k] >= 1.0 || (inclusion[k] > 0.0 && rng.bernoulli(inclusion[k]));
        }
        if (dominates(objectives[i], objectives[j], mask)) return 1;
        if (dominates(objectives[j], objectives[i], mask)) return -1;
        return 0;
    });
}

std::vector<double> crowding_distance(std::span<const ObjectiveVector> objectives, std::span<const int> front,
                                      const ObjectiveMask& active) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    const std::size_t n = front.size();
    std::vector<double> distance(n, 0.0);
    if (n <= 2) {
        std::fill(distance.begin(), distance.end(), inf);
        return distance;
    }
    std::vector<std::size_t> order(n);
    for (std::size_t k = 0; k < active.size(); ++k) {
        if (!active[k]) continue;
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return objectives[front[a]][k] < objectives[front[b]][k];
        });
        const double lo = objectives[front[order.front()]][k];
        const double hi = objectives[front[order.back()]][k];
        distance[order.front()] = inf;
        distance[order.back()] = inf;
        if (hi == lo) continue;
        for (std::size_t r = 1; r + 1 < n; ++r) {
            const double gap = objectives[front[order[r + 1]]][k] - objectives[front[order[r - 1]]][k];
            distance[order[r]] += gap / (hi - lo);
        }
    }
    return distance;
}

Evaluator::Evaluator(const EvolutionConfig& config)
    : problem_(LogicProblem::by_name(config.problem)),
      treatment_(config.treatment),
      lambda_(config.lambda),
      metrics_(config.metrics) {
    // Order: performance, [-cost], [-modularity], diversity.
    inclusion_.push_back(1.0);
    if (treatment_ != Treatment::PA) inclusion_.push_back(config.cost_probability);
    if (treatment_ == Treatment::PCCNonMod) inclusion_.push_back(1.0);
    inclusion_.push_back(1.0);
}

Individual Evaluator::evaluate(NetworkGenome genome) const {
    Individual ind{std::move(genome)};
    const auto eval = evaluate_all(ind.genome, problem_, lambda_);
    ind.performance = eval.performance;
    ind.behavior = eval.behavior;
    if (treatment_ != Treatment::PA) ind.cost = connection_cost(ind.genome);
    if (treatment_ == Treatment::PCCNonMod) ind.modularity = network_modularity(ind.genome, metrics_);
    return ind;
}

ObjectiveVector Evaluator::objectives(const Individual& ind) const {
    ObjectiveVector v{ind.performance};
    if (treatment_ != Treatment::PA) v.push_back(-ind.cost);
    if (treatment_ == Treatment::PCCNonMod) v.push_back(-ind.modularity);
    v.push_back(ind.diversity);
    return v;
}

namespace {

// Recomputes diversity over `pool`, ranks it, and returns the indices of the
// `keep` survivors (or everyone when keep >= pool size) in selection order.
std::vector<int> rank_pool(std::vector<Individual>& pool, std::size_t keep, const EvolutionConfig& config,
                           const Evaluator& evaluator, Rng& rng) {
    // Drawn every generation, whatever the treatment, so the random stream
    // does not depend on whether a cost objective exists.
    const bool cost_drawn = rng.bernoulli(config.cost_probability);

    std::vector<PatternVector> behaviors;
    behaviors.reserve(pool.size());
    for (const auto& ind : pool) behaviors.push_back(ind.behavior);
    const auto diversity = behavioral_diversity(behaviors);
    std::vector<ObjectiveVector> objectives;
    objectives.reserve(pool.size());
    for (std::size_t i = 0; i < pool.size(); ++i) {
        pool[i].diversity = diversity[i];
        objectives.push_back(evaluator.objectives(pool[i]));
    }

    const auto& inclusion = evaluator.inclusion();
    ObjectiveMask mask(inclusion.size());
    for (std::size_t k = 0; k < inclusion.size(); ++k) {
        mask[k] = inclusion[k] >= 1.0 || (inclusion[k] > 0.0 && cost_drawn);
    }
    std::vector<std::vector<int>> fronts;
    if (config.granularity == PnsgaGranularity::Comparison) {
        fronts = nondominated_sort(objectives, inclusion, rng);
        for (std::size_t k = 0; k < inclusion.size(); ++k) mask[k] = inclusion[k] > 0.0;
    } else {
        fronts = nondominated_sort(objectives, mask);
    }

    std::vector<int> chosen;
    chosen.reserve(std::min(keep, pool.size()));
    for (std::size_t f = 0; f < fronts.size(); ++f) {
        const auto crowd = crowding_distance(objectives, fronts[f], mask);
        std::vector<std::size_t> order(fronts[f].size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return crowd[a] > crowd[b]; });
        for (std::size_t r : order) {
            auto& ind = pool[fronts[f][r]];
            ind.rank = static_cast<int>(f);
            ind.crowding = crowd[r];
            if (chosen.size() < keep) chosen.push_back(fronts[f][r]);
        }
    }
    return chosen;
}

std::vector<Individual> evaluate_batch(std::vector<NetworkGenome> genomes, const Evaluator& evaluator,
                                       int workers) {
    std::vector<Individual> out(genomes.size(), Individual{NetworkGenome(genomes.empty()
                                                                             ? LayerShape::standard()
                                                                             : genomes.front().shape())});
    parallel_for(genomes.size(), workers, [&](std::size_t i) { out[i] = evaluator.evaluate(std::move(genomes[i])); });
    return out;
}

Population finish_initial(std::vector<NetworkGenome> genomes, const EvolutionConfig& config,
                          const Evaluator& evaluator, Rng& rng, int workers) {
    Population pop{evaluate_batch(std::move(genomes), evaluator, workers)};
    rank_pool(pop.members, pop.members.size(), config, evaluator, rng);
    return pop;
}

}  // namespace

Population initial_population(const EvolutionConfig& config, const Evaluator& evaluator, Rng& rng, int workers) {
    const LayerShape shape = config.layer_shape();
    std::vector<NetworkGenome> genomes;
    genomes.reserve(config.pop_size);
    for (int i = 0; i < config.pop_size; ++i) {
        const auto drawn = static_cast<int>(rng.between(config.init_conn_min, config.init_conn_max));
        genomes.push_back(random_genome(shape, std::min(drawn, shape.slot_count()), config.init_require_valid, rng));
    }
    return finish_initial(std::move(genomes), config, evaluator, rng, workers);
}

Population seeded_population(const NetworkGenome& seed, bool mutate_copies, const EvolutionConfig& config,
                             const Evaluator& evaluator, Rng& rng, int workers) {
    std::vector<NetworkGenome> genomes;
    genomes.reserve(config.pop_size);
    for (int i = 0; i < config.pop_size; ++i) {
        genomes.push_back(mutate_copies ? mutate(seed, config.rates, rng) : seed);
    }
    return finish_initial(std::move(genomes), config, evaluator, rng, workers);
}

void step_generation(Population& population, const EvolutionConfig& config, const Evaluator& evaluator, Rng& rng,
                     int workers) {
    auto& parents = population.members;
    const std::size_t n = parents.size();

    std::vector<NetworkGenome> children;
    children.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t a = rng.below(n);
        std::size_t b = rng.below(n - 1);
        if (b >= a) ++b;
        const Individual& x = parents[a];
        const Individual& y = parents[b];
        const Individual* winner;
        if (x.rank != y.rank) {
            winner = x.rank < y.rank ? &x : &y;
        } else if (x.crowding != y.crowding) {
            winner = x.crowding > y.crowding ? &x : &y;
        } else {
            winner = rng.coin() ? &x : &y;
        }
        children.push_back(mutate(winner->genome, config.rates, rng));
    }

    auto offspring = evaluate_batch(std::move(children), evaluator, workers);
    std::vector<Individual> pool = std::move(parents);
    pool.reserve(2 * n);
    for (auto& child : offspring) pool.push_back(std::move(child));

    const auto survivors = rank_pool(pool, n, config, evaluator, rng);
    std::vector<Individual> next;
    next.reserve(n);
    for (int idx : survivors) next.push_back(std::move(pool[idx]));
    population.members = std::move(next);
}

const Individual& best_individual(const Population& population, Rng& rng) {
    double top = -1.0;
    for (const auto& ind : population.members) top = std::max(top, ind.performance);
    std::vector<std::size_t> tied;
    for (std::size_t i = 0; i < population.members.size(); ++i) {
        if (population.members[i].performance == top) tied.push_back(i);
    }
    return population.members[tied[tied.size() == 1 ? 0 : rng.below(tied.size())]];
}

GenerationStats describe(const NetworkGenome& genome, int generation, const LogicProblem& problem,
                         const EvolutionConfig& config) {
    GenerationStats s;
    s.generation = generation;
    const auto eval = evaluate_all(genome, problem, config.lambda);
    s.best_performance = eval.performance;
    s.hierarchy = network_hierarchy(genome, config.metrics);
    s.modularity = network_modularity(genome, config.metrics);
    s.cost = connection_cost(genome);
    s.subproblems = solved_subproblems(genome, problem, eval.trace, config.metrics.include_root_subproblem).solved;
    return s;
}

TrialResult run_trial(const EvolutionConfig& config, int workers, const std::optional<NetworkGenome>& seed_genome,
                      bool mutate_seed) {
    config.validate();
    const Evaluator evaluator(config);
    Rng rng(config.seed);
    Rng report_rng(derive_seed(config.seed, "best-tie", 0));

    Population pop = seed_genome ? seeded_population(*seed_genome, mutate_seed, config, evaluator, rng, workers)
                                 : initial_population(config, evaluator, rng, workers);

    TrialResult result{.initial = {}, .series = {}, .best = pop.members.front().genome};
    const Individual* best = &best_individual(pop, report_rng);
    result.initial = describe(best->genome, 0, evaluator.problem(), config);
    result.best = best->genome;
    result.final_stats = result.initial;
    if (best->performance == 1.0) result.solved_generation = 0;

    for (int g = 1; g <= config.generations; ++g) {
        if (config.stop_on_perfect && result.solved_generation >= 0) break;
        step_generation(pop, config, evaluator, rng, workers);
        best = &best_individual(pop, report_rng);
        result.series.push_back(describe(best->genome, g, evaluator.problem(), config));
        result.best = best->genome;
        result.final_stats = result.series.back();
        if (best->performance == 1.0 && result.solved_generation < 0) result.solved_generation = g;
    }
    return result;
}

}  // namespace hierevo
