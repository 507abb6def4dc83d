#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hierevo/config_error.hpp"
#include "hierevo/metrics.hpp"
#include "hierevo/network.hpp"
#include "hierevo/problems.hpp"
#include "hierevo/rng.hpp"

namespace hierevo {

/// Selection pressures. PA: performance + diversity. PCC adds low connection
/// cost; PCC-NonMod further adds low modularity.
enum class Treatment { PA, PCC, PCCNonMod };

std::string_view treatment_name(Treatment t);
/// Accepts PA, PCC, P&CC, PCC-NonMod, P&CC-NonMod (any case).
Treatment parse_treatment(std::string_view text);

/// When the probabilistic cost objective is drawn: once per generation, or
/// independently for every pairwise dominance comparison.
enum class PnsgaGranularity { Generation, Comparison };

struct MutationRates {
    double add_connection = 0.20;
    double remove_connection = 0.20;
    double bias_per_node = 0.00067;
    /// Per-connection weight mutation chance is weight_scale / n.
    double weight_scale = 2.0;
};

struct EvolutionConfig {
    Treatment treatment = Treatment::PA;
    std::string problem = "and-xor-and";
    /// Empty means the problem's default shape.
    std::vector<int> shape;
    int pop_size = 1000;
    int generations = 25000;
    double cost_probability = 1.0;
    PnsgaGranularity granularity = PnsgaGranularity::Generation;
    std::uint64_t seed = 1;
    MutationRates rates;
    int init_conn_min = 20;
    int init_conn_max = 100;
    bool init_require_valid = false;
    bool stop_on_perfect = false;
    double lambda = kDefaultLambda;
    MetricsOptions metrics;

    LayerShape layer_shape() const;
    /// Throws ConfigError naming the first bad key.
    void validate() const;
};

struct Individual {
    NetworkGenome genome;
    double performance = 0.0;
    double cost = 0.0;
    double modularity = 0.0;
    PatternVector behavior;
    double diversity = 0.0;
    int rank = 0;
    double crowding = 0.0;
};

/// Counts of what one mutate() call attempted.
struct MutationLog {
    int added = 0;
    int removed = 0;
    int bias_attempts = 0;
    int weight_attempts = 0;
};

/// Copy of `parent` after one round of mutation: maybe add a connection,
/// maybe remove one, then per-node bias steps and per-connection weight
/// steps of +-1. Steps leaving the legal value sets (or hitting weight 0)
/// are discarded.
NetworkGenome mutate(const NetworkGenome& parent, const MutationRates& rates, Rng& rng,
                     MutationLog* log = nullptr);

/// Mean Hamming distance / 256 from behaviors[index] to every other entry.
double behavioral_diversity(std::size_t index, std::span<const PatternVector> behaviors);
/// Same, for every entry at once.
std::vector<double> behavioral_diversity(std::span<const PatternVector> behaviors);

using ObjectiveVector = std::vector<double>;
/// Which objectives take part in a comparison.
using ObjectiveMask = std::vector<bool>;

/// a dominates b: >= on every active objective and > on at least one.
bool dominates(const ObjectiveVector& a, const ObjectiveVector& b, const ObjectiveMask& active);

/// Fast non-dominated sort; returns fronts of indices, best first.
std::vector<std::vector<int>> nondominated_sort(std::span<const ObjectiveVector> objectives,
                                                const ObjectiveMask& active);
/// Variant that redraws the mask for every pairwise comparison: objective k
/// is active with probability inclusion[k].
std::vector<std::vector<int>> nondominated_sort(std::span<const ObjectiveVector> objectives,
                                                std::span<const double> inclusion, Rng& rng);

/// NSGA-II crowding distance of each member of `front` (same order).
std::vector<double> crowding_distance(std::span<const ObjectiveVector> objectives, std::span<const int> front,
                                      const ObjectiveMask& active);

/// Problem and measurement settings shared by every evaluation in a run.
class Evaluator {
public:
    Evaluator(const EvolutionConfig& config);

    /// Fills performance, behavior and whichever of cost / modularity the
    /// treatment selects on.
    Individual evaluate(NetworkGenome genome) const;
    ObjectiveVector objectives(const Individual& ind) const;
    /// Inclusion probability per objective, in objectives() order.
    const std::vector<double>& inclusion() const { return inclusion_; }
    const LogicProblem& problem() const { return problem_; }

private:
    LogicProblem problem_;
    Treatment treatment_;
    double lambda_;
    MetricsOptions metrics_;
    std::vector<double> inclusion_;
};

struct Population {
    std::vector<Individual> members;
};

/// Random generation-0 population, evaluated and ranked.
Population initial_population(const EvolutionConfig& config, const Evaluator& evaluator, Rng& rng, int workers = 1);
/// Generation-0 population of pop_size copies of `seed`, each mutated once
/// (or left as clones).
Population seeded_population(const NetworkGenome& seed, bool mutate_copies, const EvolutionConfig& config,
                             const Evaluator& evaluator, Rng& rng, int workers = 1);

/// One generation: binary tournaments + mutation produce pop_size offspring,
/// which are evaluated in parallel; diversity is recomputed over the merged
/// pool and the best pop_size by (front, crowding) survive.
void step_generation(Population& population, const EvolutionConfig& config, const Evaluator& evaluator,
                     Rng& rng, int workers = 1);

struct GenerationStats {
    int generation = 0;
    double best_performance = 0.0;
    double hierarchy = 0.0;
    double modularity = 0.0;
    double cost = 0.0;
    int subproblems = 0;
};

struct TrialResult {
    GenerationStats initial;
    /// One row per completed generation, 1..G (fewer on early stop).
    std::vector<GenerationStats> series;
    NetworkGenome best{LayerShape::standard()};
    GenerationStats final_stats;
    /// First generation whose best network was perfect; -1 if never.
    int solved_generation = -1;
};

/// Highest-performing member; ties broken with `rng`.
const Individual& best_individual(const Population& population, Rng& rng);

GenerationStats describe(const NetworkGenome& genome, int generation, const LogicProblem& problem,
                         const EvolutionConfig& config);

/// Runs one trial. When `seed_genome` is given, generation 0 is built from
/// it with seeded_population.
TrialResult run_trial(const EvolutionConfig& config, int workers = 1,
                      const std::optional<NetworkGenome>& seed_genome = std::nullopt, bool mutate_seed = true);

}  // namespace hierevo
