#include "hierevo/experiments.hpp"

#include <algorithm>
#include <ostream>

#include <fmt/format.h>

#include "hierevo/parallel.hpp"

namespace hierevo {

std::uint64_t trial_seed(std::uint64_t master, Treatment treatment, int index) {
    return derive_seed(master, treatment_name(treatment), static_cast<std::uint64_t>(index));
}

namespace {

// Trials are independent, so spread them over workers when there are enough
// of them and give each trial the whole pool otherwise. Either way the
// results are the same.
std::vector<TrialResult> run_indexed(std::size_t count, int workers,
                                     const std::function<TrialResult(std::size_t, int)>& run) {
    std::vector<TrialResult> out(count);
    if (count >= static_cast<std::size_t>(std::max(workers, 1))) {
        parallel_for(count, workers, [&](std::size_t i) { out[i] = run(i, 1); });
    } else {
        for (std::size_t i = 0; i < count; ++i) out[i] = run(i, workers);
    }
    return out;
}

}  // namespace

std::vector<TrialResult> run_treatment(const EvolutionConfig& config, int trials, int workers) {
    config.validate();
    if (trials < 1) throw ConfigError("trials", "must be >= 1");
    return run_indexed(static_cast<std::size_t>(trials), workers, [&](std::size_t k, int inner) {
        EvolutionConfig c = config;
        c.seed = trial_seed(config.seed, config.treatment, static_cast<int>(k));
        return run_trial(c, inner);
    });
}

std::vector<TreatmentResults> run_treatment_comparison(const EvolutionConfig& config,
                                                       const std::vector<Treatment>& treatments, int trials,
                                                       int workers) {
    std::vector<TreatmentResults> out;
    for (Treatment t : treatments) {
        EvolutionConfig c = config;
        c.treatment = t;
        out.push_back({t, run_treatment(c, trials, workers)});
    }
    return out;
}

EvolvabilityPlan EvolvabilityPlan::builtin(const std::string& base, const std::string& target) {
    static const std::vector<std::pair<std::string, std::string>> known{
        {"and-xor-and", "and-equ-and"}, {"and-xor-and", "or-xor-and"}, {"or-xor-equ-equ", "and-equ-and"}};
    if (std::find(known.begin(), known.end(), std::pair{base, target}) == known.end()) {
        throw ConfigError("target_problem", "no built-in plan " + base + " -> " + target);
    }
    EvolvabilityPlan plan;
    plan.base_problem = base;
    plan.target_problem = target;
    return plan;
}

void EvolvabilityPlan::validate() const {
    for (const auto& [key, name] : {std::pair{"base_problem", base_problem}, std::pair{"target_problem", target_problem}}) {
        try {
            LogicProblem::by_name(name);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(key, e.what());
        }
    }
    if (base_problem == target_problem) throw ConfigError("target_problem", "must differ from base_problem");
    if (seeds_wanted < 1) throw ConfigError("seeds_wanted", "must be >= 1");
    if (runs_per_seed < 1) throw ConfigError("runs_per_seed", "must be >= 1");
    if (generation_cap < 0) throw ConfigError("generation_cap", "must be >= 0");
    if (trial_cap < 0) throw ConfigError("trial_cap", "must be >= 0");
}

EvolvabilityShortfall::EvolvabilityShortfall(int collected, int wanted, int trials)
    : std::runtime_error(fmt::format("collected {} of {} perfect base networks in {} trials (short by {})",
                                     collected, wanted, trials, wanted - collected)),
      collected_(collected),
      wanted_(wanted) {}

std::vector<Replicate> run_transfers(const EvolvabilityPlan& plan, const EvolutionConfig& config,
                                     const std::vector<NetworkGenome>& seeds, int workers) {
    plan.validate();
    EvolutionConfig target = config;
    target.problem = plan.target_problem;
    target.generations = plan.generation_cap;
    target.stop_on_perfect = true;
    target.validate();
    const auto runs = static_cast<std::size_t>(plan.runs_per_seed);
    const std::string label = fmt::format("transfer/{}", treatment_name(config.treatment));
    const auto results = run_indexed(seeds.size() * runs, workers, [&](std::size_t k, int inner) {
        EvolutionConfig c = target;
        c.seed = derive_seed(config.seed, label, k);
        return run_trial(c, inner, seeds[k / runs], plan.mutate_seed);
    });
    std::vector<Replicate> out;
    out.reserve(results.size());
    for (std::size_t k = 0; k < results.size(); ++k) {
        const int solved = results[k].solved_generation;
        out.push_back({static_cast<int>(k / runs), static_cast<int>(k % runs), solved < 0 ? plan.generation_cap : solved,
                       solved < 0});
    }
    return out;
}

EvolvabilityResult run_evolvability(const EvolvabilityPlan& plan, const EvolutionConfig& config, int workers) {
    plan.validate();
    EvolutionConfig base = config;
    base.problem = plan.base_problem;
    base.validate();

    EvolvabilityResult result;
    const int cap = plan.effective_trial_cap();
    const int batch = std::max(workers, 1);
    auto still_possible = [&] {
        return static_cast<int>(result.seeds.size()) + (cap - result.base_trials_run) >= plan.seeds_wanted;
    };
    while (static_cast<int>(result.seeds.size()) < plan.seeds_wanted && result.base_trials_run < cap &&
           still_possible()) {
        const int first = result.base_trials_run;
        const int count = std::min(batch, cap - first);
        const auto trials = run_indexed(static_cast<std::size_t>(count), workers, [&](std::size_t k, int inner) {
            EvolutionConfig c = base;
            c.seed = trial_seed(config.seed, config.treatment, first + static_cast<int>(k));
            return run_trial(c, inner);
        });
        for (int k = 0; k < count && static_cast<int>(result.seeds.size()) < plan.seeds_wanted; ++k) {
            if (trials[k].final_stats.best_performance == 1.0) {
                result.seeds.push_back(trials[k].best);
                result.seed_trials.push_back(first + k);
            }
        }
        result.base_trials_run += count;
    }
    if (static_cast<int>(result.seeds.size()) < plan.seeds_wanted) {
        throw EvolvabilityShortfall(static_cast<int>(result.seeds.size()), plan.seeds_wanted, result.base_trials_run);
    }
    result.replicates = run_transfers(plan, config, result.seeds, workers);
    return result;
}

NonModResults run_nonmod_experiments(const EvolutionConfig& config, int trials, const EvolvabilityPlan& plan,
                                     int workers) {
    EvolutionConfig c = config;
    c.treatment = Treatment::PCCNonMod;
    NonModResults out;
    out.trials = run_treatment(c, trials, workers);
    out.evolvability = run_evolvability(plan, c, workers);
    return out;
}

void write_generations_csv(std::ostream& out, const std::vector<TrialResult>& trials) {
    out << "trial,generation,best_performance,hierarchy,modularity,cost,subproblems\n";
    for (std::size_t t = 0; t < trials.size(); ++t) {
        for (const auto& s : trials[t].series) {
            out << fmt::format("{},{},{},{},{},{},{}\n", t, s.generation, s.best_performance, s.hierarchy,
                               s.modularity, s.cost, s.subproblems);
        }
    }
}

void write_evolvability_csv(std::ostream& out, const std::vector<Replicate>& replicates) {
    out << "seed_index,run_index,generations_to_solve,censored\n";
    for (const auto& r : replicates) {
        out << fmt::format("{},{},{},{}\n", r.seed_index, r.run_index, r.generations, r.censored ? 1 : 0);
    }
}

void write_samples_csv(std::ostream& out, const std::vector<SampleRecord>& records) {
    out << "conn_count,cost,hierarchy,modularity\n";
    for (const auto& r : records) {
        out << fmt::format("{},{},{},{}\n", r.connections, r.cost, r.hierarchy, r.modularity);
    }
}

void write_archive_csv(std::ostream& out, const EliteArchive& archive) {
    out << "row,col,modularity,hierarchy,performance\n";
    std::vector<Cell> cells = archive.occupied_cells();
    std::sort(cells.begin(), cells.end(), [](Cell a, Cell b) { return a.row != b.row ? a.row < b.row : a.col < b.col; });
    for (const Cell c : cells) {
        const auto& e = *archive.at(c);
        out << fmt::format("{},{},{},{},{}\n", c.row, c.col, e.modularity, e.hierarchy, e.performance);
    }
}

}  // namespace hierevo
