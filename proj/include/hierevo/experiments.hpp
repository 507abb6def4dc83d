#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "hierevo/evolution.hpp"
#include "hierevo/mapelites.hpp"
#include "hierevo/sampling.hpp"

namespace hierevo {

/// Seed of trial `index` under `treatment` for a given master seed.
std::uint64_t trial_seed(std::uint64_t master, Treatment treatment, int index);

/// `trials` independent runs of `config` (config.seed is the master seed).
std::vector<TrialResult> run_treatment(const EvolutionConfig& config, int trials, int workers = 1);

struct TreatmentResults {
    Treatment treatment;
    std::vector<TrialResult> trials;
};

/// The same configuration under each treatment.
std::vector<TreatmentResults> run_treatment_comparison(const EvolutionConfig& config,
                                                       const std::vector<Treatment>& treatments, int trials,
                                                       int workers = 1);

struct EvolvabilityPlan {
    std::string base_problem = "and-xor-and";
    std::string target_problem = "and-equ-and";
    int seeds_wanted = 30;
    int runs_per_seed = 30;
    int generation_cap = 25000;
    /// Base trials allowed before giving up; 0 means 5 * seeds_wanted.
    int trial_cap = 0;
    /// Generation-0 of a target run: mutated copies of the seed, or clones.
    bool mutate_seed = true;

    static EvolvabilityPlan builtin(const std::string& base, const std::string& target);
    int effective_trial_cap() const { return trial_cap > 0 ? trial_cap : 5 * seeds_wanted; }
    void validate() const;
};

struct Replicate {
    int seed_index = 0;
    int run_index = 0;
    int generations = 0;
    bool censored = false;
};

struct EvolvabilityResult {
    /// Perfect base networks, with the base trial that produced each.
    std::vector<NetworkGenome> seeds;
    std::vector<int> seed_trials;
    int base_trials_run = 0;
    std::vector<Replicate> replicates;
};

class EvolvabilityShortfall : public std::runtime_error {
public:
    EvolvabilityShortfall(int collected, int wanted, int trials);
    int collected() const { return collected_; }
    int wanted() const { return wanted_; }

private:
    int collected_;
    int wanted_;
};

/// Phase 1 runs base-problem trials (config.generations each) in index
/// order and keeps the first seeds_wanted whose best network is perfect,
/// giving up as soon as the trial cap makes that impossible.
/// Phase 2 seeds runs_per_seed target runs from each, stopping at the first
/// perfect network or the generation cap.
EvolvabilityResult run_evolvability(const EvolvabilityPlan& plan, const EvolutionConfig& config, int workers = 1);

/// Phase 2 alone, from already collected seeds.
std::vector<Replicate> run_transfers(const EvolvabilityPlan& plan, const EvolutionConfig& config,
                                     const std::vector<NetworkGenome>& seeds, int workers = 1);

struct NonModResults {
    std::vector<TrialResult> trials;
    EvolvabilityResult evolvability;
};

/// PCC-NonMod through the treatment comparison and the
/// and-xor-and -> and-equ-and transfer.
NonModResults run_nonmod_experiments(const EvolutionConfig& config, int trials, const EvolvabilityPlan& plan,
                                     int workers = 1);

void write_generations_csv(std::ostream& out, const std::vector<TrialResult>& trials);
void write_evolvability_csv(std::ostream& out, const std::vector<Replicate>& replicates);
void write_samples_csv(std::ostream& out, const std::vector<SampleRecord>& records);
void write_archive_csv(std::ostream& out, const EliteArchive& archive);

}  // namespace hierevo
