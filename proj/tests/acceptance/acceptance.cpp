// Acceptance checks. Each group prints one PASS/FAIL line per criterion.
//
//   acceptance <group> [--expect-fail N,...] [--workers W]
//
// Groups: exact, treatments, evolvability, sampling, determinism, map-elites.
// Criteria listed in --expect-fail still print FAIL but do not fail the run;
// if one of them passes the run fails so the list gets updated.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "hierevo/cli.hpp"
#include "hierevo/experiments.hpp"
#include "hierevo/stats.hpp"
#include "support/corpus.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace hierevo;
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kMasterSeed = 20240611;

struct Report {
    std::set<int> expected_failures;
    int unexpected = 0;

    void line(int criterion, bool pass, const std::string& what, const std::string& detail) {
        const bool expected = expected_failures.count(criterion) > 0;
        std::string tag = pass ? "PASS" : "FAIL";
        if (!pass && expected) tag = "FAIL (known)";
        if (pass && expected) tag = "PASS (listed as known failure)";
        std::cout << fmt::format("[{}] criterion {}: {} -- {}", tag, criterion, what, detail) << std::endl;
        if (pass == expected) ++unexpected;
    }
};

double elapsed(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---------------------------------------------------------------- exact

void exact(Report& report) {
    std::vector<std::string> problems;
    auto expect = [&](bool ok, const std::string& what) {
        if (!ok) problems.push_back(what);
    };

    const auto values = LogicProblem::and_xor_and().gate_values(0b00110111);
    expect(values == std::array<bool, 7>{false, true, false, true, true, true, true}, "table 1 example");

    const StructuralGraph chain(3, {{0, 1}, {1, 2}});
    std::vector<std::pair<int, int>> star_edges, complete_edges;
    for (int i = 1; i < 6; ++i) star_edges.emplace_back(0, i);
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j)
            if (i != j) complete_edges.emplace_back(i, j);
    expect(std::abs(hierarchy(chain).value - 0.5) < 1e-12, "hierarchy chain");
    expect(std::abs(hierarchy(StructuralGraph(6, star_edges)).value - 1.0) < 1e-12, "hierarchy star");
    expect(std::abs(hierarchy(StructuralGraph(5, complete_edges)).value) < 1e-12, "hierarchy complete");

    const StructuralGraph two_pairs(4, {{0, 1}, {2, 3}});
    expect(std::abs(modularity_q(two_pairs, Partition{{0, 0, 1, 1}}).value - 0.5) < 1e-12, "Q hand case");

    const std::vector<Point> start{{-3.5, 0.0}, {0.0, 4.0}, {0.0, 0.0}};
    const std::vector<std::pair<int, int>> edges{{0, 2}, {2, 1}};
    const auto placed = place_free_nodes(start, {true, true, false}, edges);
    expect(std::abs(squared_length(placed, edges) - 14.125) < 1e-9, "placement two-edge case");

    int detection_hits = 0;
    const auto corpus = testing::module_corpus();
    for (const auto& g : corpus) {
        const double found = detect_modules(StructuralGraph(g.n, g.edges)).q;
        detection_hits += std::abs(found - oracle::exhaustive_max_modularity(g)) < 1e-9;
    }
    expect(detection_hits == static_cast<int>(corpus.size()), fmt::format("detection {}/{}", detection_hits, corpus.size()));

    int agree = 0, total = 0;
    Rng rng(kMasterSeed);
    for (const auto& name : LogicProblem::names()) {
        const auto p = LogicProblem::by_name(name);
        std::vector<std::vector<bool>> truths;
        for (const auto& sp : subproblem_truth_vectors(p)) {
            std::vector<bool> t(kPatternCount);
            for (int k = 0; k < kPatternCount; ++k) t[k] = sp.truth[k];
            truths.push_back(t);
        }
        const auto shape = p.default_shape();
        for (int i = 0; i < 100; ++i) {
            const auto g = random_genome(shape, static_cast<int>(rng.between(11, shape.slot_count())), false, rng);
            const auto trace = trace_all(g);
            agree += solved_subproblems(g, p, trace).per_gate == oracle::brute_force_subproblems(g, trace, truths);
            ++total;
        }
    }
    expect(agree == total, fmt::format("sub-problems {}/{}", agree, total));

    const std::vector<double> a{1, 2, 3}, b{4, 5, 6};
    const auto rs = stats::rank_sum(a, b);
    expect(rs.u == 0.0 && std::abs(rs.p - 0.1) < 1e-12, "rank-sum exact case");
    expect(std::abs(stats::fisher_exact({{{2, 0}, {0, 2}}}) - 1.0 / 3.0) < 1e-12, "fisher 1/3");

    report.line(1, problems.empty(), "exact oracles",
                problems.empty() ? fmt::format("all checks hold (detection {}/{}, sub-problems {}/{})", detection_hits,
                                               corpus.size(), agree, total)
                                 : fmt::format("failed: {}", fmt::join(problems, "; ")));
}

// ---------------------------------------------------------------- treatments

std::vector<double> final_values(const std::vector<TrialResult>& trials,
                                 const std::function<double(const GenerationStats&)>& field) {
    std::vector<double> out;
    for (const auto& t : trials) out.push_back(field(t.final_stats));
    return out;
}

void treatments(Report& report, int workers) {
    EvolutionConfig config;
    config.problem = "and-xor-and";
    config.pop_size = 100;
    config.generations = 2000;
    config.seed = kMasterSeed;
    const auto t0 = std::chrono::steady_clock::now();
    const auto results =
        run_treatment_comparison(config, {Treatment::PA, Treatment::PCC, Treatment::PCCNonMod}, 15, workers);
    std::cout << fmt::format("  (45 trials in {:.0f} s)", elapsed(t0)) << std::endl;
    const auto& pa = results[0].trials;
    const auto& pcc = results[1].trials;
    const auto& nonmod = results[2].trials;
    auto H = [](const GenerationStats& s) { return s.hierarchy; };
    auto Q = [](const GenerationStats& s) { return s.modularity; };
    auto S = [](const GenerationStats& s) { return static_cast<double>(s.subproblems); };
    auto P = [](const GenerationStats& s) { return s.best_performance; };
    for (const auto& r : results) {
        std::cout << fmt::format("  {}: median performance {:.4f}, hierarchy {:.4f}, modularity {:.4f}, sub-problems {}",
                                 treatment_name(r.treatment), stats::median(final_values(r.trials, P)),
                                 stats::median(final_values(r.trials, H)), stats::median(final_values(r.trials, Q)),
                                 stats::median(final_values(r.trials, S)))
                  << std::endl;
    }

    {
        const auto h_pcc = final_values(pcc, H), h_pa = final_values(pa, H);
        const auto q_pcc = final_values(pcc, Q), q_pa = final_values(pa, Q);
        const auto s_pcc = final_values(pcc, S), s_pa = final_values(pa, S);
        const auto rh = stats::rank_sum(h_pcc, h_pa, stats::Alternative::Greater);
        const auto rq = stats::rank_sum(q_pcc, q_pa, stats::Alternative::Greater);
        const double mh_pcc = stats::median(h_pcc), mh_pa = stats::median(h_pa);
        const double mq_pcc = stats::median(q_pcc), mq_pa = stats::median(q_pa);
        const double ms_pcc = stats::median(s_pcc), ms_pa = stats::median(s_pa);
        const bool hier = mh_pcc > mh_pa && rh.p < 0.05;
        const bool mod = mq_pcc > mq_pa && rq.p < 0.05;
        const bool sub = ms_pcc > ms_pa;
        report.line(2, hier && mod && sub, "P&CC vs PA at pop 100 x 2000 generations x 15 trials",
                    fmt::format("hierarchy {:.4f} vs {:.4f} (p={:.3g}) {}; modularity {:.4f} vs {:.4f} (p={:.3g}) {}; "
                                "median sub-problems {} vs {} {}",
                                mh_pcc, mh_pa, rh.p, hier ? "ok" : "NOT MET", mq_pcc, mq_pa, rq.p, mod ? "ok" : "NOT MET",
                                ms_pcc, ms_pa, sub ? "ok" : "NOT MET"));
    }
    {
        std::vector<double> h = final_values(pa, H), q = final_values(pa, Q);
        for (double v : final_values(pcc, H)) h.push_back(v);
        for (double v : final_values(pcc, Q)) q.push_back(v);
        bool pass = false;
        std::string detail;
        try {
            const auto c = stats::pearson_r(h, q);
            pass = c.r > 0.5 && c.p < 0.05;
            detail = fmt::format("r = {:.4f}, p = {:.3g} over {} networks", c.r, c.p, h.size());
        } catch (const stats::UndefinedCorrelation& e) {
            detail = e.what();
        }
        report.line(5, pass, "hierarchy-modularity association on pooled PA + P&CC finals", detail);
    }
    {
        const auto q_nm = final_values(nonmod, Q), q_pa = final_values(pa, Q);
        const auto h_nm = final_values(nonmod, H), h_pa = final_values(pa, H);
        const auto rq = stats::rank_sum(q_nm, q_pa, stats::Alternative::Greater);
        const auto rh = stats::rank_sum(h_nm, h_pa, stats::Alternative::Greater);
        const bool not_more_modular = rq.p > 0.01;
        const bool more_hierarchical = stats::median(h_nm) > stats::median(h_pa) && rh.p < 0.05;
        report.line(6, not_more_modular && more_hierarchical, "P&CC-NonMod vs PA",
                    fmt::format("modularity {:.4f} vs {:.4f} (p={:.3g}) {}; hierarchy {:.4f} vs {:.4f} (p={:.3g}) {}",
                                stats::median(q_nm), stats::median(q_pa), rq.p,
                                not_more_modular ? "not greater, ok" : "NOT MET", stats::median(h_nm),
                                stats::median(h_pa), rh.p, more_hierarchical ? "ok" : "NOT MET"));
    }
}

// ---------------------------------------------------------------- evolvability

void evolvability(Report& report, int workers) {
    EvolvabilityPlan plan = EvolvabilityPlan::builtin("and-xor-and", "and-equ-and");
    plan.seeds_wanted = 10;
    plan.runs_per_seed = 5;
    plan.generation_cap = 5000;
    EvolutionConfig config;
    config.pop_size = 100;
    config.generations = 2000;
    config.seed = kMasterSeed;

    std::vector<std::vector<double>> gens;
    std::vector<std::string> notes;
    for (Treatment t : {Treatment::PA, Treatment::PCC}) {
        config.treatment = t;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            const auto r = run_evolvability(plan, config, workers);
            std::vector<double> g;
            int censored = 0;
            for (const auto& rep : r.replicates) {
                g.push_back(rep.generations);
                censored += rep.censored;
            }
            notes.push_back(fmt::format("{}: median {} generations, {} of {} censored, {} base trials", treatment_name(t),
                                        stats::median(g), censored, g.size(), r.base_trials_run));
            gens.push_back(std::move(g));
        } catch (const EvolvabilityShortfall& e) {
            notes.push_back(fmt::format("{}: phase 1 {}", treatment_name(t), e.what()));
        }
        std::cout << fmt::format("  ({} in {:.0f} s)", treatment_name(t), elapsed(t0)) << std::endl;
    }
    bool pass = false;
    if (gens.size() == 2) {
        const auto r = stats::rank_sum(gens[1], gens[0], stats::Alternative::Less);
        pass = stats::median(gens[1]) < stats::median(gens[0]) && r.p < 0.05;
        notes.push_back(fmt::format("one-sided p = {:.3g}", r.p));
    }
    report.line(3, pass, "and-xor-and -> and-equ-and, 10 seeds x 5 runs, cap 5000", fmt::format("{}", fmt::join(notes, "; ")));
}

// ---------------------------------------------------------------- sampling

void sampling(Report& report, int workers) {
    SamplingConfig config;
    config.per_count = 500;
    config.seed = kMasterSeed;
    const auto t0 = std::chrono::steady_clock::now();
    const auto records = sample_networks(config, workers);
    std::vector<double> cost, h, q;
    for (const auto& r : records) {
        cost.push_back(r.cost);
        h.push_back(r.hierarchy);
        q.push_back(r.modularity);
    }
    const auto ch = stats::spearman(cost, h);
    const auto cq = stats::spearman(cost, q);
    report.line(4, ch.r < -0.3 && cq.r < -0.3, "random valid networks, 500 per count 11-58",
                fmt::format("spearman(cost, hierarchy) = {:.4f}, spearman(cost, modularity) = {:.4f}, {} records, {:.0f} s",
                            ch.r, cq.r, records.size(), elapsed(t0)));
}

// ---------------------------------------------------------------- determinism

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream s;
    s << f.rdbuf();
    return s.str();
}

void determinism(Report& report) {
    const fs::path root = fs::temp_directory_path() / "hierevo_acceptance_determinism";
    fs::remove_all(root);
    fs::create_directories(root);

    struct Job {
        std::string name;
        std::vector<std::string> args;
        std::vector<std::string> outputs;
    };
    const std::vector<Job> jobs{
        {"evolve",
         {"evolve", "--treatment", "PCC-NonMod", "--pop-size", "24", "--generations", "40", "--trials", "3",
          "--cost-probability", "0.5", "--pnsga-granularity", "comparison"},
         {"generations.csv", "trial0_best.json", "trial2_best.json"}},
        {"sample", {"sample", "--per-count", "20"}, {"samples.csv"}},
        {"map-elites", {"map-elites", "--evaluations", "4000", "--initial-batch", "200", "--batch", "16"}, {"archive.csv"}},
    };

    std::vector<std::string> notes;
    bool all_same = true;
    for (const auto& job : jobs) {
        std::vector<std::string> manifests;
        for (int workers : {1, 8}) {
            const fs::path dir = root / fmt::format("{}_{}", job.name, workers);
            std::vector<std::string> args{"hierevo"};
            if (workers == 1) {
                args.insert(args.end(), job.args.begin(), job.args.end());
            } else {
                // The second run replays the first run's manifest.
                args.insert(args.end(), {job.args.front(), "--config", (root / fmt::format("{}_1", job.name) / "manifest.txt").string()});
            }
            args.insert(args.end(), {"--out-dir", dir.string(), "--workers", std::to_string(workers)});
            std::ostringstream out, err;
            if (cli::run(args, out, err) != 0) {
                notes.push_back(fmt::format("{} failed: {}", job.name, err.str()));
                all_same = false;
            }
        }
        bool same = true;
        for (const auto& file : job.outputs) {
            const auto a = slurp(root / fmt::format("{}_1", job.name) / file);
            const auto b = slurp(root / fmt::format("{}_8", job.name) / file);
            same = same && !a.empty() && a == b;
        }
        all_same = all_same && same;
        notes.push_back(fmt::format("{} {}", job.name, same ? "identical" : "DIFFERENT"));
    }

    // Evolvability transfers from a fixed perfect seed (phase 1 is the
    // evolve path above).
    EvolutionConfig config;
    config.treatment = Treatment::PCC;
    config.pop_size = 20;
    config.seed = kMasterSeed;
    EvolvabilityPlan plan;
    plan.runs_per_seed = 4;
    plan.generation_cap = 60;
    std::string csv[2];
    int k = 0;
    for (int workers : {1, 8}) {
        std::ostringstream s;
        write_evolvability_csv(s, run_transfers(plan, config, {testing::perfect_and_x_and(), testing::perfect_and_x_and(true)}, workers));
        csv[k++] = s.str();
    }
    all_same = all_same && csv[0] == csv[1];
    notes.push_back(fmt::format("evolvability {}", csv[0] == csv[1] ? "identical" : "DIFFERENT"));
    report.line(7, all_same, "byte-identical outputs at 1 and 8 workers", fmt::format("{}", fmt::join(notes, ", ")));
}

// ---------------------------------------------------------------- map-elites

void map_elites(Report& report, int workers) {
    MapElitesConfig config;
    config.seed = kMasterSeed;
    config.evaluations = 50000;
    const auto problem = LogicProblem::by_name(config.problem);

    std::vector<double> best(static_cast<std::size_t>(20 * 20), -1.0);
    std::size_t last = 0;
    bool monotone_cells = true, monotone_count = true;
    const auto archive = run_map_elites(config, workers, [&](long long, const EliteArchive& a) {
        monotone_count = monotone_count && a.occupied() >= last;
        last = a.occupied();
        // Only the newest cell or an improved one can change; checking all
        // cells every step is cheap at this grid size.
        for (const Cell c : a.occupied_cells()) {
            auto& b = best[static_cast<std::size_t>(c.row * 20 + c.col)];
            monotone_cells = monotone_cells && a.at(c)->performance >= b;
            b = a.at(c)->performance;
        }
    });
    int consistent = 0;
    for (const Cell c : archive.occupied_cells()) {
        const auto& e = *archive.at(c);
        const auto again = evaluate_elite(e.genome, problem, config);
        consistent += again.performance == e.performance && again.modularity == e.modularity &&
                      again.hierarchy == e.hierarchy && feature_bin(e.modularity, e.hierarchy) == c;
    }
    const bool structural = monotone_cells && monotone_count && consistent == static_cast<int>(archive.occupied());

    config.evaluations = 200000;
    long long first_perfect = -1;
    double top = 0.0;
    const auto big = run_map_elites(config, workers, [&](long long n, const EliteArchive& a) {
        if (first_perfect >= 0) return;
        for (const Cell c : a.occupied_cells()) {
            if (a.at(c)->performance == 1.0) {
                first_perfect = n;
                return;
            }
        }
    });
    for (const Cell c : big.occupied_cells()) top = std::max(top, big.at(c)->performance);

    report.line(8, structural && first_perfect >= 0, "MAP-Elites structure (50 000) and a perfect cell (200 000)",
                fmt::format("cell monotone {}, count monotone {}, {}/{} elites re-evaluate exactly; best performance "
                            "within 200 000 evaluations {:.4f} over {} cells{}",
                            monotone_cells, monotone_count, consistent, archive.occupied(), top, big.occupied(),
                            first_perfect >= 0 ? fmt::format(" (first perfect at {})", first_perfect) : ""));
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: acceptance <exact|treatments|evolvability|sampling|determinism|map-elites> "
                     "[--expect-fail N,...] [--workers W]\n";
        return 2;
    }
    Report report;
    int workers = 1;
    if (const char* env = std::getenv("HIEREVO_WORKERS")) workers = std::max(1, std::atoi(env));
    for (int i = 2; i + 1 < argc; i += 2) {
        const std::string flag = argv[i];
        if (flag == "--expect-fail") {
            std::stringstream list(argv[i + 1]);
            std::string item;
            while (std::getline(list, item, ',')) report.expected_failures.insert(std::stoi(item));
        } else if (flag == "--workers") {
            workers = std::max(1, std::atoi(argv[i + 1]));
        }
    }
    const std::string group = argv[1];
    if (group == "exact") {
        exact(report);
    } else if (group == "treatments") {
        treatments(report, workers);
    } else if (group == "evolvability") {
        evolvability(report, workers);
    } else if (group == "sampling") {
        sampling(report, workers);
    } else if (group == "determinism") {
        determinism(report);
    } else if (group == "map-elites") {
        map_elites(report, workers);
    } else {
        std::cerr << "unknown group " << group << "\n";
        return 2;
    }
    return report.unexpected == 0 ? 0 : 1;
}
