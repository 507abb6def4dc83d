#include "hierevo/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "hierevo/experiments.hpp"
#include "hierevo/stats.hpp"

namespace hierevo::cli {

namespace fs = std::filesystem;

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Typed access to resolved settings. Every key read is marked as used so
// leftovers can be reported as unknown.
class Resolved {
public:
    explicit Resolved(Settings values) : values_(std::move(values)) {}

    std::string text(const std::string& key, const std::string& fallback) {
        used_.insert(key);
        auto it = values_.find(key);
        const std::string v = it == values_.end() ? fallback : it->second;
        resolved_[key] = v;
        return v;
    }

    long long integer(const std::string& key, long long fallback) {
        const std::string v = text(key, std::to_string(fallback));
        try {
            std::size_t pos = 0;
            const long long x = std::stoll(v, &pos);
            if (pos == v.size()) return x;
        } catch (const std::exception&) {
        }
        throw ConfigError(key, "expected an integer, got '" + v + "'");
    }

    double real(const std::string& key, double fallback) {
        const std::string v = text(key, fmt::format("{}", fallback));
        try {
            std::size_t pos = 0;
            const double x = std::stod(v, &pos);
            if (pos == v.size()) return x;
        } catch (const std::exception&) {
        }
        throw ConfigError(key, "expected a number, got '" + v + "'");
    }

    bool flag(const std::string& key, bool fallback) {
        const std::string v = text(key, fallback ? "true" : "false");
        if (v == "true" || v == "1" || v == "yes") {
            resolved_[key] = "true";
            return true;
        }
        if (v == "false" || v == "0" || v == "no") {
            resolved_[key] = "false";
            return false;
        }
        throw ConfigError(key, "expected true or false, got '" + v + "'");
    }

    std::vector<int> shape(const std::string& key) {
        const std::string v = text(key, "");
        if (v.empty()) return {};
        try {
            LayerShape parsed = LayerShape::parse(v);
            std::vector<int> sizes;
            for (int l = 0; l < parsed.layer_count(); ++l) sizes.push_back(parsed.layer_size(l));
            return sizes;
        } catch (const std::invalid_argument& e) {
            throw ConfigError(key, e.what());
        }
    }

    void reject_unknown() const {
        for (const auto& [key, value] : values_) {
            if (!used_.count(key)) throw ConfigError(key, "unknown setting");
        }
    }

    const Settings& resolved() const { return resolved_; }

private:
    Settings values_;
    Settings resolved_;
    std::set<std::string> used_;
};

EvolutionConfig evolution_config(Resolved& s, const std::string& problem_key) {
    EvolutionConfig c;
    c.treatment = parse_treatment(s.text("treatment", "PA"));
    c.problem = s.text(problem_key, c.problem);
    c.shape = s.shape("shape");
    c.pop_size = static_cast<int>(s.integer("pop_size", c.pop_size));
    c.generations = static_cast<int>(s.integer("generations", c.generations));
    c.cost_probability = s.real("cost_probability", c.cost_probability);
    const std::string gran = s.text("pnsga_granularity", "generation");
    if (gran == "generation") {
        c.granularity = PnsgaGranularity::Generation;
    } else if (gran == "comparison") {
        c.granularity = PnsgaGranularity::Comparison;
    } else {
        throw ConfigError("pnsga_granularity", "expected generation or comparison, got '" + gran + "'");
    }
    c.seed = static_cast<std::uint64_t>(s.integer("seed", 1));
    c.rates.add_connection = s.real("add_conn_rate", c.rates.add_connection);
    c.rates.remove_connection = s.real("remove_conn_rate", c.rates.remove_connection);
    c.rates.bias_per_node = s.real("bias_mutation_rate", c.rates.bias_per_node);
    c.rates.weight_scale = s.real("weight_mutation_scale", c.rates.weight_scale);
    c.init_conn_min = static_cast<int>(s.integer("init_conn_min", c.init_conn_min));
    c.init_conn_max = static_cast<int>(s.integer("init_conn_max", c.init_conn_max));
    c.init_require_valid = s.flag("init_require_valid", c.init_require_valid);
    c.lambda = s.real("lambda", c.lambda);
    c.metrics.include_root_subproblem = s.flag("include_root_subproblem", false);
    const std::string orient = s.text("hierarchy_orientation", "toward_inputs");
    if (orient == "toward_inputs") {
        c.metrics.hierarchy_orientation = EdgeOrientation::TowardInputs;
    } else if (orient == "toward_output") {
        c.metrics.hierarchy_orientation = EdgeOrientation::TowardOutput;
    } else {
        throw ConfigError("hierarchy_orientation", "expected toward_inputs or toward_output, got '" + orient + "'");
    }
    c.metrics.include_isolated_nodes = s.flag("include_isolated_nodes", false);
    return c;
}

int workers_from(int flag_value) {
    if (flag_value > 0) return flag_value;
    if (const char* env = std::getenv("HIEREVO_WORKERS")) {
        try {
            const int n = std::stoi(env);
            if (n > 0) return n;
        } catch (const std::exception&) {
        }
        throw ConfigError("workers", fmt::format("HIEREVO_WORKERS must be a positive integer, got '{}'", env));
    }
    return 1;
}

fs::path prepare_out_dir(Resolved& s) {
    const fs::path dir = s.text("out_dir", "out");
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw ConfigError("out_dir", "cannot create '" + dir.string() + "': " + ec.message());
    return dir;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << content;
}

void write_manifest(const fs::path& dir, const std::string& command, const Settings& resolved) {
    std::string text = fmt::format("# hierevo run manifest\ncommand = {}\nversion = {}\n", command, kVersion);
    for (const auto& [key, value] : resolved) text += fmt::format("{} = {}\n", key, value);
    write_file(dir / "manifest.txt", text);
}

template <typename Writer>
std::string to_text(Writer&& write) {
    std::ostringstream s;
    write(s);
    return s.str();
}

// Settings gathered from --config and command-line flags (flags win).
struct Gathered {
    Settings settings;
    std::string config_path;
    int workers = 0;
};

void add_setting_flags(CLI::App* sub, const std::vector<std::string>& keys, Settings& flags) {
    for (const auto& key : keys) {
        std::string name = key;
        std::replace(name.begin(), name.end(), '_', '-');
        sub->add_option_function<std::string>(
            "--" + name, [&flags, key](const std::string& v) { flags[key] = v; }, "Setting " + key);
    }
}

Settings merge(const Gathered& g, const std::string& command) {
    Settings merged;
    if (!g.config_path.empty()) merged = read_config_file(g.config_path);
    if (auto it = merged.find("command"); it != merged.end()) {
        if (it->second != command) throw ConfigError("command", "config is for '" + it->second + "'");
        merged.erase(it);
    }
    merged.erase("version");
    for (const auto& [k, v] : g.settings) merged[k] = v;
    return merged;
}

const std::vector<std::string> kEvolutionKeys{
    "treatment",         "problem",          "shape",           "pop_size",
    "generations",       "cost_probability", "pnsga_granularity", "seed",
    "add_conn_rate",     "remove_conn_rate", "bias_mutation_rate", "weight_mutation_scale",
    "init_conn_min",     "init_conn_max",    "init_require_valid", "lambda",
    "include_root_subproblem", "hierarchy_orientation", "include_isolated_nodes", "out_dir"};

int cmd_evolve(const Settings& merged, int workers, std::ostream& out) {
    Resolved s(merged);
    auto config = evolution_config(s, "problem");
    const int trials = static_cast<int>(s.integer("trials", 30));
    if (trials < 1) throw ConfigError("trials", "must be >= 1");
    config.validate();
    const fs::path dir = prepare_out_dir(s);
    s.reject_unknown();
    write_manifest(dir, "evolve", s.resolved());
    const auto results = run_treatment(config, trials, workers);
    write_file(dir / "generations.csv", to_text([&](std::ostream& o) { write_generations_csv(o, results); }));
    for (std::size_t k = 0; k < results.size(); ++k) {
        write_file(dir / fmt::format("trial{}_best.json", k), to_json(results[k].best).dump(2) + "\n");
    }
    out << fmt::format("wrote {} trials to {}\n", results.size(), dir.string());
    return 0;
}

int cmd_evolvability(const Settings& merged, int workers, std::ostream& out) {
    Resolved s(merged);
    auto config = evolution_config(s, "base_problem");
    EvolvabilityPlan plan;
    plan.base_problem = config.problem;
    plan.target_problem = s.text("target_problem", plan.target_problem);
    plan.seeds_wanted = static_cast<int>(s.integer("seeds_wanted", plan.seeds_wanted));
    plan.runs_per_seed = static_cast<int>(s.integer("runs_per_seed", plan.runs_per_seed));
    plan.generation_cap = static_cast<int>(s.integer("generation_cap", plan.generation_cap));
    plan.trial_cap = static_cast<int>(s.integer("trial_cap", plan.trial_cap));
    plan.mutate_seed = s.flag("mutate_seed", plan.mutate_seed);
    plan.validate();
    config.validate();
    const fs::path dir = prepare_out_dir(s);
    s.reject_unknown();
    write_manifest(dir, "evolvability", s.resolved());
    const auto result = run_evolvability(plan, config, workers);
    write_file(dir / "evolvability.csv",
               to_text([&](std::ostream& o) { write_evolvability_csv(o, result.replicates); }));
    for (std::size_t k = 0; k < result.seeds.size(); ++k) {
        write_file(dir / fmt::format("seed{}_base.json", k), to_json(result.seeds[k]).dump(2) + "\n");
    }
    out << fmt::format("wrote {} replicates from {} seeds ({} base trials) to {}\n", result.replicates.size(),
                       result.seeds.size(), result.base_trials_run, dir.string());
    return 0;
}

int cmd_map_elites(const Settings& merged, int workers, std::ostream& out) {
    Resolved s(merged);
    MapElitesConfig c;
    c.problem = s.text("problem", c.problem);
    c.shape = s.shape("shape");
    c.evaluations = s.integer("evaluations", c.evaluations);
    c.initial_batch = static_cast<int>(s.integer("initial_batch", c.initial_batch));
    c.batch = static_cast<int>(s.integer("batch", c.batch));
    c.bin_width = s.real("bin_width", c.bin_width);
    c.init_conn_min = static_cast<int>(s.integer("init_conn_min", c.init_conn_min));
    c.init_conn_max = static_cast<int>(s.integer("init_conn_max", c.init_conn_max));
    c.rates.add_connection = s.real("add_conn_rate", c.rates.add_connection);
    c.rates.remove_connection = s.real("remove_conn_rate", c.rates.remove_connection);
    c.rates.bias_per_node = s.real("bias_mutation_rate", c.rates.bias_per_node);
    c.rates.weight_scale = s.real("weight_mutation_scale", c.rates.weight_scale);
    c.lambda = s.real("lambda", c.lambda);
    c.seed = static_cast<std::uint64_t>(s.integer("seed", 1));
    c.validate();
    const fs::path dir = prepare_out_dir(s);
    s.reject_unknown();
    write_manifest(dir, "map-elites", s.resolved());
    const auto archive = run_map_elites(c, workers);
    write_file(dir / "archive.csv", to_text([&](std::ostream& o) { write_archive_csv(o, archive); }));
    for (const Cell cell : archive.occupied_cells()) {
        write_file(dir / fmt::format("elite_{}_{}.json", cell.row, cell.col),
                   to_json(archive.at(cell)->genome).dump(2) + "\n");
    }
    out << fmt::format("wrote {} occupied cells to {}\n", archive.occupied(), dir.string());
    return 0;
}

int cmd_sample(const Settings& merged, int workers, std::ostream& out) {
    Resolved s(merged);
    SamplingConfig c;
    c.shape = s.shape("shape");
    c.per_count = static_cast<int>(s.integer("per_count", c.per_count));
    c.min_connections = static_cast<int>(s.integer("min_connections", c.min_connections));
    c.max_connections = static_cast<int>(s.integer("max_connections", c.max_connections));
    c.seed = static_cast<std::uint64_t>(s.integer("seed", 1));
    c.validate();
    const fs::path dir = prepare_out_dir(s);
    s.reject_unknown();
    write_manifest(dir, "sample", s.resolved());
    const auto records = sample_networks(c, workers);
    write_file(dir / "samples.csv", to_text([&](std::ostream& o) { write_samples_csv(o, records); }));
    out << fmt::format("wrote {} records to {}\n", records.size(), dir.string());
    return 0;
}

int cmd_metrics(const std::string& network, const std::string& problem_name, std::ostream& out) {
    LogicProblem problem = LogicProblem::and_xor_and();
    try {
        problem = LogicProblem::by_name(problem_name);
    } catch (const std::invalid_argument& e) {
        throw ConfigError("problem", e.what());
    }
    NetworkGenome genome(LayerShape::standard());
    try {
        genome = load_genome(network);
    } catch (const std::exception& e) {
        throw ConfigError("network", e.what());
    }
    const auto report = compute_metrics(genome, problem);
    out << fmt::format("{},{},{},{},{}\n", report.hierarchy, report.modularity, report.cost,
                       report.subproblems.solved, report.subproblems.fraction());
    return 0;
}

// A numeric column of a CSV file, optionally keeping only the last row of
// each `trial`, or grouped by another column.
struct Column {
    std::vector<double> values;
    std::vector<std::string> groups;
};

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
    return cells;
}

Column read_column(const std::string& path, const std::string& column, const std::string& group_by, bool final_only,
                   const std::string& key) {
    std::ifstream f(path);
    if (!f) throw ConfigError(key, "cannot read '" + path + "'");
    std::string line;
    if (!std::getline(f, line)) throw ConfigError(key, "'" + path + "' is empty");
    const auto header = split(line);
    auto index_of = [&](const std::string& name) {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) throw ConfigError("column", "'" + path + "' has no column '" + name + "'");
        return static_cast<std::size_t>(it - header.begin());
    };
    const std::size_t col = index_of(column);
    const std::size_t grp = group_by.empty() ? 0 : index_of(group_by);
    const std::size_t trial = final_only ? index_of("trial") : 0;
    Column out;
    std::vector<std::string> trial_ids;
    while (std::getline(f, line)) {
        if (trim(line).empty()) continue;
        const auto cells = split(line);
        if (cells.size() != header.size()) throw ConfigError(key, "ragged row in '" + path + "'");
        double v = 0.0;
        try {
            v = std::stod(cells[col]);
        } catch (const std::exception&) {
            throw ConfigError("column", "non-numeric value '" + cells[col] + "' in '" + path + "'");
        }
        if (final_only) {
            if (!trial_ids.empty() && trial_ids.back() == cells[trial]) {
                out.values.back() = v;
                continue;
            }
            trial_ids.push_back(cells[trial]);
        }
        out.values.push_back(v);
        if (!group_by.empty()) out.groups.push_back(cells[grp]);
    }
    if (out.values.empty()) throw ConfigError(key, "'" + path + "' has no rows");
    return out;
}

struct StatsArgs {
    std::string a, b, column, by, alternative = "two-sided";
    bool final_only = false;
    int window = 0;
    int resamples = 5000;
    double level = 0.95;
    std::uint64_t seed = 1;
};

int cmd_stats(const StatsArgs& args, std::ostream& out) {
    if (args.column.empty()) throw ConfigError("column", "required");
    const Column a = read_column(args.a, args.column, args.b.empty() ? args.by : "", args.final_only, "a");
    if (!args.b.empty()) {
        const Column b = read_column(args.b, args.column, "", args.final_only, "b");
        stats::Alternative alt = stats::Alternative::TwoSided;
        if (args.alternative == "greater") {
            alt = stats::Alternative::Greater;
        } else if (args.alternative == "less") {
            alt = stats::Alternative::Less;
        } else if (args.alternative != "two-sided") {
            throw ConfigError("alternative", "expected two-sided, greater or less");
        }
        const auto r = stats::rank_sum(a.values, b.values, alt);
        out << "u,p,n_a,n_b,median_a,median_b\n";
        out << fmt::format("{},{},{},{},{},{}\n", r.u, r.p, a.values.size(), b.values.size(),
                           stats::median(a.values), stats::median(b.values));
        return 0;
    }
    if (args.window < 0 || (args.window > 0 && args.window % 2 == 0)) throw ConfigError("window", "must be odd");
    if (args.resamples < 1) throw ConfigError("resamples", "must be >= 1");
    if (!(args.level > 0.0 && args.level < 1.0)) throw ConfigError("level", "must lie in (0, 1)");
    Rng rng(args.seed);
    if (args.by.empty()) {
        const auto ci = stats::bootstrap_median_ci(a.values, rng, args.resamples, args.level);
        out << "n,median,ci_low,ci_high\n";
        out << fmt::format("{},{},{},{}\n", a.values.size(), stats::median(a.values), ci.low, ci.high);
        return 0;
    }
    std::vector<std::string> keys;
    std::map<std::string, std::vector<double>> grouped;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        auto& bucket = grouped[a.groups[i]];
        if (bucket.empty()) keys.push_back(a.groups[i]);
        bucket.push_back(a.values[i]);
    }
    std::vector<double> med, lo, hi;
    for (const auto& k : keys) {
        const auto& v = grouped[k];
        const auto ci = stats::bootstrap_median_ci(v, rng, args.resamples, args.level);
        med.push_back(stats::median(v));
        lo.push_back(ci.low);
        hi.push_back(ci.high);
    }
    if (args.window > 1) {
        lo = stats::median_filter(lo, args.window);
        hi = stats::median_filter(hi, args.window);
    }
    out << fmt::format("{},median,ci_low,ci_high\n", args.by);
    for (std::size_t i = 0; i < keys.size(); ++i) out << fmt::format("{},{},{},{}\n", keys[i], med[i], lo[i], hi[i]);
    return 0;
}

}  // namespace

Settings parse_config(std::string_view text) {
    Settings out;
    std::istringstream in{std::string(text)};
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        if (trim(line).empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("config", fmt::format("line {}: expected key = value", number));
        const std::string key = trim(std::string_view(line).substr(0, eq));
        const std::string value = trim(std::string_view(line).substr(eq + 1));
        if (key.empty()) throw ConfigError("config", fmt::format("line {}: missing key", number));
        if (out.count(key)) throw ConfigError(key, fmt::format("line {}: set twice", number));
        out[key] = value;
    }
    return out;
}

Settings read_config_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("config", "cannot read '" + path + "'");
    std::stringstream buf;
    buf << f.rdbuf();
    return parse_config(buf.str());
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Evolve and measure layered Boolean-logic networks", "hierevo"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kVersion));

    std::map<std::string, Gathered> gathered;
    auto experiment = [&](const std::string& name, const std::string& help, std::vector<std::string> keys) {
        CLI::App* sub = app.add_subcommand(name, help);
        auto& g = gathered[name];
        sub->add_option("--config", g.config_path, "Config file of key = value lines");
        sub->add_option("--workers", g.workers, "Evaluation threads (default HIEREVO_WORKERS or 1)")
            ->check(CLI::PositiveNumber);
        add_setting_flags(sub, keys, g.settings);
        return sub;
    };

    auto evolve_keys = kEvolutionKeys;
    evolve_keys.push_back("trials");
    experiment("evolve", "Run independent evolution trials of one treatment", evolve_keys);

    auto evo_keys = kEvolutionKeys;
    evo_keys.erase(std::find(evo_keys.begin(), evo_keys.end(), "problem"));
    for (const char* k : {"base_problem", "target_problem", "seeds_wanted", "runs_per_seed", "generation_cap",
                          "trial_cap", "mutate_seed"})
        evo_keys.push_back(k);
    experiment("evolvability", "Evolve perfect base networks, then time their adaptation to a target problem",
               evo_keys);

    experiment("map-elites", "Chart the best performance per (modularity, hierarchy) cell",
               {"problem", "shape", "evaluations", "initial_batch", "batch", "bin_width", "init_conn_min",
                "init_conn_max", "add_conn_rate", "remove_conn_rate", "bias_mutation_rate",
                "weight_mutation_scale", "lambda", "seed", "out_dir"});
    experiment("sample", "Measure random valid networks at every connection count",
               {"shape", "per_count", "min_connections", "max_connections", "seed", "out_dir"});

    std::string network, problem = "and-xor-and";
    CLI::App* metrics = app.add_subcommand("metrics", "Hierarchy, modularity, cost and sub-problems of a network");
    metrics->add_option("--network", network, "Network JSON file")->required();
    metrics->add_option("--problem", problem, "Problem name");

    StatsArgs st;
    CLI::App* stats_cmd = app.add_subcommand("stats", "Rank-sum comparison or bootstrapped median summary of a CSV column");
    stats_cmd->add_option("--a", st.a, "CSV file")->required();
    stats_cmd->add_option("--b", st.b, "Second CSV file; compares the column with a rank-sum test");
    stats_cmd->add_option("--column", st.column, "Column to analyse")->required();
    stats_cmd->add_flag("--final", st.final_only, "Use only the last row of each trial");
    stats_cmd->add_option("--alternative", st.alternative, "two-sided, greater or less");
    stats_cmd->add_option("--by", st.by, "Summarise per value of this column");
    stats_cmd->add_option("--window", st.window, "Median-filter window for per-group intervals");
    stats_cmd->add_option("--resamples", st.resamples, "Bootstrap resamples");
    stats_cmd->add_option("--level", st.level, "Confidence level");
    stats_cmd->add_option("--seed", st.seed, "Bootstrap seed");

    if (args.size() > 1 && !args[1].empty() && args[1][0] != '-') {
        const auto subs = app.get_subcommands([](const CLI::App*) { return true; });
        const bool known = std::any_of(subs.begin(), subs.end(), [&](const CLI::App* a) { return a->get_name() == args[1]; });
        if (!known) {
            err << "error: unknown subcommand '" << args[1] << "'\n";
            return 2;
        }
    }
    std::vector<std::string> argv_tail(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
    try {
        app.parse(argv_tail);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForVersion&) {
        out << kVersion << "\n";
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    CLI::App* chosen = app.get_subcommands().front();
    const std::string name = chosen->get_name();
    try {
        if (name == "metrics") return cmd_metrics(network, problem, out);
        if (name == "stats") return cmd_stats(st, out);
        const auto& g = gathered.at(name);
        const Settings merged = merge(g, name);
        const int workers = workers_from(g.workers);
        if (name == "evolve") return cmd_evolve(merged, workers, out);
        if (name == "evolvability") return cmd_evolvability(merged, workers, out);
        if (name == "map-elites") return cmd_map_elites(merged, workers, out);
        return cmd_sample(merged, workers, out);
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace hierevo::cli
