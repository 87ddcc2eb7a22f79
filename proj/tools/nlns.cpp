// nlns — capacitated / split-delivery vehicle routing solver built around
// learned large-neighborhood-search repair operators.
//
// Subcommands: generate, train, solve, solve-batch, bench, validate. Every
// run prints its config hash and seed; iteration-budgeted runs are bit
// reproducible for a fixed seed and worker count.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "nlns/baseline_repair.hpp"
#include "nlns/generator.hpp"
#include "nlns/instance_io.hpp"
#include "nlns/parallel.hpp"
#include "nlns/params_io.hpp"
#include "nlns/run_record.hpp"
#include "nlns/search.hpp"
#include "nlns/training.hpp"

using namespace nlns;
namespace fs = std::filesystem;

namespace {

std::string join_args(int argc, char** argv) {
    std::string s;
    for (int i = 1; i < argc; ++i) {
        if (i > 1) s += ' ';
        s += argv[i];
    }
    return s;
}

GeneratorSpec spec_from_class(const std::string& cls) {
    if (cls.rfind("uniform", 0) == 0) return uniform_spec(std::stoi(cls.substr(7)));
    if (cls.rfind("xe", 0) == 0) return xe_group_spec(std::stoi(cls.substr(2)));
    throw std::runtime_error("unknown instance class: " + cls +
                             " (expected uniformN or xe1..xe17)");
}

struct GenOptions {
    std::string cls = "uniform20";
    std::string variant = "cvrp";
    std::string rounding;
    int customers = 0;
    int capacity = 0;
    int demand_min = 0;
    int demand_max = 0;

    GeneratorSpec build() const {
        GeneratorSpec spec = spec_from_class(cls);
        if (customers > 0) spec.num_customers = customers;
        if (capacity > 0) spec.capacity = capacity;
        if (demand_min > 0) spec.demand_min = demand_min;
        if (demand_max > 0) spec.demand_max = demand_max;
        if (variant == "sdvrp") spec.variant = Variant::SDVRP;
        if (!rounding.empty())
            spec.rounding = rounding == "nearest" ? CostRounding::NearestInteger
                                                  : CostRounding::Exact;
        return spec;
    }
};

void add_gen_options(CLI::App* cmd, GenOptions& opt) {
    cmd->add_option("--class", opt.cls, "instance class: uniformN or xe1..xe17");
    cmd->add_option("--variant", opt.variant, "cvrp or sdvrp")
        ->check(CLI::IsMember({"cvrp", "sdvrp"}));
    cmd->add_option("--rounding", opt.rounding, "exact or nearest")
        ->check(CLI::IsMember({"exact", "nearest"}));
    cmd->add_option("--customers", opt.customers, "override customer count");
    cmd->add_option("--capacity", opt.capacity, "override vehicle capacity");
    cmd->add_option("--demand-min", opt.demand_min, "override minimum demand");
    cmd->add_option("--demand-max", opt.demand_max, "override maximum demand");
}

std::vector<fs::path> instance_files(const std::string& dir) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        auto ext = entry.path().extension().string();
        if (ext == ".json" || ext == ".vrp") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw std::runtime_error("no .json or .vrp instances in " + dir);
    return files;
}

// operator pairs for a set of trained-operator files; each file carries the
// destroy spec it was trained against in its metadata
std::vector<OperatorPair> load_learned_pairs(const std::vector<std::string>& files) {
    std::vector<OperatorPair> pairs;
    for (const auto& file : files) {
        std::string meta_json;
        PolicyParameters params = load_policy(file, &meta_json);
        auto meta = nlohmann::json::parse(meta_json);
        DestroyOperatorSpec destroy = parse_destroy_spec(meta.at("destroy").get<std::string>());
        pairs.push_back({destroy, std::make_shared<LearnedRepair>(
                                      std::move(params), fs::path(file).stem().string())});
    }
    return pairs;
}

std::vector<OperatorPair> pairs_for(const std::shared_ptr<const RepairOperator>& repair) {
    std::vector<OperatorPair> pairs;
    for (const auto& spec : default_destroy_specs()) pairs.push_back({spec, repair});
    return pairs;
}

struct BudgetOptions {
    double time_s = 60;
    int64_t iters = 0;

    void apply(SearchConfig& cfg) const {
        cfg.time_limit_s = time_s;
        cfg.inner_iterations = iters;
    }
};

void add_budget_options(CLI::App* cmd, BudgetOptions& opt) {
    cmd->add_option("--time", opt.time_s, "wall-clock budget in seconds");
    cmd->add_option("--iters", opt.iters,
                    "iteration budget per inner loop; overrides --time and makes the run "
                    "deterministic");
}

double solve_wall(const BudgetOptions& budget, double measured) {
    return budget.iters > 0 ? 0.0 : measured;  // deterministic runs keep records byte-stable
}

int cmd_generate(const GenOptions& gen, const std::string& out_dir, int count, uint64_t seed,
                 const std::string& format) {
    GeneratorSpec spec = gen.build();
    fs::create_directories(out_dir);
    auto instances = generate(spec, count, seed);
    for (int i = 0; i < count; ++i) {
        char name[64];
        std::snprintf(name, sizeof(name), "%05d", i);
        std::string base = (fs::path(out_dir) / name).string();
        if (format == "tsplib")
            write_instance_tsplib(instances[i], base + ".vrp");
        else
            write_instance(instances[i], base + ".json");
    }
    std::printf("wrote %d instances (%s) to %s\n", count, spec.id().c_str(), out_dir.c_str());
    return 0;
}

int cmd_train(const GenOptions& gen, TrainConfig cfg, const std::string& out_file,
              const std::string& destroy_text) {
    GeneratorSpec spec = gen.build();
    cfg.destroy = parse_destroy_spec(destroy_text);
    cfg.distribution = spec.id();
    cfg.variant = spec.variant;
    if (cfg.checkpoint_path.empty()) cfg.checkpoint_path = out_file + ".ckpt";
    auto sampler = [spec](Rng& rng) { return generate_instance(spec, rng); };
    PolicyParameters params = train_operator(cfg, sampler, &std::cerr);
    save_policy(out_file, params, operator_metadata(cfg));
    std::printf("operator written to %s\n", out_file.c_str());
    return 0;
}

std::vector<OperatorPair> build_pairs(const std::vector<std::string>& op_files, bool handcrafted,
                                      bool random_rep) {
    if (handcrafted) return pairs_for(std::make_shared<HandcraftedRepair>());
    if (random_rep) return pairs_for(std::make_shared<RandomRepair>());
    if (op_files.empty())
        throw std::runtime_error("pass --ops <files> or choose --handcrafted / --random-repair");
    return load_learned_pairs(op_files);
}

Instance load_instance(const std::string& path, const std::string& variant,
                       const std::string& rounding) {
    Instance inst = parse_instance(path);
    std::optional<Variant> v;
    std::optional<CostRounding> r;
    if (!variant.empty()) v = variant == "sdvrp" ? Variant::SDVRP : Variant::CVRP;
    if (!rounding.empty())
        r = rounding == "nearest" ? CostRounding::NearestInteger : CostRounding::Exact;
    if (v || r) return with_modes(inst, v, r);
    return inst;
}

int cmd_solve(const std::string& instance_path, const std::vector<std::string>& op_files,
              bool handcrafted, bool random_rep, const BudgetOptions& budget, SearchConfig cfg,
              const std::string& variant, const std::string& rounding, const std::string& out,
              const std::string& log_path) {
    Instance inst = load_instance(instance_path, variant, rounding);
    auto pairs = build_pairs(op_files, handcrafted, random_rep);
    budget.apply(cfg);

    std::ofstream log;
    IterationLog sink;
    if (!log_path.empty()) {
        log.open(log_path);
        if (!log) throw std::runtime_error("cannot open " + log_path);
        sink = [&log](const IterationStat& st) {
            nlohmann::json rec;
            rec["iteration"] = st.iteration;
            rec["temperature"] = st.temperature;
            rec["pair"] = st.pair;
            rec["batch_best"] = st.batch_best;
            rec["incumbent"] = st.incumbent;
            rec["accepted"] = st.accepted;
            rec["reheats_done"] = st.reheats_done;
            log << rec.dump() << "\n";
        };
    }

    auto t0 = std::chrono::steady_clock::now();
    Solution best = parallel_single_search(inst, pairs, cfg, sink);
    double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    auto report = validate(inst, best);
    if (!report.ok()) {
        std::fprintf(stderr, "internal error: infeasible result\n%s", report.to_string().c_str());
        return 2;
    }
    std::printf("cost %.17g tours %zu\n", best.cost, best.tours.size());
    std::fprintf(stderr, "wall %.2fs\n", wall);
    if (!out.empty()) write_solution(inst, best, out);
    return 0;
}

int cmd_solve_batch(const std::string& dir, const std::vector<std::string>& op_files,
                    bool handcrafted, bool random_rep, const BudgetOptions& budget,
                    SearchConfig cfg, const std::string& variant, const std::string& rounding,
                    const std::string& out_dir, const std::string& hash) {
    auto files = instance_files(dir);
    std::vector<Instance> instances;
    for (const auto& f : files) instances.push_back(load_instance(f.string(), variant, rounding));
    auto pairs = build_pairs(op_files, handcrafted, random_rep);
    budget.apply(cfg);

    auto t0 = std::chrono::steady_clock::now();
    auto solutions = batch_search(instances, pairs, cfg);
    double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    double mean = 0;
    std::vector<RunRecord> records;
    for (size_t i = 0; i < solutions.size(); ++i) {
        if (!validate(instances[i], solutions[i]).ok())
            throw std::logic_error("infeasible result for " + files[i].string());
        mean += solutions[i].cost / static_cast<double>(solutions.size());
        if (!out_dir.empty()) {
            fs::create_directories(out_dir);
            write_solution(instances[i], solutions[i],
                           (fs::path(out_dir) / (files[i].stem().string() + ".sol")).string());
        }
        records.push_back({files[i].stem().string(), cfg.seed, "nlns", solutions[i].cost,
                           solve_wall(budget, wall), hash});
    }
    if (!out_dir.empty())
        write_run_records(records, (fs::path(out_dir) / "records.csv").string());
    std::printf("instances %zu mean cost %.17g\n", solutions.size(), mean);
    std::fprintf(stderr, "wall %.2fs\n", wall);
    return 0;
}

int cmd_bench(const std::string& dir, const std::vector<std::string>& op_files,
              const BudgetOptions& budget, SearchConfig cfg, const std::string& variant,
              const std::string& rounding, const std::string& out_dir, const std::string& hash) {
    auto files = instance_files(dir);
    std::vector<Instance> instances;
    for (const auto& f : files) instances.push_back(load_instance(f.string(), variant, rounding));
    budget.apply(cfg);
    fs::create_directories(out_dir);

    struct Method {
        std::string name;
        std::vector<OperatorPair> pairs;
    };
    std::vector<Method> methods;
    if (!op_files.empty()) methods.push_back({"nlns", load_learned_pairs(op_files)});
    methods.push_back({"handcrafted", pairs_for(std::make_shared<HandcraftedRepair>())});
    methods.push_back({"random", pairs_for(std::make_shared<RandomRepair>())});

    std::vector<RunRecord> records;
    std::map<std::string, double> means;

    double greedy_mean = 0;
    for (size_t i = 0; i < instances.size(); ++i) {
        Solution g = greedy_construct(instances[i]);
        greedy_mean += g.cost / static_cast<double>(instances.size());
        records.push_back({files[i].stem().string(), cfg.seed, "greedy", g.cost, 0.0, hash});
    }
    means["greedy"] = greedy_mean;

    for (const auto& method : methods) {
        auto t0 = std::chrono::steady_clock::now();
        auto solutions = batch_search(instances, method.pairs, cfg);
        double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        double mean = 0;
        for (size_t i = 0; i < solutions.size(); ++i) {
            if (!validate(instances[i], solutions[i]).ok())
                throw std::logic_error("infeasible result from " + method.name);
            mean += solutions[i].cost / static_cast<double>(solutions.size());
            records.push_back({files[i].stem().string(), cfg.seed, method.name, solutions[i].cost,
                               solve_wall(budget, wall), hash});
        }
        means[method.name] = mean;
        std::fprintf(stderr, "%s done in %.1fs\n", method.name.c_str(), wall);
    }

    write_run_records(records, (fs::path(out_dir) / "records.csv").string());
    std::ofstream summary((fs::path(out_dir) / "summary.txt").string());
    std::printf("%-14s %12s\n", "method", "mean cost");
    summary << "method,mean_cost\n";
    for (const auto& [name, mean] : means) {
        std::printf("%-14s %12.4f\n", name.c_str(), mean);
        char line[128];
        std::snprintf(line, sizeof(line), "%s,%.17g\n", name.c_str(), mean);
        summary << line;
    }
    return 0;
}

int cmd_validate(const std::string& instance_path, const std::string& solution_path,
                 const std::string& variant, const std::string& rounding) {
    Instance inst = load_instance(instance_path, variant, rounding);
    Solution sol = read_solution(solution_path);
    auto report = validate(inst, sol);
    if (report.ok()) {
        std::printf("ok cost %.17g tours %zu\n", sol.cost, sol.tours.size());
        return 0;
    }
    std::printf("INVALID\n%s", report.to_string().c_str());
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"neural large neighborhood search for the CVRP and SDVRP"};
    app.require_subcommand(1);

    std::string hash = config_hash(join_args(argc, argv));

    auto* gen_cmd = app.add_subcommand("generate", "sample instances from a distribution");
    GenOptions gen_opt;
    add_gen_options(gen_cmd, gen_opt);
    std::string gen_out = "instances";
    int gen_count = 100;
    uint64_t gen_seed = 1;
    std::string gen_format = "native";
    gen_cmd->add_option("--out", gen_out, "output directory");
    gen_cmd->add_option("--count", gen_count, "number of instances");
    gen_cmd->add_option("--seed", gen_seed, "random seed");
    gen_cmd->add_option("--format", gen_format, "native or tsplib")
        ->check(CLI::IsMember({"native", "tsplib"}));

    auto* train_cmd = app.add_subcommand("train", "train a repair operator");
    GenOptions train_gen;
    add_gen_options(train_cmd, train_gen);
    TrainConfig train_cfg;
    std::string train_out = "operator.op";
    std::string train_destroy = "point:0.2";
    train_cmd->add_option("--out", train_out, "operator output file");
    train_cmd->add_option("--destroy", train_destroy, "destroy operator, e.g. point:0.2");
    train_cmd->add_option("--batches", train_cfg.batches, "training batches");
    train_cmd->add_option("--batch-size", train_cfg.batch_size, "instances per batch");
    train_cmd->add_option("--lr", train_cfg.lr, "learning rate");
    train_cmd->add_option("--hidden", train_cfg.hidden, "model width");
    train_cmd->add_option("--seed", train_cfg.seed, "random seed");
    train_cmd->add_option("--workers", train_cfg.workers, "rollout threads");
    train_cmd->add_option("--iters-per-instance", train_cfg.iterations_per_instance,
                          "destroy-repair rounds per sampled instance");
    train_cmd->add_option("--checkpoint", train_cfg.checkpoint_path, "checkpoint file");
    train_cmd->add_option("--checkpoint-every", train_cfg.checkpoint_every, "cadence in batches");
    train_cmd->add_option("--grad-clip", train_cfg.grad_clip, "gradient norm clip (0 = off)");
    train_cmd->add_option("--log", train_cfg.log_path, "JSONL training log");

    auto add_solver_options = [](CLI::App* cmd, std::vector<std::string>& ops, bool& hc, bool& rnd,
                                 BudgetOptions& budget, SearchConfig& cfg, std::string& variant,
                                 std::string& rounding) {
        cmd->add_option("--ops", ops, "trained operator files")->delimiter(',');
        cmd->add_flag("--handcrafted", hc, "use the handcrafted insertion repair");
        cmd->add_flag("--random-repair", rnd, "use the uniform-random repair");
        add_budget_options(cmd, budget);
        cmd->add_option("--seed", cfg.seed, "random seed");
        cmd->add_option("--workers", cfg.workers, "parallel workers");
        cmd->add_option("--batch", cfg.batch_size, "solution copies per search loop");
        cmd->add_option("--reheats", cfg.reheats, "reheat count (-1 = by instance size)");
        cmd->add_option("--variant", variant, "override: cvrp or sdvrp")
            ->check(CLI::IsMember({"cvrp", "sdvrp"}));
        cmd->add_option("--rounding", rounding, "override: exact or nearest")
            ->check(CLI::IsMember({"exact", "nearest"}));
    };

    auto* solve_cmd = app.add_subcommand("solve", "single-instance search");
    std::string solve_instance;
    std::vector<std::string> solve_ops;
    bool solve_hc = false, solve_rnd = false;
    BudgetOptions solve_budget;
    SearchConfig solve_cfg;
    std::string solve_variant, solve_rounding, solve_out, solve_log;
    solve_cmd->add_option("--instance", solve_instance, "instance file")->required();
    add_solver_options(solve_cmd, solve_ops, solve_hc, solve_rnd, solve_budget, solve_cfg,
                       solve_variant, solve_rounding);
    solve_cmd->add_option("--out", solve_out, "solution output file");
    solve_cmd->add_option("--log", solve_log, "JSONL iteration log");

    auto* batch_cmd = app.add_subcommand("solve-batch", "batch search over a directory");
    std::string batch_dir;
    std::vector<std::string> batch_ops;
    bool batch_hc = false, batch_rnd = false;
    BudgetOptions batch_budget;
    SearchConfig batch_cfg;
    std::string batch_variant, batch_rounding, batch_out;
    batch_cmd->add_option("--dir", batch_dir, "instance directory")->required();
    add_solver_options(batch_cmd, batch_ops, batch_hc, batch_rnd, batch_budget, batch_cfg,
                       batch_variant, batch_rounding);
    batch_cmd->add_option("--out", batch_out, "output directory for solutions and records");

    auto* bench_cmd = app.add_subcommand("bench", "learned vs handcrafted vs random vs greedy");
    std::string bench_dir, bench_out = "bench-out";
    std::vector<std::string> bench_ops;
    bool bench_hc = false, bench_rnd = false;
    BudgetOptions bench_budget;
    SearchConfig bench_cfg;
    std::string bench_variant, bench_rounding;
    bench_cmd->add_option("--dir", bench_dir, "instance directory")->required();
    add_solver_options(bench_cmd, bench_ops, bench_hc, bench_rnd, bench_budget, bench_cfg,
                       bench_variant, bench_rounding);
    bench_cmd->add_option("--out", bench_out, "output directory");

    auto* val_cmd = app.add_subcommand("validate", "check a solution file against its instance");
    std::string val_instance, val_solution, val_variant, val_rounding;
    val_cmd->add_option("--instance", val_instance, "instance file")->required();
    val_cmd->add_option("--solution", val_solution, "solution file")->required();
    val_cmd->add_option("--variant", val_variant, "override: cvrp or sdvrp")
        ->check(CLI::IsMember({"cvrp", "sdvrp"}));
    val_cmd->add_option("--rounding", val_rounding, "override: exact or nearest")
        ->check(CLI::IsMember({"exact", "nearest"}));

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen_cmd->parsed()) {
            std::printf("config %s seed %llu\n", hash.c_str(),
                        static_cast<unsigned long long>(gen_seed));
            return cmd_generate(gen_opt, gen_out, gen_count, gen_seed, gen_format);
        }
        if (train_cmd->parsed()) {
            std::printf("config %s seed %llu\n", hash.c_str(),
                        static_cast<unsigned long long>(train_cfg.seed));
            return cmd_train(train_gen, train_cfg, train_out, train_destroy);
        }
        if (solve_cmd->parsed()) {
            std::printf("config %s seed %llu\n", hash.c_str(),
                        static_cast<unsigned long long>(solve_cfg.seed));
            return cmd_solve(solve_instance, solve_ops, solve_hc, solve_rnd, solve_budget,
                             solve_cfg, solve_variant, solve_rounding, solve_out, solve_log);
        }
        if (batch_cmd->parsed()) {
            std::printf("config %s seed %llu\n", hash.c_str(),
                        static_cast<unsigned long long>(batch_cfg.seed));
            return cmd_solve_batch(batch_dir, batch_ops, batch_hc, batch_rnd, batch_budget,
                                   batch_cfg, batch_variant, batch_rounding, batch_out, hash);
        }
        if (bench_cmd->parsed()) {
            std::printf("config %s seed %llu\n", hash.c_str(),
                        static_cast<unsigned long long>(bench_cfg.seed));
            return cmd_bench(bench_dir, bench_ops, bench_budget, bench_cfg, bench_variant,
                             bench_rounding, bench_out, hash);
        }
        if (val_cmd->parsed()) {
            std::printf("config %s\n", hash.c_str());
            return cmd_validate(val_instance, val_solution, val_variant, val_rounding);
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
