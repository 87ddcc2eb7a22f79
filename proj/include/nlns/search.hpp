#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "nlns/destroy.hpp"
#include "nlns/repair_policy.hpp"

namespace nlns {

// A destroy operator together with the repair policy trained for (or declared
// compatible with) it.
struct OperatorPair {
    DestroyOperatorSpec destroy;
    std::shared_ptr<const RepairOperator> repair;

    std::string id() const { return destroy.id() + "+" + repair->name(); }
};

struct SearchConfig {
    double min_temperature = 1.0;  // T_m
    double reset_fraction = 0.8;   // Z, share of the batch reset to the current solution
    int batch_size = 300;
    int reheats = -1;      // -1: 5 for instances under 200 customers, 10 otherwise
    double time_limit_s = 60;
    int64_t inner_iterations = 0;  // >0: fixed per-loop budget (deterministic mode)
    int workers = 1;        // independent search loops / instance-level parallelism
    int batch_workers = 1;  // threads over the solution batch inside one loop
    uint64_t seed = 1;
};

// per-iteration instrumentation of the single-instance search
struct IterationStat {
    int64_t iteration = 0;
    double temperature = 0;
    int pair = 0;
    double batch_best = 0;
    double incumbent = 0;
    bool accepted = false;
    int reset_count = 0;
    int reheats_done = 0;
};
using IterationLog = std::function<void(const IterationStat&)>;

// Metropolis criterion: improvements always pass, a worsening of delta passes
// with probability exp(-delta / temperature).
bool metropolis_accept(double candidate_cost, double reference_cost, double temperature, Rng& rng);

// Simulated-annealing search over a batch of copies of the incumbent, with
// reheating. Start/reheat temperatures derive from the interquartile range of
// the batch costs; the cooling factor is fitted so one inner loop spends its
// share of the budget.
Solution single_instance_search(const Instance& instance, const std::vector<OperatorPair>& pairs,
                                const SearchConfig& config, const IterationLog& log = nullptr);

// Same search run by config.workers independent loops that exchange the
// incumbent after every inner loop. workers == 1 reproduces
// single_instance_search exactly.
Solution parallel_single_search(const Instance& instance, const std::vector<OperatorPair>& pairs,
                                const SearchConfig& config, const IterationLog& log = nullptr);

// Tracks the improvement each operator pair brings to the mean batch cost,
// as an exponential moving average. Selection is greedy: untried pairs first
// (round robin), then the highest average.
class EmaTracker {
public:
    explicit EmaTracker(size_t pairs, double alpha = 0.2);

    int select() const;
    void record(int pair, double improvement);
    double value(int pair) const { return entries_[pair].value; }
    bool tried(int pair) const { return entries_[pair].tried; }

private:
    struct Entry {
        double value = 0;
        bool tried = false;
    };
    std::vector<Entry> entries_;
    double alpha_;
};

// Improvement-only search over many instances at once: one operator pair per
// iteration (EMA-selected) is applied to every solution; only strictly better
// neighbors replace their solution.
std::vector<Solution> batch_search(const std::vector<Instance>& instances,
                                   const std::vector<OperatorPair>& pairs,
                                   const SearchConfig& config);

}  // namespace nlns
