#include "nlns/search.hpp"

#include <algorithm>
#include <barrier>
#include <chrono>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "nlns/parallel.hpp"

namespace nlns {

bool metropolis_accept(double candidate_cost, double reference_cost, double temperature, Rng& rng) {
    if (temperature <= 0) throw std::invalid_argument("temperature must be positive");
    if (candidate_cost <= reference_cost) return true;
    return rng.uniform() < std::exp(-(candidate_cost - reference_cost) / temperature);
}

EmaTracker::EmaTracker(size_t pairs, double alpha) : entries_(pairs), alpha_(alpha) {
    if (pairs == 0) throw std::invalid_argument("tracker needs at least one operator pair");
}

int EmaTracker::select() const {
    for (size_t i = 0; i < entries_.size(); ++i)
        if (!entries_[i].tried) return static_cast<int>(i);  // warm-up round robin
    int best = 0;
    for (size_t i = 1; i < entries_.size(); ++i)
        if (entries_[i].value > entries_[best].value) best = static_cast<int>(i);
    return best;
}

void EmaTracker::record(int pair, double improvement) {
    Entry& e = entries_[pair];
    e.value = e.tried ? (1.0 - alpha_) * e.value + alpha_ * improvement : improvement;
    e.tried = true;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

// guarded exchange point for the incumbent solution
class IncumbentBoard {
public:
    explicit IncumbentBoard(const Instance& instance) : instance_(instance) {}

    void offer(const Solution& s) {
        if (!validate(instance_, s).ok())
            throw std::logic_error("refusing to publish an infeasible incumbent");
        std::lock_guard lock(mu_);
        if (!best_ || s.cost < best_->cost) best_ = std::make_shared<Solution>(s);
    }

    std::shared_ptr<const Solution> best() const {
        std::lock_guard lock(mu_);
        return best_;
    }

private:
    const Instance& instance_;
    mutable std::mutex mu_;
    std::shared_ptr<const Solution> best_;
};

struct WorkerSetup {
    const Instance* instance;
    const std::vector<OperatorPair>* pairs;
    const SearchConfig* config;
    IterationLog log;  // only worker 0 reports
    IncumbentBoard* board;
    std::function<void()> loop_sync;  // barrier in deterministic mode, else empty
    int worker_id = 0;
    Clock::time_point t_start;
};

int reheat_budget(const SearchConfig& config, const Instance& instance) {
    if (config.reheats >= 0) return config.reheats;
    return instance.num_customers() < 200 ? 5 : 10;
}

// start/reheat temperature from the spread of the batch costs
double temperature_from_batch(std::vector<double> costs, double current_cost, double t_min) {
    std::sort(costs.begin(), costs.end());
    size_t n = costs.size();
    double iqr = costs[(3 * (n - 1)) / 4] - costs[(n - 1) / 4];
    double base = iqr > 0 ? iqr : 0.01 * current_cost;
    return std::max(base, t_min + 1.0);
}

Solution run_search_worker(const WorkerSetup& setup) {
    const Instance& instance = *setup.instance;
    const std::vector<OperatorPair>& pairs = *setup.pairs;
    const SearchConfig& config = *setup.config;
    const bool timed = config.inner_iterations <= 0;
    const int loops = reheat_budget(config, instance) + 1;
    const int batch_size = std::max(1, config.batch_size);
    const int reset_count =
        static_cast<int>(std::ceil(config.reset_fraction * batch_size));

    Rng rng(config.seed, 101 + static_cast<uint64_t>(setup.worker_id));
    Solution incumbent = greedy_construct(instance);
    Solution current = incumbent;
    if (setup.board) setup.board->offer(incumbent);

    auto deadline_reached = [&] {
        return timed && seconds_since(setup.t_start) >= config.time_limit_s;
    };

    int64_t iteration = 0;
    double avg_iter_s = 0;
    int64_t timed_iters = 0;

    for (int loop = 0; loop < loops; ++loop) {
        if (deadline_reached()) break;
        const bool last_loop = loop + 1 == loops;

        std::vector<Solution> batch(batch_size, incumbent);
        double temperature = 0;
        double cooling = 1.0;
        int64_t inner = 0;

        while (true) {
            if (timed && deadline_reached()) break;
            if (!timed && inner >= config.inner_iterations) break;

            auto iter_t0 = Clock::now();
            int pair_index = rng.uniform_int(0, static_cast<int>(pairs.size()) - 1);
            const OperatorPair& pair = pairs[pair_index];

            uint64_t iter_stream = derive_seed(config.seed, (static_cast<uint64_t>(setup.worker_id) << 40) ^
                                                                static_cast<uint64_t>(iteration));
            parallel_for(batch_size, config.batch_workers, [&](int j) {
                Rng entry_rng(iter_stream, static_cast<uint64_t>(j));
                DestroyedSolution destroyed =
                    apply_destroy(instance, batch[j], pair.destroy, entry_rng);
                batch[j] = pair.repair->repair(instance, std::move(destroyed), entry_rng);
            });

            int best_j = 0;
            for (int j = 1; j < batch_size; ++j)
                if (batch[j].cost < batch[best_j].cost) best_j = j;
            const Solution& batch_best = batch[best_j];

            if (inner == 0) {
                // first repaired batch of this loop fixes T and the cooling rate
                std::vector<double> costs(batch_size);
                for (int j = 0; j < batch_size; ++j) costs[j] = batch[j].cost;
                temperature =
                    temperature_from_batch(std::move(costs), current.cost, config.min_temperature);
                double measured = std::chrono::duration<double>(Clock::now() - iter_t0).count();
                int64_t budget;
                if (timed) {
                    double remaining = config.time_limit_s - seconds_since(setup.t_start);
                    double per_loop = remaining / (loops - loop);
                    double est = avg_iter_s > 0 ? avg_iter_s : std::max(measured, 1e-6);
                    budget = std::max<int64_t>(1, static_cast<int64_t>(per_loop / est));
                } else {
                    budget = config.inner_iterations;
                }
                cooling = std::pow(config.min_temperature / temperature,
                                   1.0 / static_cast<double>(budget));
            }

            bool accepted = metropolis_accept(batch_best.cost, incumbent.cost, temperature, rng);
            if (accepted) current = batch_best;
            if (batch_best.cost < incumbent.cost) incumbent = batch_best;
            for (int j = 0; j < reset_count; ++j) batch[j] = current;

            if (setup.log && setup.worker_id == 0) {
                IterationStat stat;
                stat.iteration = iteration;
                stat.temperature = temperature;
                stat.pair = pair_index;
                stat.batch_best = batch_best.cost;
                stat.incumbent = incumbent.cost;
                stat.accepted = accepted;
                stat.reset_count = reset_count;
                stat.reheats_done = loop;
                setup.log(stat);
            }

            temperature *= cooling;
            ++inner;
            ++iteration;
            if (timed) {
                double measured = std::chrono::duration<double>(Clock::now() - iter_t0).count();
                avg_iter_s = (avg_iter_s * static_cast<double>(timed_iters) + measured) /
                             static_cast<double>(timed_iters + 1);
                ++timed_iters;
            }

            if (temperature <= config.min_temperature) {
                if (timed && last_loop && !deadline_reached()) {
                    // schedule exhausted but time remains: keep searching at
                    // the floor temperature, without further reheats
                    temperature = config.min_temperature;
                    continue;
                }
                break;
            }
        }

        // loop done; exchange the incumbent before reheating
        if (setup.board) {
            setup.board->offer(incumbent);
            if (setup.loop_sync) setup.loop_sync();
            auto global = setup.board->best();
            if (global && global->cost < incumbent.cost) incumbent = *global;
        }
    }
    if (setup.board) setup.board->offer(incumbent);
    return incumbent;
}

}  // namespace

Solution single_instance_search(const Instance& instance, const std::vector<OperatorPair>& pairs,
                                const SearchConfig& config, const IterationLog& log) {
    if (pairs.empty()) throw std::invalid_argument("at least one operator pair required");
    WorkerSetup setup;
    setup.instance = &instance;
    setup.pairs = &pairs;
    setup.config = &config;
    setup.log = log;
    setup.board = nullptr;
    setup.worker_id = 0;
    setup.t_start = Clock::now();
    return run_search_worker(setup);
}

Solution parallel_single_search(const Instance& instance, const std::vector<OperatorPair>& pairs,
                                const SearchConfig& config, const IterationLog& log) {
    if (pairs.empty()) throw std::invalid_argument("at least one operator pair required");
    const int workers = std::max(1, config.workers);
    if (workers == 1) return single_instance_search(instance, pairs, config, log);

    IncumbentBoard board(instance);
    auto t_start = Clock::now();

    // In the deterministic (iteration-budget) mode all workers run the same
    // number of loops, so exchanges can be fenced; timed mode stays
    // asynchronous.
    const bool fenced = config.inner_iterations > 0;
    std::barrier sync(workers);
    std::function<void()> loop_sync;
    if (fenced) loop_sync = [&sync] { sync.arrive_and_wait(); };

    std::vector<std::thread> threads;
    std::exception_ptr error;
    std::mutex error_mu;
    for (int w = 0; w < workers; ++w) {
        threads.emplace_back([&, w] {
            WorkerSetup setup;
            setup.instance = &instance;
            setup.pairs = &pairs;
            setup.config = &config;
            setup.log = log;
            setup.board = &board;
            setup.loop_sync = loop_sync;
            setup.worker_id = w;
            setup.t_start = t_start;
            try {
                run_search_worker(setup);
            } catch (...) {
                std::lock_guard lock(error_mu);
                if (!error) error = std::current_exception();
            }
        });
    }
    for (auto& t : threads) t.join();
    if (error) std::rethrow_exception(error);
    return *board.best();
}

std::vector<Solution> batch_search(const std::vector<Instance>& instances,
                                   const std::vector<OperatorPair>& pairs,
                                   const SearchConfig& config) {
    if (instances.empty()) throw std::invalid_argument("no instances to solve");
    if (pairs.empty()) throw std::invalid_argument("at least one operator pair required");
    const int n = static_cast<int>(instances.size());
    const bool timed = config.inner_iterations <= 0;
    auto t_start = Clock::now();

    std::vector<Solution> solutions(n);
    parallel_for(n, config.workers, [&](int i) { solutions[i] = greedy_construct(instances[i]); });

    EmaTracker tracker(pairs.size());
    int64_t iteration = 0;
    while (true) {
        if (timed) {
            if (seconds_since(t_start) >= config.time_limit_s) break;
        } else if (iteration >= config.inner_iterations) {
            break;
        }
        int pair_index = tracker.select();
        const OperatorPair& pair = pairs[pair_index];

        double old_mean = 0;
        for (const auto& s : solutions) old_mean += s.cost / n;

        uint64_t iter_stream = derive_seed(config.seed, 0x8000000000ULL ^ static_cast<uint64_t>(iteration));
        parallel_for(n, config.workers, [&](int i) {
            Rng rng(iter_stream, static_cast<uint64_t>(i));
            DestroyedSolution destroyed = apply_destroy(instances[i], solutions[i], pair.destroy, rng);
            Solution candidate = pair.repair->repair(instances[i], std::move(destroyed), rng);
            if (candidate.cost < solutions[i].cost) solutions[i] = std::move(candidate);
        });

        double new_mean = 0;
        for (const auto& s : solutions) new_mean += s.cost / n;
        tracker.record(pair_index, old_mean - new_mean);
        ++iteration;
    }
    return solutions;
}

}  // namespace nlns
