#include "nlns/training.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <stdexcept>

#include <json.hpp>

#include "nlns/parallel.hpp"

namespace nlns {

EpisodeTrace rollout_repair(RepairState state, const PolicyParameters& policy, Rng& rng,
                            bool keep_traces) {
    EpisodeTrace episode;
    while (!state.complete()) {
        int ref = state.select_reference(rng);
        auto mask = state.action_mask();
        StepTrace trace;
        Vec probs = policy_forward(policy, state.feature_rows(), mask, ref,
                                   keep_traces ? &trace : nullptr);
        int action = sample_index(probs, rng);
        double logp = std::log(probs[action]);
        if (keep_traces) {
            trace.action = action;
            trace.log_prob = logp;
            episode.steps.push_back(std::move(trace));
        }
        episode.log_prob += logp;
        state.apply_action(action);
    }
    episode.final_solution = state.take_solution();
    return episode;
}

double repair_loss(const Instance& instance, const DestroyedSolution& destroyed,
                   const Solution& repaired) {
    return solution_cost(instance, repaired) - destroyed_cost(instance, destroyed);
}

void episode_backward(const PolicyParameters& policy, const EpisodeTrace& episode,
                      const std::vector<double>& weights, PolicyParameters& grad) {
    if (weights.size() != episode.steps.size())
        throw std::invalid_argument("one weight per episode step expected");
    for (size_t t = 0; t < episode.steps.size(); ++t)
        policy_backward(policy, episode.steps[t], weights[t], grad);
}

namespace {

double grad_norm(std::vector<ParamView> views) {
    double s = 0;
    for (const auto& v : views)
        for (double x : *v.data) s += x * x;
    return std::sqrt(s);
}

void scale_grad(std::vector<ParamView> views, double factor) {
    for (const auto& v : views)
        for (double& x : *v.data) x *= factor;
}

}  // namespace

TrainStepResult train_step(PolicyParameters& policy, CriticParameters& critic,
                           AdamState& policy_opt, AdamState& critic_opt,
                           const std::vector<TrainItem>& batch, double lr, double grad_clip,
                           uint64_t seed, int64_t batch_index, int workers) {
    if (batch.empty()) throw std::invalid_argument("training batch must not be empty");
    const int n = static_cast<int>(batch.size());

    struct ItemResult {
        EpisodeTrace episode;
        CriticTrace critic_trace;
        double loss = 0;
        double baseline = 0;
        bool has_critic = false;
    };
    std::vector<ItemResult> results(n);

    // every item gets its own stream: results do not depend on worker count
    parallel_for(n, workers, [&](int i) {
        const TrainItem& item = batch[i];
        Rng rng(derive_seed(seed, static_cast<uint64_t>(batch_index) * 0x10001ULL + i), 17);
        RepairState state(*item.instance, item.destroyed);
        if (!state.complete()) {
            results[i].baseline =
                critic_forward(critic, state.feature_rows(), &results[i].critic_trace);
            results[i].has_critic = true;
        }
        results[i].episode = rollout_repair(std::move(state), policy, rng, true);
        results[i].loss =
            repair_loss(*item.instance, item.destroyed, results[i].episode.final_solution);
    });

    // gradient reduction in fixed item order
    PolicyParameters policy_grad = zeros_like(policy);
    CriticParameters critic_grad = zeros_like(critic);
    double mean_loss = 0, mean_baseline = 0, critic_mse = 0;
    for (int i = 0; i < n; ++i) {
        const ItemResult& r = results[i];
        double advantage = (r.loss - r.baseline) / n;
        std::vector<double> weights(r.episode.steps.size(), advantage);
        episode_backward(policy, r.episode, weights, policy_grad);
        if (r.has_critic)
            critic_backward(critic, r.critic_trace, 2.0 * (r.baseline - r.loss) / n, critic_grad);
        mean_loss += r.loss / n;
        mean_baseline += r.baseline / n;
        critic_mse += (r.baseline - r.loss) * (r.baseline - r.loss) / n;
    }

    if (grad_clip > 0) {
        double norm = grad_norm(param_views(policy_grad));
        if (norm > grad_clip) scale_grad(param_views(policy_grad), grad_clip / norm);
    }
    adam_step(param_views(policy), param_views(policy_grad), policy_opt, lr);
    adam_step(param_views(critic), param_views(critic_grad), critic_opt, lr);

    TrainStepResult out;
    out.metrics = {mean_loss, mean_baseline, critic_mse};
    out.repaired.reserve(n);
    for (auto& r : results) out.repaired.push_back(std::move(r.episode.final_solution));
    return out;
}

std::string operator_metadata(const TrainConfig& config) {
    nlohmann::json meta;
    meta["format"] = "nlns-operator";
    meta["destroy"] = config.destroy.id();
    meta["distribution"] = config.distribution;
    meta["variant"] = to_string(config.variant);
    meta["hidden"] = config.hidden;
    meta["seed"] = config.seed;
    meta["batches"] = config.batches;
    meta["batch_size"] = config.batch_size;
    meta["lr"] = config.lr;
    return meta.dump();
}

PolicyParameters train_operator(const TrainConfig& config, const InstanceSampler& sampler,
                                std::ostream* progress) {
    if (config.batches < 0 || config.batch_size < 1)
        throw std::invalid_argument("batch counts must be positive");
    const int k = std::max(1, config.iterations_per_instance);

    Rng init_rng(config.seed, 1);
    PolicyParameters policy = init_policy(config.hidden, init_rng);
    CriticParameters critic = init_critic(config.hidden, init_rng);
    AdamState policy_opt, critic_opt;
    int64_t start_batch = 0;

    if (!config.checkpoint_path.empty() && std::filesystem::exists(config.checkpoint_path)) {
        TrainCheckpoint ckpt = load_checkpoint(config.checkpoint_path);
        policy = std::move(ckpt.policy);
        critic = std::move(ckpt.critic);
        policy_opt = std::move(ckpt.policy_opt);
        critic_opt = std::move(ckpt.critic_opt);
        start_batch = ckpt.next_batch;
        if (progress) *progress << "resuming from batch " << start_batch << "\n";
    }

    std::ofstream log;
    if (!config.log_path.empty()) {
        log.open(config.log_path, start_batch > 0 ? std::ios::app : std::ios::out);
        if (!log) throw std::runtime_error("cannot open training log " + config.log_path);
    }

    std::vector<Instance> instances;
    std::vector<Solution> solutions;
    auto wall_start = std::chrono::steady_clock::now();

    for (int64_t b = start_batch; b < config.batches; ++b) {
        // fresh instances every k batches; in between, re-destroy the latest repairs
        if (b % k == 0 || instances.empty()) {
            instances.clear();
            solutions.clear();
            instances.reserve(config.batch_size);
            for (int i = 0; i < config.batch_size; ++i) {
                Rng rng(derive_seed(config.seed, static_cast<uint64_t>(b / k) * 0x20003ULL + i), 5);
                instances.push_back(sampler(rng));
                solutions.push_back(greedy_construct(instances.back()));
            }
        }

        std::vector<TrainItem> batch(config.batch_size);
        parallel_for(config.batch_size, config.workers, [&](int i) {
            Rng rng(derive_seed(config.seed, static_cast<uint64_t>(b) * 0x40009ULL + i), 9);
            batch[i].instance = &instances[i];
            batch[i].destroyed = apply_destroy(instances[i], solutions[i], config.destroy, rng);
        });

        TrainStepResult step = train_step(policy, critic, policy_opt, critic_opt, batch, config.lr,
                                          config.grad_clip, config.seed, b, config.workers);
        solutions = std::move(step.repaired);

        double wall =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
        if (log) {
            nlohmann::json rec;
            rec["step"] = b;
            rec["mean_loss"] = step.metrics.mean_loss;
            rec["mean_baseline"] = step.metrics.mean_baseline;
            rec["critic_mse"] = step.metrics.critic_mse;
            rec["wall_s"] = wall;
            log << rec.dump() << "\n";
        }
        if (progress && (b % 50 == 0 || b + 1 == config.batches))
            *progress << "batch " << b << " mean_loss " << step.metrics.mean_loss
                      << " baseline " << step.metrics.mean_baseline << " mse "
                      << step.metrics.critic_mse << "\n";

        bool last = b + 1 == config.batches;
        if (!config.checkpoint_path.empty() &&
            (last || (b + 1) % std::max(1, config.checkpoint_every) == 0)) {
            TrainCheckpoint ckpt;
            ckpt.policy = policy;
            ckpt.critic = critic;
            ckpt.policy_opt = policy_opt;
            ckpt.critic_opt = critic_opt;
            ckpt.next_batch = b + 1;
            ckpt.meta_json = operator_metadata(config);
            save_checkpoint(config.checkpoint_path, ckpt);
        }
    }
    return policy;
}

}  // namespace nlns
