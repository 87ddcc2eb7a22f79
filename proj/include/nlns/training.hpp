#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "nlns/adam.hpp"
#include "nlns/critic.hpp"
#include "nlns/destroy.hpp"
#include "nlns/params_io.hpp"
#include "nlns/repair_state.hpp"

namespace nlns {

// One sampled repair episode: per-step traces (kept when gradients are
// needed) and the repaired solution.
struct EpisodeTrace {
    std::vector<StepTrace> steps;
    Solution final_solution;
    double log_prob = 0;
};

// Runs the repair loop with the given policy until no fragment remains.
EpisodeTrace rollout_repair(RepairState state, const PolicyParameters& policy, Rng& rng,
                            bool keep_traces = true);

// Cost added by repairing: cost(repaired) - cost(destroyed). Nonnegative,
// since repairing only ever adds edges.
double repair_loss(const Instance& instance, const DestroyedSolution& destroyed,
                   const Solution& repaired);

// Gradient of sum_t weights[t] * log p(a_t) accumulated over an episode.
void episode_backward(const PolicyParameters& policy, const EpisodeTrace& episode,
                      const std::vector<double>& weights, PolicyParameters& grad);

struct TrainItem {
    const Instance* instance = nullptr;
    DestroyedSolution destroyed;
};

struct TrainMetrics {
    double mean_loss = 0;
    double mean_baseline = 0;
    double critic_mse = 0;
};

struct TrainStepResult {
    TrainMetrics metrics;
    std::vector<Solution> repaired;
};

// One REINFORCE step on a batch of destroyed solutions: policy update with
// advantage (loss - critic estimate), then a critic update towards the fresh
// losses. Deterministic for a fixed seed regardless of worker count.
TrainStepResult train_step(PolicyParameters& policy, CriticParameters& critic,
                           AdamState& policy_opt, AdamState& critic_opt,
                           const std::vector<TrainItem>& batch, double lr, double grad_clip,
                           uint64_t seed, int64_t batch_index, int workers);

struct TrainConfig {
    DestroyOperatorSpec destroy;
    std::string distribution;  // recorded in metadata, e.g. "uniform:20"
    Variant variant = Variant::CVRP;
    int64_t batches = 250000;
    int batch_size = 256;
    double lr = 1e-4;
    int hidden = 128;
    uint64_t seed = 1;
    int workers = 1;
    int iterations_per_instance = 1;  // destroy-repair rounds per sampled instance
    int checkpoint_every = 100;
    double grad_clip = 0;  // 0 disables clipping
    std::string checkpoint_path;
    std::string log_path;  // JSONL, one record per batch
};

using InstanceSampler = std::function<Instance(Rng&)>;

// Full training loop: sample instances, construct greedily, destroy with the
// configured operator, run train_step; checkpoints on a fixed cadence and
// resumes from checkpoint_path if that file exists.
PolicyParameters train_operator(const TrainConfig& config, const InstanceSampler& sampler,
                                std::ostream* progress = nullptr);

std::string operator_metadata(const TrainConfig& config);

}  // namespace nlns
