#pragma once

#include <string>

#include "nlns/adam.hpp"
#include "nlns/critic.hpp"
#include "nlns/policy_net.hpp"

namespace nlns {

// Versioned little-endian binary container for parameter tensors. The file
// records the hidden width and a free-form JSON metadata blob (problem
// class, destroy operator, seed, ...), so an operator file is self-sufficient
// for inference. load(save(p)) reproduces p bit for bit.
void save_policy(const std::string& path, const PolicyParameters& p, const std::string& meta_json);
PolicyParameters load_policy(const std::string& path, std::string* meta_json = nullptr);

// Full training state, enough to resume an interrupted run.
struct TrainCheckpoint {
    PolicyParameters policy;
    CriticParameters critic;
    AdamState policy_opt;
    AdamState critic_opt;
    int64_t next_batch = 0;
    std::string meta_json;
};

void save_checkpoint(const std::string& path, const TrainCheckpoint& ckpt);
TrainCheckpoint load_checkpoint(const std::string& path);

}  // namespace nlns
