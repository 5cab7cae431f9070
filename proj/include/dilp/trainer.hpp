// Copyright 2026 The dilp2 Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "dilp/engine.hpp"
#include "dilp/task.hpp"
#include "dilp/tnorm.hpp"
#include "dilp/weights.hpp"

namespace dilp {

struct AdamConfig {
  double learning_rate = 0.05;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct TrainConfig {
  int max_steps = 2000;
  double early_stop_loss = 1e-3;
  int early_stop_every = 10;  // full-batch loss is checked on these steps
  int infer_steps = 25;
  double batch_probability = 0.5;
  std::string optimizer = "adam";  // "adam" or "sgd"
  AdamConfig adam;
  double init_stddev = 1.0;
  std::uint64_t seed = 0;
  WeightMode weight_mode = WeightMode::per_literal;
  TNormConfig tnorms;
  PruneConfig prune;
  int log_every = 10;  // full loss in the run log every k steps (0 disables)
};

enum class StopReason : std::uint8_t { early_stop, max_steps, diverged };

std::string_view to_string(StopReason r);

struct TrainResult {
  WeightStore weights;
  std::vector<double> losses;       // sampled-batch loss, one per step
  std::vector<double> full_losses;  // full-batch loss, one per step
  int steps_used = 0;
  StopReason stop_reason = StopReason::max_steps;

  bool diverged() const { return stop_reason == StopReason::diverged; }
  double final_loss() const { return full_losses.empty() ? 0.0 : full_losses.back(); }
};

struct LogLine {
  int step = 0;
  double sampled_loss = 0.0;
  double full_loss = 0.0;
};
using RunLog = std::function<void(const LogLine&)>;

// Each example included independently with probability p.
std::vector<std::uint8_t> sample_batch(std::size_t examples, double batch_probability,
                                       std::mt19937_64& rng);

WeightStore init_weights(const WeightShape& shape, std::uint64_t seed, double stddev = 1.0);

// Trains on an already compiled training domain.
TrainResult train(const CompiledDomain& domain, const TrainConfig& config,
                  const RunLog& log = nullptr);

// Compiles the training domain for `templates_count` and trains.
TrainResult train(const Task& task, int templates_count, const TrainConfig& config,
                  const RunLog& log = nullptr);

}  // namespace dilp
