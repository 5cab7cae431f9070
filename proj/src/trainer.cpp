// Copyright 2026 The dilp2 Authors
// SPDX-License-Identifier: Apache-2.0

#include "dilp/trainer.hpp"

#include <cmath>

namespace dilp {

std::string_view to_string(StopReason r) {
  switch (r) {
    case StopReason::early_stop: return "early_stop";
    case StopReason::max_steps: return "max_steps";
    case StopReason::diverged: return "diverged";
  }
  return "?";
}

std::vector<std::uint8_t> sample_batch(std::size_t examples, double batch_probability,
                                       std::mt19937_64& rng) {
  if (!(batch_probability > 0.0 && batch_probability <= 1.0)) {
    throw Error("batch probability must be in (0,1]");
  }
  std::bernoulli_distribution keep(batch_probability);
  std::vector<std::uint8_t> mask(examples);
  for (auto& m : mask) m = keep(rng) ? 1 : 0;
  return mask;
}

WeightStore init_weights(const WeightShape& shape, std::uint64_t seed, double stddev) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, stddev);
  WeightStore store(shape);
  for (double& w : store.params()) w = normal(rng);
  return store;
}

namespace {

class Optimizer {
 public:
  Optimizer(const TrainConfig& c, std::size_t n) : cfg_(c), m_(n, 0.0), v_(n, 0.0) {}

  void step(std::vector<double>& params, const std::vector<double>& grad) {
    const AdamConfig& a = cfg_.adam;
    if (cfg_.optimizer == "sgd") {
      for (std::size_t i = 0; i < params.size(); ++i) params[i] -= a.learning_rate * grad[i];
      return;
    }
    ++t_;
    const double c1 = 1.0 - std::pow(a.beta1, t_);
    const double c2 = 1.0 - std::pow(a.beta2, t_);
    for (std::size_t i = 0; i < params.size(); ++i) {
      m_[i] = a.beta1 * m_[i] + (1.0 - a.beta1) * grad[i];
      v_[i] = a.beta2 * v_[i] + (1.0 - a.beta2) * grad[i] * grad[i];
      params[i] -= a.learning_rate * (m_[i] / c1) / (std::sqrt(v_[i] / c2) + a.epsilon);
    }
  }

 private:
  const TrainConfig& cfg_;
  std::vector<double> m_, v_;
  int t_ = 0;
};

bool all_finite(const std::vector<double>& x) {
  for (double d : x) {
    if (!std::isfinite(d)) return false;
  }
  return true;
}

}  // namespace

TrainResult train(const CompiledDomain& domain, const TrainConfig& config, const RunLog& log) {
  if (config.optimizer != "adam" && config.optimizer != "sgd") {
    throw Error("unknown optimizer: " + config.optimizer);
  }
  const Model& model = domain.model;
  // Independent streams for initialisation and batch sampling.
  std::seed_seq seq{config.seed, std::uint64_t{0x5eed}};
  std::mt19937_64 rng(seq);

  TrainResult result;
  result.weights = init_weights(model.weight_shape(config.weight_mode), config.seed,
                                config.init_stddev);
  Optimizer opt(config, result.weights.size());
  ForwardChainer chainer(model, config.tnorms);

  for (int step = 0; step < config.max_steps; ++step) {
    const auto mask = sample_batch(domain.examples.size(), config.batch_probability, rng);
    chainer.set_weights(result.weights);
    const LossAndGradient lg =
        loss_and_gradient(chainer, domain.ev0, domain.examples, mask, config.infer_steps);
    result.losses.push_back(lg.loss);
    result.full_losses.push_back(lg.full_loss);
    result.steps_used = step + 1;
    const int done = step + 1;
    if (log && config.log_every > 0 && done % config.log_every == 0) {
      log({done, lg.loss, lg.full_loss});
    }
    if (!std::isfinite(lg.loss) || !std::isfinite(lg.full_loss) || !all_finite(lg.gradient)) {
      result.stop_reason = StopReason::diverged;
      return result;
    }
    // The loss belongs to the weights before this update, so stop before it.
    if (config.early_stop_every > 0 && done % config.early_stop_every == 0 &&
        lg.full_loss <= config.early_stop_loss) {
      result.stop_reason = StopReason::early_stop;
      return result;
    }
    opt.step(result.weights.params(), lg.gradient);
    if (!all_finite(result.weights.params())) {
      result.stop_reason = StopReason::diverged;
      return result;
    }
  }
  result.stop_reason = StopReason::max_steps;
  return result;
}

TrainResult train(const Task& task, int templates_count, const TrainConfig& config,
                  const RunLog& log) {
  const CompiledDomain domain = compile_domain(task, task.train, templates_count,
                                               options_for(config.weight_mode, config.prune));
  return train(domain, config, log);
}

}  // namespace dilp
