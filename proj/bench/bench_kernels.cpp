// Copyright 2026 The dilp2 Authors
// SPDX-License-Identifier: Apache-2.0

// Serial gather kernel against the parallel factored kernel on the numeric
// tasks, one forward step and one forward+backward training step.

#include <benchmark/benchmark.h>

#include <random>

#include "dilp/engine.hpp"
#include "dilp/tasks.hpp"
#include "dilp/trainer.hpp"

namespace {

using namespace dilp;

struct Setup {
  CompiledDomain domain;
  WeightStore weights;

  Setup(int templates, bool index)
      : domain(compile(templates, index)),
        weights(init_weights(domain.model.weight_shape(WeightMode::per_literal), 1)) {}

  static CompiledDomain compile(int templates, bool index) {
    const Task task = generate_task("mod3");
    ModelOptions opts;
    opts.build_index = index;
    return compile_domain(task, task.train, templates, opts);
  }
};

void BM_ReferenceStep(benchmark::State& state) {
  Setup s(static_cast<int>(state.range(0)), true);
  for (auto _ : state) {
    benchmark::DoNotOptimize(reference::forward_chain_step(s.domain.ev0, s.weights, s.domain.model, {}));
  }
}

void BM_FactoredStep(benchmark::State& state) {
  Setup s(static_cast<int>(state.range(0)), false);
  ForwardChainer fc(s.domain.model, {});
  fc.set_weights(s.weights);
  for (auto _ : state) benchmark::DoNotOptimize(fc.step(s.domain.ev0));
}

void BM_TrainingStep(benchmark::State& state) {
  Setup s(static_cast<int>(state.range(0)), false);
  ForwardChainer fc(s.domain.model, {});
  for (auto _ : state) {
    fc.set_weights(s.weights);
    benchmark::DoNotOptimize(loss_and_gradient(fc, s.domain.ev0, s.domain.examples, {}, 25));
  }
}

BENCHMARK(BM_ReferenceStep)->Arg(3)->Arg(10)->Arg(30)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FactoredStep)->Arg(3)->Arg(10)->Arg(30)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TrainingStep)->Arg(3)->Arg(10)->Arg(30)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
