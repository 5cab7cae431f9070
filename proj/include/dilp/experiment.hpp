// Copyright 2026 The dilp2 Authors
// SPDX-License-Identifier: Apache-2.0

// Sweeps over template counts and seeds. A results directory holds
//   config.json            the sweep configuration
//   runs.jsonl             one record per finished run, appended in order
//   checkpoints/<id>.w     final weights of every run
//   tasks/<task>.task      the generated task file

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dilp/evaluator.hpp"
#include "dilp/tasks.hpp"
#include "dilp/trainer.hpp"

namespace dilp {

struct ExperimentConfig {
  std::string task;
  std::optional<TaskSpec> spec;  // default_spec(task) when empty
  std::vector<int> templates;
  std::vector<std::uint64_t> seeds;
  TrainConfig train;
  double threshold = 0.5;
  std::string output_dir;  // nothing is persisted when empty
  bool save_checkpoints = true;
  int workers = 0;  // 0: DILP_WORKERS, else hardware concurrency
};

// JSON sweep config, e.g.
//   {"task": "mod3", "templates": [3, 30], "seeds": 30, "seed_start": 0,
//    "train": {"max_steps": 2000, "learning_rate": 0.05, "weight_mode": "per_literal",
//              "tnorm_step": "max"},
//    "train_size": 10, "test_size": 20, "output": "results/mod3"}
// "seeds" is either a count (seeds seed_start, seed_start+1, ...) or a list.
ExperimentConfig parse_experiment_config(const std::string& json_text);
ExperimentConfig load_experiment_config(const std::string& path);
std::string experiment_config_json(const ExperimentConfig& config);

// Applies the "train" object of a sweep config (or CLI overrides) to a config.
void apply_train_overrides(TrainConfig& config, const std::string& json_text);

struct RunRecord {
  std::string run_id;
  std::string task;
  int templates = 0;
  std::uint64_t seed = 0;
  TaskSpec spec;
  WeightMode weight_mode = WeightMode::per_literal;
  Outcome outcome;
  int steps = 0;
  double final_loss = 0.0;
  std::string stop_reason;
  std::string error;  // set when the run threw; the outcome is then FAIL
  std::vector<double> losses;
  std::vector<double> full_losses;
  std::string program;
  double seconds = 0.0;
};

std::string make_run_id(const std::string& task, int templates, std::uint64_t seed);

std::string record_to_json(const RunRecord& record);
RunRecord record_from_json(const std::string& line);

std::vector<RunRecord> load_records(const std::string& results_dir);

// Trains and classifies one run against already compiled domains. Never
// throws: errors become a FAIL record.
RunRecord run_single(const Task& task, const TaskSpec& spec, const CompiledTask& compiled,
                     int templates, std::uint64_t seed, const TrainConfig& train,
                     double threshold, WeightStore* weights_out = nullptr);

int worker_count(int requested);

using ProgressFn = std::function<void(const RunRecord&)>;

// Runs every (templates, seed) cell of the sweep and returns the records in
// (templates, seed) order.
std::vector<RunRecord> run_experiment(const ExperimentConfig& config,
                                      const ProgressFn& progress = nullptr);

// Counts per category for one (task, templates) cell.
struct CellSummary {
  std::string task;
  int templates = 0;
  std::size_t runs = 0;
  std::map<Category, std::size_t> counts;
  std::size_t c_flags = 0;   // runs with the C flag set
  std::size_t cf_flags = 0;  // runs with the C or F flag set

  double percent(Category c) const;
};

std::vector<CellSummary> summarize(const std::vector<RunRecord>& records);

}  // namespace dilp
