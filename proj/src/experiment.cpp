// Copyright 2026 The dilp2 Authors
// SPDX-License-Identifier: Apache-2.0

#include "dilp/experiment.hpp"

#include <omp.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace dilp {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::vector<double> number_list(const json& j, const char* key) {
  std::vector<double> out;
  if (!j.contains(key)) return out;
  for (const auto& v : j.at(key)) out.push_back(v.is_null() ? NAN : v.get<double>());
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void apply_train(TrainConfig& c, const json& j) {
  for (const auto& [key, v] : j.items()) {
    if (key == "max_steps") c.max_steps = v.get<int>();
    else if (key == "early_stop_loss") c.early_stop_loss = v.get<double>();
    else if (key == "early_stop_every") c.early_stop_every = v.get<int>();
    else if (key == "infer_steps") c.infer_steps = v.get<int>();
    else if (key == "batch_probability") c.batch_probability = v.get<double>();
    else if (key == "optimizer") c.optimizer = v.get<std::string>();
    else if (key == "learning_rate") c.adam.learning_rate = v.get<double>();
    else if (key == "beta1") c.adam.beta1 = v.get<double>();
    else if (key == "beta2") c.adam.beta2 = v.get<double>();
    else if (key == "init_stddev") c.init_stddev = v.get<double>();
    else if (key == "weight_mode") c.weight_mode = parse_weight_mode(v.get<std::string>());
    else if (key == "tnorm_and") c.tnorms.and_literal = parse_tnorm(v.get<std::string>());
    else if (key == "tnorm_exists") c.tnorms.or_exists = parse_tnorm(v.get<std::string>());
    else if (key == "tnorm_clausal") c.tnorms.or_clausal = parse_tnorm(v.get<std::string>());
    else if (key == "tnorm_step") c.tnorms.or_step = parse_tnorm(v.get<std::string>());
    else if (key == "log_every") c.log_every = v.get<int>();
    else throw Error("unknown train option: " + key);
  }
}

json train_json(const TrainConfig& c) {
  return {{"max_steps", c.max_steps},
          {"early_stop_loss", c.early_stop_loss},
          {"early_stop_every", c.early_stop_every},
          {"infer_steps", c.infer_steps},
          {"batch_probability", c.batch_probability},
          {"optimizer", c.optimizer},
          {"learning_rate", c.adam.learning_rate},
          {"beta1", c.adam.beta1},
          {"beta2", c.adam.beta2},
          {"init_stddev", c.init_stddev},
          {"weight_mode", std::string(to_string(c.weight_mode))},
          {"tnorm_and", std::string(to_string(c.tnorms.and_literal))},
          {"tnorm_exists", std::string(to_string(c.tnorms.or_exists))},
          {"tnorm_clausal", std::string(to_string(c.tnorms.or_clausal))},
          {"tnorm_step", std::string(to_string(c.tnorms.or_step))},
          {"log_every", c.log_every}};
}

}  // namespace

void apply_train_overrides(TrainConfig& config, const std::string& json_text) {
  apply_train(config, json::parse(json_text));
}

ExperimentConfig parse_experiment_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(std::string("bad sweep config: ") + e.what());
  }
  ExperimentConfig c;
  c.task = j.at("task").get<std::string>();
  if (!is_known_task(c.task)) throw Error("unknown task: " + c.task);
  c.templates = j.at("templates").get<std::vector<int>>();
  const auto& seeds = j.at("seeds");
  if (seeds.is_number_integer()) {
    const auto start = j.value("seed_start", std::uint64_t{0});
    for (std::uint64_t s = 0; s < seeds.get<std::uint64_t>(); ++s) c.seeds.push_back(start + s);
  } else {
    c.seeds = seeds.get<std::vector<std::uint64_t>>();
  }
  if (j.contains("train")) apply_train(c.train, j["train"]);
  if (j.contains("train_size") || j.contains("test_size")) {
    TaskSpec s = default_spec(c.task);
    s.train_size = j.value("train_size", s.train_size);
    s.test_size = j.value("test_size", s.test_size);
    c.spec = s;
  }
  c.threshold = j.value("threshold", 0.5);
  c.output_dir = j.value("output", std::string());
  c.save_checkpoints = j.value("save_checkpoints", true);
  c.workers = j.value("workers", 0);
  return c;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  return parse_experiment_config(read_file(path));
}

std::string experiment_config_json(const ExperimentConfig& c) {
  const TaskSpec spec = c.spec ? *c.spec : default_spec(c.task);
  json j = {{"task", c.task},
            {"templates", c.templates},
            {"seeds", c.seeds},
            {"train", train_json(c.train)},
            {"train_size", spec.train_size},
            {"test_size", spec.test_size},
            {"threshold", c.threshold},
            {"output", c.output_dir},
            {"save_checkpoints", c.save_checkpoints},
            {"workers", c.workers}};
  return j.dump(2);
}

std::string make_run_id(const std::string& task, int templates, std::uint64_t seed) {
  return task + "-t" + std::to_string(templates) + "-s" + std::to_string(seed);
}

std::string record_to_json(const RunRecord& r) {
  json j = {{"run_id", r.run_id},
            {"task", r.task},
            {"templates", r.templates},
            {"seed", r.seed},
            {"train_size", r.spec.train_size},
            {"test_size", r.spec.test_size},
            {"weight_mode", std::string(to_string(r.weight_mode))},
            {"outcome", std::string(to_string(r.outcome.category))},
            {"C", r.outcome.c},
            {"F", r.outcome.f},
            {"CT", r.outcome.ct},
            {"FT", r.outcome.ft},
            {"steps", r.steps},
            {"final_loss", r.final_loss},
            {"stop_reason", r.stop_reason},
            {"error", r.error},
            {"losses", r.losses},
            {"full_losses", r.full_losses},
            {"program", r.program},
            {"seconds", r.seconds}};
  return j.dump();
}

RunRecord record_from_json(const std::string& line) {
  const json j = json::parse(line);
  RunRecord r;
  r.run_id = j.at("run_id").get<std::string>();
  r.task = j.at("task").get<std::string>();
  r.templates = j.at("templates").get<int>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.spec = {r.task, j.at("train_size").get<int>(), j.at("test_size").get<int>()};
  r.weight_mode = parse_weight_mode(j.at("weight_mode").get<std::string>());
  r.outcome.category = parse_category(j.at("outcome").get<std::string>());
  r.outcome.c = j.at("C").get<bool>();
  r.outcome.f = j.at("F").get<bool>();
  r.outcome.ct = j.at("CT").get<bool>();
  r.outcome.ft = j.at("FT").get<bool>();
  r.steps = j.at("steps").get<int>();
  r.final_loss = j.at("final_loss").is_null() ? NAN : j.at("final_loss").get<double>();
  r.stop_reason = j.at("stop_reason").get<std::string>();
  r.error = j.value("error", std::string());
  r.losses = number_list(j, "losses");
  r.full_losses = number_list(j, "full_losses");
  r.program = j.value("program", std::string());
  r.seconds = j.value("seconds", 0.0);
  return r;
}

std::vector<RunRecord> load_records(const std::string& results_dir) {
  const std::string path = (fs::path(results_dir) / "runs.jsonl").string();
  std::ifstream in(path);
  if (!in) throw Error("no run records in " + results_dir);
  std::vector<RunRecord> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) out.push_back(record_from_json(line));
  }
  return out;
}

RunRecord run_single(const Task& task, const TaskSpec& spec, const CompiledTask& compiled,
                     int templates, std::uint64_t seed, const TrainConfig& train_config,
                     double threshold, WeightStore* weights_out) {
  RunRecord r;
  r.run_id = make_run_id(task.name, templates, seed);
  r.task = task.name;
  r.templates = templates;
  r.seed = seed;
  r.spec = spec;
  r.weight_mode = train_config.weight_mode;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    TrainConfig cfg = train_config;
    cfg.seed = seed;
    TrainResult res = train(compiled.train, cfg);
    r.steps = res.steps_used;
    r.final_loss = res.final_loss();
    r.stop_reason = std::string(to_string(res.stop_reason));
    r.losses = res.losses;
    r.full_losses = res.full_losses;
    const Program prog = extract_program(res.weights, compiled.train.model);
    r.program = format_program(prog, compiled.train.model.language);
    if (res.diverged()) {
      r.outcome = Outcome{};
    } else {
      EvalConfig ec{cfg.infer_steps, threshold, cfg.tnorms};
      r.outcome = classify_outcome(res.weights, prog, compiled.train, compiled.test, ec);
    }
    if (weights_out) *weights_out = std::move(res.weights);
  } catch (const std::exception& e) {
    r.error = e.what();
    r.outcome = Outcome{};
    r.stop_reason = "error";
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

int worker_count(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("DILP_WORKERS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<RunRecord> run_experiment(const ExperimentConfig& config, const ProgressFn& progress) {
  const TaskSpec spec = config.spec ? *config.spec : default_spec(config.task);
  const Task task = generate_task(spec);

  std::ofstream log;
  if (!config.output_dir.empty()) {
    const fs::path dir(config.output_dir);
    fs::create_directories(dir / "tasks");
    if (config.save_checkpoints) fs::create_directories(dir / "checkpoints");
    std::ofstream(dir / "config.json") << experiment_config_json(config) << '\n';
    std::ofstream tf(dir / "tasks" / (task.name + ".task"));
    write_task_file(task, tf);
    log.open(dir / "runs.jsonl", std::ios::app);
  }

  // Compiled domains are shared read-only by all runs of a template count.
  std::map<int, CompiledTask> compiled;
  for (int t : config.templates) {
    if (!compiled.count(t)) {
      compiled.emplace(t, compile_task(task, t, options_for(config.train.weight_mode,
                                                            config.train.prune)));
    }
  }

  struct Job {
    int templates;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (int t : config.templates)
    for (auto s : config.seeds) jobs.push_back({t, s});

  std::vector<RunRecord> records(jobs.size());
  std::mutex writer;
  std::atomic<std::size_t> next{0};
  const int workers = std::min<int>(worker_count(config.workers), static_cast<int>(jobs.size()));
  auto work = [&] {
    // Runs in parallel use one kernel thread each.
    if (workers > 1) omp_set_num_threads(1);
    for (std::size_t i; (i = next++) < jobs.size();) {
      const Job& job = jobs[i];
      WeightStore weights;
      RunRecord r = run_single(task, spec, compiled.at(job.templates), job.templates, job.seed,
                               config.train, config.threshold, &weights);
      std::lock_guard<std::mutex> lock(writer);
      if (log.is_open()) {
        log << record_to_json(r) << '\n';
        log.flush();
        if (config.save_checkpoints && r.error.empty()) {
          save_weights(weights,
                       (fs::path(config.output_dir) / "checkpoints" / (r.run_id + ".w")).string());
        }
      }
      if (progress) progress(r);
      records[i] = std::move(r);
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  return records;
}

double CellSummary::percent(Category c) const {
  if (runs == 0) return 0.0;
  const auto it = counts.find(c);
  return 100.0 * static_cast<double>(it == counts.end() ? 0 : it->second) /
         static_cast<double>(runs);
}

std::vector<CellSummary> summarize(const std::vector<RunRecord>& records) {
  std::vector<CellSummary> cells;
  for (const auto& r : records) {
    auto it = std::find_if(cells.begin(), cells.end(), [&](const CellSummary& c) {
      return c.task == r.task && c.templates == r.templates;
    });
    if (it == cells.end()) {
      cells.push_back({r.task, r.templates, 0, {}, 0, 0});
      it = cells.end() - 1;
    }
    it->runs += 1;
    it->counts[r.outcome.category] += 1;
    it->c_flags += r.outcome.c ? 1 : 0;
    it->cf_flags += (r.outcome.c || r.outcome.f) ? 1 : 0;
  }
  std::stable_sort(cells.begin(), cells.end(), [](const CellSummary& a, const CellSummary& b) {
    return a.task != b.task ? a.task < b.task : a.templates < b.templates;
  });
  return cells;
}

}  // namespace dilp
