// Copyright 2026 The dilp2 Authors
// SPDX-License-Identifier: Apache-2.0

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "dilp/engine.hpp"
#include "dilp/evaluator.hpp"
#include "dilp/experiment.hpp"
#include "dilp/oracle.hpp"
#include "dilp/report.hpp"
#include "dilp/tasks.hpp"
#include "dilp/trainer.hpp"

namespace fs = std::filesystem;
using namespace dilp;

namespace {

struct TaskArgs {
  std::string name;
  std::string file;
  int train_size = 0;
  int test_size = 0;

  void add(CLI::App* app) {
    app->add_option("task", name, "registry task name")->required();
    app->add_option("--task-file", file, "load the task from a task file instead");
    app->add_option("--train-size", train_size, "training domain size");
    app->add_option("--test-size", test_size, "test domain size");
  }
  TaskSpec spec() const {
    TaskSpec s = default_spec(name);
    if (train_size > 0) s.train_size = train_size;
    if (test_size > 0) s.test_size = test_size;
    return s;
  }
  Task load() const { return file.empty() ? generate_task(spec()) : load_task_file(file); }
};

void add_train_options(CLI::App* app, TrainConfig& c, std::string& mode, std::string& tn_and,
                       std::string& tn_exists, std::string& tn_clausal, std::string& tn_step) {
  app->add_option("--weight-mode", mode, "per_literal, per_clause or per_template");
  app->add_option("--tnorm-and", tn_and, "literal conjunction: max, product, lukasiewicz");
  app->add_option("--tnorm-exists", tn_exists, "disjunction over bindings");
  app->add_option("--tnorm-clausal", tn_clausal, "disjunction over clause slots");
  app->add_option("--tnorm-step", tn_step, "disjunction across inference steps");
  app->add_option("--max-steps", c.max_steps, "gradient steps")->capture_default_str();
  app->add_option("--early-stop", c.early_stop_loss, "full-batch loss target")->capture_default_str();
  app->add_option("--infer-steps", c.infer_steps, "forward-chaining steps")->capture_default_str();
  app->add_option("--batch-probability", c.batch_probability, "example inclusion probability")
      ->capture_default_str();
  app->add_option("--optimizer", c.optimizer, "adam or sgd")->capture_default_str();
  app->add_option("--lr", c.adam.learning_rate, "learning rate")->capture_default_str();
  app->add_option("--init-stddev", c.init_stddev, "normal init standard deviation")
      ->capture_default_str();
}

void finish_train_options(TrainConfig& c, const std::string& mode, const std::string& tn_and,
                          const std::string& tn_exists, const std::string& tn_clausal,
                          const std::string& tn_step) {
  if (!mode.empty()) c.weight_mode = parse_weight_mode(mode);
  if (!tn_and.empty()) c.tnorms.and_literal = parse_tnorm(tn_and);
  if (!tn_exists.empty()) c.tnorms.or_exists = parse_tnorm(tn_exists);
  if (!tn_clausal.empty()) c.tnorms.or_clausal = parse_tnorm(tn_clausal);
  if (!tn_step.empty()) c.tnorms.or_step = parse_tnorm(tn_step);
}

void print_cell_table(const std::vector<RunRecord>& records) {
  std::cout << results_table(summarize(records));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dilp: learn logic programs by gradient descent"};
  app.require_subcommand(1);

  // list-tasks
  auto* list = app.add_subcommand("list-tasks", "list the task registry");

  // compile
  TaskArgs compile_args;
  int compile_templates = 1;
  std::string compile_out;
  auto* compile = app.add_subcommand("compile", "generate a task file and report sizes");
  compile_args.add(compile);
  compile->add_option("--templates", compile_templates, "template count")->capture_default_str();
  compile->add_option("-o,--out", compile_out, "write the task file here");

  // train
  TaskArgs train_args;
  int train_templates = 10;
  std::uint64_t train_seed = 0;
  TrainConfig train_cfg;
  std::string mode, tn_and, tn_exists, tn_clausal, tn_step, train_out;
  std::size_t max_index_bytes = kDefaultMaxIndexBytes;
  bool quiet = false;
  auto* train_cmd = app.add_subcommand("train", "train one run");
  train_args.add(train_cmd);
  train_cmd->add_option("--templates", train_templates, "template count")->capture_default_str();
  train_cmd->add_option("--seed", train_seed, "random seed")->capture_default_str();
  add_train_options(train_cmd, train_cfg, mode, tn_and, tn_exists, tn_clausal, tn_step);
  train_cmd->add_option("--max-index-bytes", max_index_bytes, "gather index budget")
      ->capture_default_str();
  train_cmd->add_option("--log-every", train_cfg.log_every, "run-log interval")
      ->capture_default_str();
  train_cmd->add_option("-o,--out", train_out, "results directory for record and checkpoint");
  train_cmd->add_flag("-q,--quiet", quiet, "no run log");

  // sweep
  std::string sweep_config, sweep_output;
  int sweep_workers = 0;
  auto* sweep = app.add_subcommand("sweep", "run a sweep config");
  sweep->add_option("config", sweep_config, "JSON sweep config")->required()->check(CLI::ExistingFile);
  sweep->add_option("-o,--output", sweep_output, "results directory (overrides the config)");
  sweep->add_option("-j,--workers", sweep_workers, "parallel runs (default DILP_WORKERS)");

  // report
  std::string report_dir;
  int dot_per_cell = 3;
  auto* report = app.add_subcommand("report", "write CSV, table, series and DOT files");
  report->add_option("results-dir", report_dir)->required()->check(CLI::ExistingDirectory);
  report->add_option("--dot-per-cell", dot_per_cell, "DOT files per cell")->capture_default_str();

  // export-program
  std::string export_id, export_dir = "results";
  bool export_dot = false;
  auto* export_cmd = app.add_subcommand("export-program", "print the program of a run");
  export_cmd->add_option("run-id", export_id)->required();
  export_cmd->add_option("-r,--results", export_dir, "results directory")->capture_default_str();
  export_cmd->add_flag("--dot", export_dot, "emit the template dependency graph");

  // oracle (hidden)
  TaskArgs oracle_args;
  int oracle_templates = 1;
  std::size_t oracle_cap = oracle::kDefaultSearchCap;
  bool oracle_count_only = false;
  auto* oracle_cmd = app.add_subcommand("oracle", "reference exhaustive search");
  oracle_cmd->group("");
  oracle_args.add(oracle_cmd);
  oracle_cmd->add_option("--templates", oracle_templates)->capture_default_str();
  oracle_cmd->add_option("--cap", oracle_cap)->capture_default_str();
  oracle_cmd->add_flag("--count", oracle_count_only, "only print the search space size");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*list) {
      for (const auto& t : task_registry()) {
        const TaskSpec s = default_spec(t.name);
        std::printf("%-18s train %-3d test %-3d %s\n", t.name.c_str(), s.train_size, s.test_size,
                    t.description.c_str());
      }
    } else if (*compile) {
      const Task task = compile_args.load();
      const std::string text = task_file_text(task);
      if (compile_out.empty()) {
        std::cout << text;
      } else {
        std::ofstream(compile_out) << text;
      }
      const Model m = compile_model(
          make_language(task.predicates, task.train.constants, compile_templates), {});
      std::fprintf(stderr, "atoms %zu  literal candidates %zu  per_literal params %zu\n",
                   m.language.atom_count(), m.literals.size(),
                   m.weight_shape(WeightMode::per_literal).parameter_count());
    } else if (*train_cmd) {
      finish_train_options(train_cfg, mode, tn_and, tn_exists, tn_clausal, tn_step);
      const Task task = train_args.load();
      ModelOptions opts = options_for(train_cfg.weight_mode, train_cfg.prune);
      opts.max_index_bytes = max_index_bytes;
      const CompiledTask compiled = compile_task(task, train_templates, opts);
      TrainConfig cfg = train_cfg;
      cfg.seed = train_seed;
      RunRecord rec;
      rec.run_id = make_run_id(task.name, train_templates, train_seed);
      rec.task = task.name;
      rec.templates = train_templates;
      rec.seed = train_seed;
      rec.spec = train_args.file.empty() ? train_args.spec() : TaskSpec{task.name, 0, 0};
      rec.weight_mode = cfg.weight_mode;
      RunLog log;
      if (!quiet) {
        log = [](const LogLine& l) {
          std::printf("step %d sampled %.6g full %.6g\n", l.step, l.sampled_loss, l.full_loss);
          std::fflush(stdout);
        };
      }
      const TrainResult res = train(compiled.train, cfg, log);
      const Program prog = extract_program(res.weights, compiled.train.model);
      rec.steps = res.steps_used;
      rec.final_loss = res.final_loss();
      rec.stop_reason = std::string(to_string(res.stop_reason));
      rec.losses = res.losses;
      rec.full_losses = res.full_losses;
      rec.program = format_program(prog, compiled.train.model.language);
      if (!res.diverged()) {
        rec.outcome = classify_outcome(res.weights, prog, compiled.train, compiled.test,
                                       {cfg.infer_steps, 0.5, cfg.tnorms});
      }
      std::printf("stop %s after %d steps, loss %.6g\n%s", rec.stop_reason.c_str(), rec.steps,
                  rec.final_loss, rec.program.c_str());
      std::printf("outcome %s  C=%d F=%d CT=%d FT=%d\n",
                  std::string(to_string(rec.outcome.category)).c_str(), rec.outcome.c,
                  rec.outcome.f, rec.outcome.ct, rec.outcome.ft);
      if (!train_out.empty()) {
        fs::create_directories(fs::path(train_out) / "checkpoints");
        std::ofstream(fs::path(train_out) / "runs.jsonl", std::ios::app) << record_to_json(rec)
                                                                         << '\n';
        save_weights(res.weights,
                     (fs::path(train_out) / "checkpoints" / (rec.run_id + ".w")).string());
        std::printf("run %s saved to %s\n", rec.run_id.c_str(), train_out.c_str());
      }
    } else if (*sweep) {
      ExperimentConfig cfg = load_experiment_config(sweep_config);
      if (!sweep_output.empty()) cfg.output_dir = sweep_output;
      if (sweep_workers > 0) cfg.workers = sweep_workers;
      const auto records = run_experiment(cfg, [](const RunRecord& r) {
        std::printf("%s %s steps %d loss %.3g %.1fs\n", r.run_id.c_str(),
                    std::string(to_string(r.outcome.category)).c_str(), r.steps, r.final_loss,
                    r.seconds);
        std::fflush(stdout);
      });
      print_cell_table(records);
    } else if (*report) {
      const ReportFiles files = write_report(report_dir, dot_per_cell);
      std::ifstream table(files.table);
      std::cout << table.rdbuf();
      std::printf("wrote %s, %s, %s and %zu DOT files\n", files.csv.c_str(), files.table.c_str(),
                  files.series.c_str(), files.dot.size());
    } else if (*export_cmd) {
      const RestoredRun run = restore_run(export_dir, export_id);
      if (export_dot) {
        std::cout << program_dot(run.program, run.model.language, export_id);
      } else {
        std::cout << format_program(run.program, run.model.language);
      }
    } else if (*oracle_cmd) {
      const Task task = oracle_args.load();
      const Language lang = make_language(task.predicates, task.train.constants, oracle_templates);
      const auto lits = enumerate_literal_candidates(lang, 2, {});
      const double count = oracle::exhaustive_program_count(lits.size(), oracle_templates);
      std::printf("literal candidates %zu, programs %.6g\n", lits.size(), count);
      if (!oracle_count_only) {
        const auto sols = oracle::exhaustive_solve(task, oracle_templates, oracle_cap);
        std::printf("%zu solutions\n", sols.size());
        for (std::size_t i = 0; i < sols.size() && i < 5; ++i) {
          std::printf("--\n%s", format_program(sols[i], lang).c_str());
        }
      }
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
