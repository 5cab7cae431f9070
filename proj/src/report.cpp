// Copyright 2026 The dilp2 Authors
// SPDX-License-Identifier: Apache-2.0

#include "dilp/report.hpp"

#include <filesystem>
#include <fstream>
#include <map>

#include <fmt/format.h>

#include "dilp/stats.hpp"

namespace dilp {

namespace fs = std::filesystem;

std::string results_csv(const std::vector<RunRecord>& records) {
  std::string out = std::string(kCsvHeader) + "\n";
  for (const auto& r : records) {
    out += fmt::format("{},{},{},{},{:d},{:d},{:d},{:d},{},{:.6g}\n", r.task, r.templates, r.seed,
                       to_string(r.outcome.category), r.outcome.c, r.outcome.f, r.outcome.ct,
                       r.outcome.ft, r.steps, r.final_loss);
  }
  return out;
}

std::string results_table(const std::vector<CellSummary>& cells) {
  std::string out = fmt::format("{:<18} {:>9} {:>5} {:>6} {:>6} {:>6} {:>6} {:>6} {:>10}\n", "task",
                                "templates", "runs", "C", "F", "CT", "FT", "FAIL", "p(C)");
  std::map<std::string, const CellSummary*> first;
  for (const auto& c : cells) {
    std::string p = "-";
    auto it = first.find(c.task);
    if (it == first.end()) {
      first[c.task] = &c;
    } else if (c.runs > 0 && it->second->runs > 0) {
      const auto s = significance({it->second->c_flags, it->second->runs}, {c.c_flags, c.runs});
      p = fmt::format("{:.2e}", s.p_value);
    }
    out += fmt::format("{:<18} {:>9} {:>5} {:>6.1f} {:>6.1f} {:>6.1f} {:>6.1f} {:>6.1f} {:>10}\n",
                       c.task, c.templates, c.runs, c.percent(Category::C),
                       c.percent(Category::F), c.percent(Category::CT), c.percent(Category::FT),
                       c.percent(Category::FAIL), p);
  }
  return out;
}

std::string sweep_series_csv(const std::vector<CellSummary>& cells) {
  std::string out = "task,templates,runs,C,F,CT,FT,FAIL\n";
  for (const auto& c : cells) {
    out += fmt::format("{},{},{},{:.2f},{:.2f},{:.2f},{:.2f},{:.2f}\n", c.task, c.templates, c.runs,
                       c.percent(Category::C), c.percent(Category::F), c.percent(Category::CT),
                       c.percent(Category::FT), c.percent(Category::FAIL));
  }
  return out;
}

RestoredRun restore_run(const std::string& results_dir, const std::string& run_id) {
  for (auto& r : load_records(results_dir)) {
    if (r.run_id != run_id) continue;
    const fs::path ckpt = fs::path(results_dir) / "checkpoints" / (run_id + ".w");
    if (!fs::exists(ckpt)) throw Error("no checkpoint for run " + run_id);
    Task task = generate_task(r.spec);
    Model model = compile_model(make_language(task.predicates, task.train.constants, r.templates),
                                options_for(r.weight_mode));
    WeightStore weights = load_weights(ckpt.string());
    if (!(weights.shape() == model.weight_shape(r.weight_mode))) {
      throw Error("checkpoint shape does not match run " + run_id);
    }
    Program program = extract_program(weights, model);
    return {std::move(r), std::move(task), std::move(model), std::move(weights),
            std::move(program)};
  }
  throw Error("unknown run id: " + run_id);
}

ReportFiles write_report(const std::string& results_dir, int dot_per_cell) {
  const auto records = load_records(results_dir);
  const auto cells = summarize(records);
  const fs::path dir(results_dir);
  ReportFiles files{(dir / "results.csv").string(), (dir / "table.txt").string(),
                    (dir / "series.csv").string(), {}};
  std::ofstream(files.csv) << results_csv(records);
  std::ofstream(files.table) << results_table(cells);
  std::ofstream(files.series) << sweep_series_csv(cells);

  std::map<std::pair<std::string, int>, int> written;
  for (const auto& r : records) {
    if (r.outcome.category != Category::C) continue;
    int& n = written[{r.task, r.templates}];
    if (n >= dot_per_cell) continue;
    if (!fs::exists(dir / "checkpoints" / (r.run_id + ".w"))) continue;
    const RestoredRun run = restore_run(results_dir, r.run_id);
    fs::create_directories(dir / "dot");
    const std::string path = (dir / "dot" / (r.run_id + ".dot")).string();
    std::ofstream(path) << program_dot(run.program, run.model.language, r.run_id);
    files.dot.push_back(path);
    ++n;
  }
  return files;
}

}  // namespace dilp
