// Copyright 2026 The dilp2 Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "dilp/experiment.hpp"

namespace dilp {

inline constexpr const char* kCsvHeader = "task,templates,seed,outcome,C,F,CT,FT,steps,final_loss";

std::string results_csv(const std::vector<RunRecord>& records);

// Success table: one row per (task, templates) cell with the percentage of
// runs in each category, plus the p-value of the C-rate against the first
// cell of the same task.
std::string results_table(const std::vector<CellSummary>& cells);

// Per-category percentages against template count, one line per cell:
// task,templates,runs,C,F,CT,FT,FAIL
std::string sweep_series_csv(const std::vector<CellSummary>& cells);

// Rebuilds the model of a recorded run and loads its checkpoint.
struct RestoredRun {
  RunRecord record;
  Task task;
  Model model;
  WeightStore weights;
  Program program;
};
RestoredRun restore_run(const std::string& results_dir, const std::string& run_id);

struct ReportFiles {
  std::string csv;
  std::string table;
  std::string series;
  std::vector<std::string> dot;
};

// Writes results.csv, table.txt, series.csv and dot/<run-id>.dot for up to
// `dot_per_cell` C-category runs of each cell into `results_dir`.
ReportFiles write_report(const std::string& results_dir, int dot_per_cell = 3);

}  // namespace dilp
