// Copyright 2026 The dilp2 Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "dilp/experiment.hpp"
#include "dilp/report.hpp"
#include "dilp/stats.hpp"
#include "dilp/tasks.hpp"

namespace dilp {
namespace {

namespace fs = std::filesystem;

std::vector<std::string> names(const std::vector<Atom>& atoms) {
  std::vector<std::string> out;
  for (const auto& a : atoms) out.push_back(format_atom(a));
  return out;
}

TEST(Registry, NineteenTasks) {
  const auto& reg = task_registry();
  EXPECT_EQ(reg.size(), 19u);
  std::set<std::string> seen;
  for (const auto& t : reg) {
    EXPECT_TRUE(seen.insert(t.name).second);
    const Task task = generate_task(t.name);
    EXPECT_EQ(task.name, t.name);
    // Test domains extend the training constants.
    for (const auto& c : task.train.constants) {
      EXPECT_NE(std::find(task.test.constants.begin(), task.test.constants.end(), c),
                task.test.constants.end())
          << t.name;
    }
    EXPECT_GT(task.train.constants.size(), 0u);
    EXPECT_LT(task.train.constants.size(), task.test.constants.size()) << t.name;
    EXPECT_FALSE(task.train.positives.empty()) << t.name;
    EXPECT_FALSE(task.train.negatives.empty()) << t.name;
    EXPECT_NO_THROW(compile_task(task, 2, {})) << t.name;
  }
  for (const char* n : {"predecessor", "even", "mod3", "mod5-easy", "mod5-hard", "mod6", "plus2",
                        "plus4", "member", "length", "grandparent", "connectedness", "cyclic"}) {
    EXPECT_TRUE(is_known_task(n)) << n;
  }
  EXPECT_THROW(generate_task("fibonacci"), Error);
}

TEST(Tasks, ByteIdenticalRegeneration) {
  for (const auto& t : task_registry()) {
    EXPECT_EQ(task_file_text(generate_task(t.name)), task_file_text(generate_task(t.name)));
  }
}

TEST(Tasks, FileRoundTrip) {
  for (const auto& t : task_registry()) {
    const Task task = generate_task(t.name);
    EXPECT_EQ(parse_task_text(task_file_text(task)), task) << t.name;
  }
}

TEST(Tasks, ParserToleratesWhitespaceAndComments) {
  const std::string text =
      "% a comment\n  task   tiny \npred s/2   extensional % trailing\n pred p/2 target\n"
      "[train]\nconst a\nconst b\nfact s( a , b ).\npos p(b,a).\nneg p(a,b).\n"
      "[test]\nconst a\nconst b\nconst c\nfact s(a,b).\nfact s(b,c).\npos p(b,a).\npos p(c,b).\n";
  const Task t = parse_task_text(text);
  EXPECT_EQ(t.name, "tiny");
  EXPECT_EQ(t.train.facts.size(), 1u);
  EXPECT_EQ(format_atom(t.train.facts[0]), "s(a,b)");
  EXPECT_EQ(t.test.positives.size(), 2u);
  EXPECT_THROW(parse_task_text("task x\npred p/2 target\n[train]\nfoo bar\n"), Error);
}

TEST(Tasks, NumericExamples) {
  const Task even = generate_task("even");
  EXPECT_EQ(names(even.train.positives),
            (std::vector<std::string>{"even(0)", "even(2)", "even(4)", "even(6)", "even(8)",
                                      "even(10)"}));
  EXPECT_EQ(even.train.negatives.size(), 5u);
  const Task pred = generate_task("predecessor");
  EXPECT_EQ(pred.train.positives.size(), 10u);
  EXPECT_EQ(format_atom(pred.train.positives[0]), "predecessor(1,0)");
  const Task hard = generate_task("mod5-hard");
  EXPECT_EQ(names(hard.train.positives),
            (std::vector<std::string>{"mod5(0)", "mod5(5)", "mod5(10)"}));
  std::set<std::string> hard_preds, easy_preds;
  for (const auto& p : hard.predicates) hard_preds.insert(p.name);
  for (const auto& p : generate_task("mod5-easy").predicates) easy_preds.insert(p.name);
  EXPECT_EQ(hard_preds, (std::set<std::string>{"zero", "succ", "mod5"}));
  EXPECT_TRUE(easy_preds.count("plus2") && easy_preds.count("plus3"));
  EXPECT_EQ(generate_task("even").test.constants.size(), 21u);
}

TEST(Significance, Examples) {
  EXPECT_LT(significance({100, 100}, {0, 100}).p_value, 1e-10);
  EXPECT_DOUBLE_EQ(significance({37, 100}, {37, 100}).p_value, 1.0);
  EXPECT_DOUBLE_EQ(significance({0, 20}, {0, 20}).p_value, 1.0);
  const Significance s = significance({92, 100}, {70, 100});
  EXPECT_EQ(s.method, SignificanceMethod::z_test);
  EXPECT_LT(s.p_value, 1e-4);
  const Significance small = significance({3, 4}, {0, 4});
  EXPECT_EQ(small.method, SignificanceMethod::fisher_exact);
  EXPECT_NEAR(small.p_value, 0.142857142857, 1e-9);  // two-sided Fisher, 3/4 vs 0/4
  EXPECT_THROW(significance({0, 0}, {1, 2}), Error);
  for (int a = 0; a <= 10; ++a) {
    const double p = significance({static_cast<std::size_t>(a), 10}, {5, 10}).p_value;
    EXPECT_GE(p, 0.0);
    EXPECT_LE(p, 1.0);
  }
}

TEST(Report, CsvColumns) {
  RunRecord r;
  r.task = "predecessor";
  r.templates = 10;
  r.seed = 4;
  r.outcome = {true, true, true, true, Category::C};
  r.steps = 720;
  r.final_loss = 0.000991;
  const std::string csv = results_csv({r});
  EXPECT_EQ(csv, "task,templates,seed,outcome,C,F,CT,FT,steps,final_loss\n"
                 "predecessor,10,4,C,1,1,1,1,720,0.000991\n");
}

TEST(Experiment, ConfigParsing) {
  const ExperimentConfig c = parse_experiment_config(
      R"({"task": "mod3", "templates": [3, 30], "seeds": 4, "seed_start": 10,
          "train": {"max_steps": 50, "learning_rate": 0.1, "tnorm_step": "product"},
          "train_size": 6, "test_size": 9})");
  EXPECT_EQ(c.task, "mod3");
  EXPECT_EQ(c.templates, (std::vector<int>{3, 30}));
  EXPECT_EQ(c.seeds, (std::vector<std::uint64_t>{10, 11, 12, 13}));
  EXPECT_EQ(c.train.max_steps, 50);
  EXPECT_DOUBLE_EQ(c.train.adam.learning_rate, 0.1);
  EXPECT_EQ(c.train.tnorms.or_step, TNorm::product);
  ASSERT_TRUE(c.spec);
  EXPECT_EQ(c.spec->train_size, 6);
  EXPECT_THROW(parse_experiment_config(R"({"task": "nope", "templates": [1], "seeds": 1})"), Error);
  EXPECT_THROW(parse_experiment_config(
                   R"({"task": "mod3", "templates": [1], "seeds": 1, "train": {"bogus": 1}})"),
               Error);
  const ExperimentConfig again = parse_experiment_config(experiment_config_json(c));
  EXPECT_EQ(again.seeds, c.seeds);
  EXPECT_EQ(again.train.tnorms, c.train.tnorms);
}

TEST(Experiment, SweepPersistsAndReports) {
  const fs::path dir = fs::temp_directory_path() / "dilp_sweep_test";
  fs::remove_all(dir);
  ExperimentConfig c;
  c.task = "predecessor";
  c.spec = TaskSpec{"predecessor", 4, 6};
  c.templates = {1, 2};
  c.seeds = {0, 1, 2};
  c.train.max_steps = 300;
  c.output_dir = dir.string();
  c.workers = 2;
  const auto records = run_experiment(c);
  ASSERT_EQ(records.size(), 6u);
  EXPECT_EQ(records[0].run_id, "predecessor-t1-s0");
  EXPECT_EQ(records[5].run_id, "predecessor-t2-s2");

  const auto loaded = load_records(dir.string());
  ASSERT_EQ(loaded.size(), 6u);
  for (const auto& r : loaded) {
    const auto it = std::find_if(records.begin(), records.end(),
                                 [&](const RunRecord& x) { return x.run_id == r.run_id; });
    ASSERT_NE(it, records.end());
    EXPECT_EQ(r.outcome.category, it->outcome.category);
    EXPECT_EQ(r.losses, it->losses);
    EXPECT_EQ(r.program, it->program);
  }

  // Rerunning one cell reproduces it exactly.
  ExperimentConfig one = c;
  one.templates = {2};
  one.seeds = {1};
  one.output_dir.clear();
  const auto rerun = run_experiment(one);
  EXPECT_EQ(rerun[0].losses, records[4].losses);
  EXPECT_EQ(rerun[0].program, records[4].program);

  const auto cells = summarize(records);
  ASSERT_EQ(cells.size(), 2u);
  EXPECT_EQ(cells[0].runs, 3u);

  const ReportFiles files = write_report(dir.string());
  std::ifstream csv(files.csv);
  std::string header;
  std::getline(csv, header);
  EXPECT_EQ(header, kCsvHeader);
  for (const auto& d : files.dot) {
    std::ifstream in(d);
    std::stringstream ss;
    ss << in.rdbuf();
    EXPECT_EQ(ss.str().rfind("digraph", 0), 0u);
  }
  for (const auto& r : records) {
    const RestoredRun run = restore_run(dir.string(), r.run_id);
    EXPECT_EQ(format_program(run.program, run.model.language), r.program);
  }
  EXPECT_THROW(restore_run(dir.string(), "nope-t1-s0"), Error);
  fs::remove_all(dir);
}

}  // namespace
}  // namespace dilp
