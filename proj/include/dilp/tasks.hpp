// Copyright 2026 The dilp2 Authors
// SPDX-License-Identifier: Apache-2.0

// The benchmark suite. Every generator is deterministic; examples are the
// complete set of target atoms over each domain (true ones positive, the rest
// negative).
//
// Domain sizes, per family:
//   numeric    constants 0..train_size / 0..test_size
//   list       one list of length train_size / test_size, cons-cell encoded
//   ancestors  full binary family tree of depth train_size / test_size
//   graph      train_size / test_size nodes
// Every test domain contains the training constants. Test labels are
// computed on the test background knowledge, so an atom over training
// constants can change label when the larger domain adds facts (a graph node
// that gains an edge, say).

#pragma once

#include <string>
#include <vector>

#include "dilp/task.hpp"

namespace dilp {

struct TaskSpec {
  std::string name;
  int train_size = 0;
  int test_size = 0;
};

enum class TaskFamily { numeric, list, ancestors, graph };

struct TaskInfo {
  std::string name;
  TaskFamily family;
  std::string description;
};

const std::vector<TaskInfo>& task_registry();
bool is_known_task(const std::string& name);

// Desk-scale defaults for `name`. Throws on unknown names.
TaskSpec default_spec(const std::string& name);

Task generate_task(const TaskSpec& spec);
inline Task generate_task(const std::string& name) { return generate_task(default_spec(name)); }

}  // namespace dilp
