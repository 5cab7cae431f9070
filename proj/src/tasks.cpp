// Copyright 2026 The dilp2 Authors
// SPDX-License-Identifier: Apache-2.0

#include "dilp/tasks.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <utility>

namespace dilp {

namespace {

using Pair = std::pair<int, int>;

const PredicateSymbol kSucc{"succ", 2, PredKind::extensional};
const PredicateSymbol kZero{"zero", 1, PredKind::extensional};

PredicateSymbol target(const std::string& name, int arity) { return {name, arity, PredKind::target}; }
PredicateSymbol bk(const std::string& name, int arity) { return {name, arity, PredKind::extensional}; }

std::vector<std::string> names(const std::string& prefix, int count) {
  std::vector<std::string> out;
  for (int i = 0; i < count; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

// Fills positives/negatives with every target atom over `constants`.
void label_unary(DomainData& d, const std::string& pred, const std::function<bool(int)>& truth) {
  for (int i = 0; i < static_cast<int>(d.constants.size()); ++i) {
    Atom a{pred, {d.constants[static_cast<std::size_t>(i)]}};
    (truth(i) ? d.positives : d.negatives).push_back(std::move(a));
  }
}

void label_binary(DomainData& d, const std::string& pred,
                  const std::function<bool(int, int)>& truth) {
  const int n = static_cast<int>(d.constants.size());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      Atom a{pred, {d.constants[static_cast<std::size_t>(i)], d.constants[static_cast<std::size_t>(j)]}};
      (truth(i, j) ? d.positives : d.negatives).push_back(std::move(a));
    }
  }
}

// ---- numeric --------------------------------------------------------------

DomainData numbers(int max, bool helpers) {
  DomainData d;
  for (int i = 0; i <= max; ++i) d.constants.push_back(std::to_string(i));
  d.facts.push_back({"zero", {"0"}});
  for (int i = 0; i < max; ++i) d.facts.push_back({"succ", {std::to_string(i), std::to_string(i + 1)}});
  if (helpers) {
    for (int k : {2, 3}) {
      for (int i = 0; i + k <= max; ++i) {
        d.facts.push_back({"plus" + std::to_string(k), {std::to_string(i), std::to_string(i + k)}});
      }
    }
  }
  return d;
}

Task numeric_unary(const TaskSpec& spec, const std::string& pred, bool helpers,
                   const std::function<bool(int)>& truth) {
  Task t;
  t.name = spec.name;
  t.predicates = {kZero, kSucc};
  if (helpers) {
    t.predicates.push_back(bk("plus2", 2));
    t.predicates.push_back(bk("plus3", 2));
  }
  t.predicates.push_back(target(pred, 1));
  for (auto [dom, size] : {std::pair{&t.train, spec.train_size}, std::pair{&t.test, spec.test_size}}) {
    *dom = numbers(size, helpers);
    label_unary(*dom, pred, truth);
  }
  return t;
}

Task numeric_binary(const TaskSpec& spec, const std::string& pred,
                    const std::function<bool(int, int)>& truth) {
  Task t;
  t.name = spec.name;
  t.predicates = {kZero, kSucc, target(pred, 2)};
  for (auto [dom, size] : {std::pair{&t.train, spec.train_size}, std::pair{&t.test, spec.test_size}}) {
    *dom = numbers(size, false);
    label_binary(*dom, pred, truth);
  }
  return t;
}

// even with both zero and even dyadic: zero(0,0) and even(X,X) on the
// diagonal. Off-diagonal target atoms are not examples.
Task even_dyadic(const TaskSpec& spec) {
  Task t;
  t.name = spec.name;
  t.predicates = {bk("zero", 2), kSucc, target("even", 2)};
  for (auto [dom, size] : {std::pair{&t.train, spec.train_size}, std::pair{&t.test, spec.test_size}}) {
    DomainData d = numbers(size, false);
    d.facts.front() = Atom{"zero", {"0", "0"}};
    for (int i = 0; i <= size; ++i) {
      Atom a{"even", {std::to_string(i), std::to_string(i)}};
      (i % 2 == 0 ? d.positives : d.negatives).push_back(std::move(a));
    }
    *dom = std::move(d);
  }
  return t;
}

// ---- lists ----------------------------------------------------------------

// One list of `length` cells l0..l{length-1} ending in nil. Cell i holds
// element kElements[(3 * i + i / 2) % kinds].
constexpr const char* kElements[] = {"a", "b", "c", "d", "e", "f"};

int element_kinds(int length) { return std::min(6, std::max(3, length / 2 + 1)); }

int element_of(int cell, int kinds) { return (3 * cell + cell / 2) % kinds; }

std::string cell(int i, int length) { return i == length ? "nil" : "l" + std::to_string(i); }

Task member_task(const TaskSpec& spec) {
  Task t;
  t.name = spec.name;
  t.predicates = {bk("head", 2), bk("tail", 2), target("member", 2)};
  for (auto [dom, len] : {std::pair{&t.train, spec.train_size}, std::pair{&t.test, spec.test_size}}) {
    DomainData d;
    const int kinds = element_kinds(len);
    for (int i = 0; i <= len; ++i) d.constants.push_back(cell(i, len));
    for (int k = 0; k < kinds; ++k) d.constants.push_back(kElements[k]);
    for (int i = 0; i < len; ++i) {
      d.facts.push_back({"head", {cell(i, len), kElements[element_of(i, kinds)]}});
      d.facts.push_back({"tail", {cell(i, len), cell(i + 1, len)}});
    }
    const int cells = len + 1;
    label_binary(d, "member", [&](int e, int l) {
      if (e < cells || l >= cells) return false;
      for (int i = l; i < len; ++i) {
        if (element_of(i, kinds) == e - cells) return true;
      }
      return false;
    });
    *dom = std::move(d);
  }
  return t;
}

Task length_task(const TaskSpec& spec) {
  Task t;
  t.name = spec.name;
  t.predicates = {bk("tail", 2), bk("empty", 1), kZero, kSucc, target("length", 2)};
  for (auto [dom, len] : {std::pair{&t.train, spec.train_size}, std::pair{&t.test, spec.test_size}}) {
    DomainData d;
    for (int i = 0; i <= len; ++i) d.constants.push_back(cell(i, len));
    for (int i = 0; i <= len; ++i) d.constants.push_back(std::to_string(i));
    for (int i = 0; i < len; ++i) d.facts.push_back({"tail", {cell(i, len), cell(i + 1, len)}});
    d.facts.push_back({"empty", {"nil"}});
    d.facts.push_back({"zero", {"0"}});
    for (int i = 0; i < len; ++i) d.facts.push_back({"succ", {std::to_string(i), std::to_string(i + 1)}});
    const int cells = len + 1;
    label_binary(d, "length", [&](int l, int k) {
      return l < cells && k >= cells && (len - l) == k - cells;
    });
    *dom = std::move(d);
  }
  return t;
}

// ---- ancestors --------------------------------------------------------------

// Complete binary tree in heap order; node k's parent is (k-1)/2. Even-indexed
// people are fathers, odd-indexed ones mothers.
Task grandparent_task(const TaskSpec& spec) {
  Task t;
  t.name = spec.name;
  t.predicates = {bk("father", 2), bk("mother", 2), target("grandparent", 2)};
  for (auto [dom, depth] : {std::pair{&t.train, spec.train_size}, std::pair{&t.test, spec.test_size}}) {
    DomainData d;
    const int people = (1 << (depth + 1)) - 1;
    d.constants = names("p", people);
    for (int k = 1; k < people; ++k) {
      const int parent = (k - 1) / 2;
      d.facts.push_back({parent % 2 == 0 ? "father" : "mother",
                         {d.constants[static_cast<std::size_t>(parent)], d.constants[static_cast<std::size_t>(k)]}});
    }
    label_binary(d, "grandparent", [](int x, int y) { return y >= 3 && ((y - 1) / 2 - 1) / 2 == x; });
    *dom = std::move(d);
  }
  return t;
}

// ---- graphs -----------------------------------------------------------------

// Path 0 -> 1 -> ... -> n-1, chords i -> i+2 for i % 3 == 0, and back edges
// closing the cycles 1 -> 2 -> 3 -> 1 and (when present) 8 -> 9 -> 10 -> 8.
std::set<Pair> graph_edges(int nodes) {
  std::set<Pair> e;
  for (int i = 0; i + 1 < nodes; ++i) e.insert({i, i + 1});
  for (int i = 0; i + 2 < nodes; i += 3) e.insert({i, i + 2});
  if (nodes > 3) e.insert({3, 1});
  if (nodes > 10) e.insert({10, 8});
  return e;
}

const char* kColours[] = {"red", "green", "blue"};

int colour_of(int node) { return (2 * node + node / 3) % 3; }

DomainData graph_domain(int nodes, bool colours, bool neq) {
  DomainData d;
  d.constants = names("n", nodes);
  if (colours) {
    for (const char* c : kColours) d.constants.push_back(c);
  }
  for (auto [a, b] : graph_edges(nodes)) {
    d.facts.push_back({"edge", {d.constants[static_cast<std::size_t>(a)], d.constants[static_cast<std::size_t>(b)]}});
  }
  if (colours) {
    for (int i = 0; i < nodes; ++i) {
      d.facts.push_back({"colour", {d.constants[static_cast<std::size_t>(i)], kColours[colour_of(i)]}});
    }
  }
  if (neq) {
    const int n = static_cast<int>(d.constants.size());
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j) d.facts.push_back({"neq", {d.constants[static_cast<std::size_t>(i)], d.constants[static_cast<std::size_t>(j)]}});
  }
  return d;
}

// reach[i][j]: a path of length >= 1 from i to j.
std::vector<std::vector<bool>> reachability(int nodes, const std::set<Pair>& edges) {
  std::vector<std::vector<bool>> r(static_cast<std::size_t>(nodes), std::vector<bool>(static_cast<std::size_t>(nodes), false));
  for (auto [a, b] : edges) r[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = true;
  for (int k = 0; k < nodes; ++k)
    for (int i = 0; i < nodes; ++i)
      for (int j = 0; j < nodes; ++j)
        if (r[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] && r[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)])
          r[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = true;
  return r;
}

Task graph_task(const TaskSpec& spec) {
  Task t;
  t.name = spec.name;
  const std::string& n = spec.name;
  const bool colours = n == "adjacent_to_red" || n == "graph_colouring";
  const bool neq = n == "two_children";
  t.predicates = {bk("edge", 2)};
  if (colours) {
    t.predicates.push_back(bk("colour", 2));
    if (n == "adjacent_to_red") t.predicates.push_back(bk("red", 1));
  }
  if (neq) t.predicates.push_back(bk("neq", 2));
  const int arity = (n == "undirected_edge" || n == "connectedness") ? 2 : 1;
  t.predicates.push_back(target(n, arity));
  for (auto [dom, nodes] : {std::pair{&t.train, spec.train_size}, std::pair{&t.test, spec.test_size}}) {
    DomainData d = graph_domain(nodes, colours, neq);
    if (n == "adjacent_to_red") d.facts.push_back({"red", {"red"}});
    const auto edges = graph_edges(nodes);
    const auto reach = reachability(nodes, edges);
    auto node = [&](int i) { return i < nodes; };
    auto edge = [&](int a, int b) { return edges.count({a, b}) > 0; };
    if (n == "undirected_edge") {
      label_binary(d, n, [&](int a, int b) { return node(a) && node(b) && (edge(a, b) || edge(b, a)); });
    } else if (n == "connectedness") {
      label_binary(d, n, [&](int a, int b) {
        return node(a) && node(b) && reach[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
      });
    } else if (n == "cyclic") {
      label_unary(d, n, [&](int a) { return node(a) && reach[static_cast<std::size_t>(a)][static_cast<std::size_t>(a)]; });
    } else if (n == "adjacent_to_red") {
      label_unary(d, n, [&](int a) {
        if (!node(a)) return false;
        for (int b = 0; b < nodes; ++b)
          if (edge(a, b) && colour_of(b) == 0) return true;
        return false;
      });
    } else if (n == "graph_colouring") {
      label_unary(d, n, [&](int a) {
        if (!node(a)) return false;
        for (int b = 0; b < nodes; ++b)
          if (edge(a, b) && colour_of(a) == colour_of(b)) return true;
        return false;
      });
    } else if (n == "two_children") {
      label_unary(d, n, [&](int a) {
        int kids = 0;
        for (int b = 0; b < nodes; ++b) kids += node(a) && edge(a, b);
        return kids >= 2;
      });
    }
    *dom = std::move(d);
  }
  return t;
}

int mod(int x, int m) { return x % m; }

}  // namespace

const std::vector<TaskInfo>& task_registry() {
  static const std::vector<TaskInfo> registry = {
      {"predecessor", TaskFamily::numeric, "predecessor(X,Y): X = Y + 1"},
      {"even", TaskFamily::numeric, "even(X)"},
      {"even-dyadic", TaskFamily::numeric, "even(X,X) with zero(0,0): dyadic encoding of even"},
      {"lte", TaskFamily::numeric, "lte(X,Y): X <= Y"},
      {"mod3", TaskFamily::numeric, "mod3(X): 0 = X mod 3"},
      {"mod5-easy", TaskFamily::numeric, "mod5(X): 0 = X mod 5, with plus2/plus3 in the BK"},
      {"mod5-hard", TaskFamily::numeric, "mod5(X): 0 = X mod 5, BK only zero/succ"},
      {"mod6", TaskFamily::numeric, "mod6(X): 0 = X mod 6"},
      {"plus2", TaskFamily::numeric, "plus2(X,Y): Y = X + 2"},
      {"plus4", TaskFamily::numeric, "plus4(X,Y): Y = X + 4"},
      {"member", TaskFamily::list, "member(E,L)"},
      {"length", TaskFamily::list, "length(L,N)"},
      {"grandparent", TaskFamily::ancestors, "grandparent(X,Y)"},
      {"undirected_edge", TaskFamily::graph, "undirected_edge(X,Y)"},
      {"adjacent_to_red", TaskFamily::graph, "adjacent_to_red(X): an out-neighbour is red"},
      {"two_children", TaskFamily::graph, "two_children(X): at least two out-neighbours"},
      {"graph_colouring", TaskFamily::graph, "graph_colouring(X): an out-neighbour shares X's colour"},
      {"connectedness", TaskFamily::graph, "connectedness(X,Y): Y reachable from X"},
      {"cyclic", TaskFamily::graph, "cyclic(X): X lies on a cycle"},
  };
  return registry;
}

bool is_known_task(const std::string& name) {
  const auto& r = task_registry();
  return std::any_of(r.begin(), r.end(), [&](const TaskInfo& i) { return i.name == name; });
}

TaskSpec default_spec(const std::string& name) {
  for (const auto& info : task_registry()) {
    if (info.name != name) continue;
    switch (info.family) {
      case TaskFamily::numeric: return {name, 10, 20};
      case TaskFamily::list: return {name, 6, 10};
      case TaskFamily::ancestors: return {name, 3, 4};
      case TaskFamily::graph: return {name, 8, 12};
    }
  }
  throw Error("unknown task '" + name + "'");
}

Task generate_task(const TaskSpec& spec) {
  if (!is_known_task(spec.name)) throw Error("unknown task '" + spec.name + "'");
  if (spec.train_size < 1 || spec.test_size < spec.train_size) {
    throw Error("task " + spec.name + ": test domain must extend the training domain");
  }
  const std::string& n = spec.name;
  if (n == "predecessor") return numeric_binary(spec, "predecessor", [](int x, int y) { return x == y + 1; });
  if (n == "even") return numeric_unary(spec, "even", false, [](int x) { return mod(x, 2) == 0; });
  if (n == "even-dyadic") return even_dyadic(spec);
  if (n == "lte") return numeric_binary(spec, "lte", [](int x, int y) { return x <= y; });
  if (n == "mod3") return numeric_unary(spec, "mod3", false, [](int x) { return mod(x, 3) == 0; });
  if (n == "mod5-easy") return numeric_unary(spec, "mod5", true, [](int x) { return mod(x, 5) == 0; });
  if (n == "mod5-hard") return numeric_unary(spec, "mod5", false, [](int x) { return mod(x, 5) == 0; });
  if (n == "mod6") return numeric_unary(spec, "mod6", false, [](int x) { return mod(x, 6) == 0; });
  if (n == "plus2") return numeric_binary(spec, "plus2", [](int x, int y) { return y == x + 2; });
  if (n == "plus4") return numeric_binary(spec, "plus4", [](int x, int y) { return y == x + 4; });
  if (n == "member") return member_task(spec);
  if (n == "length") return length_task(spec);
  if (n == "grandparent") return grandparent_task(spec);
  return graph_task(spec);
}

}  // namespace dilp
