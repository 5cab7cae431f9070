// Copyright 2026 The dilp2 Authors
// SPDX-License-Identifier: Apache-2.0

#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "dilp/task.hpp"

namespace dilp {

namespace {

std::string strip(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    if (!std::isspace(static_cast<unsigned char>(c))) out.push_back(c);
  }
  return out;
}

void write_domain(const char* header, const DomainData& d, std::ostream& out) {
  out << header << '\n';
  for (const auto& c : d.constants) out << "const " << c << '\n';
  for (const auto& a : d.facts) out << "fact " << format_atom(a) << ".\n";
  for (const auto& a : d.positives) out << "pos " << format_atom(a) << ".\n";
  for (const auto& a : d.negatives) out << "neg " << format_atom(a) << ".\n";
}

}  // namespace

std::string format_atom(const Atom& atom) {
  std::string out = atom.pred + "(";
  for (std::size_t i = 0; i < atom.args.size(); ++i) {
    if (i) out += ',';
    out += atom.args[i];
  }
  return out + ")";
}

Atom parse_atom(const std::string& text) {
  std::string s = strip(text);
  if (!s.empty() && s.back() == '.') s.pop_back();
  const auto open = s.find('(');
  if (open == std::string::npos || open == 0 || s.back() != ')') {
    throw Error("malformed atom '" + text + "'");
  }
  Atom atom;
  atom.pred = s.substr(0, open);
  std::string args = s.substr(open + 1, s.size() - open - 2);
  std::size_t start = 0;
  while (true) {
    const auto comma = args.find(',', start);
    std::string arg = args.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    if (arg.empty()) throw Error("malformed atom '" + text + "'");
    atom.args.push_back(arg);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return atom;
}

void write_task_file(const Task& task, std::ostream& out) {
  out << "% dilp task file\n";
  out << "task " << task.name << '\n';
  for (const auto& p : task.predicates) {
    out << "pred " << p.name << '/' << p.arity << ' ' << to_string(p.kind) << '\n';
  }
  write_domain("[train]", task.train, out);
  write_domain("[test]", task.test, out);
}

std::string task_file_text(const Task& task) {
  std::ostringstream out;
  write_task_file(task, out);
  return out.str();
}

Task parse_task_file(std::istream& in) {
  Task task;
  DomainData* section = nullptr;
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& why) {
    throw Error("task file line " + std::to_string(lineno) + ": " + why);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto pct = line.find('%'); pct != std::string::npos) line.erase(pct);
    std::istringstream words(line);
    std::string key;
    if (!(words >> key)) continue;
    std::string rest;
    std::getline(words, rest);
    if (key == "[train]") {
      section = &task.train;
    } else if (key == "[test]") {
      section = &task.test;
    } else if (key == "task") {
      task.name = strip(rest);
    } else if (key == "pred") {
      std::istringstream r(rest);
      std::string sig, kind;
      r >> sig >> kind;
      const auto slash = sig.find('/');
      if (slash == std::string::npos || kind.empty()) fail("expected 'pred name/arity kind'");
      task.predicates.push_back(
          {sig.substr(0, slash), std::stoi(sig.substr(slash + 1)), parse_pred_kind(kind)});
    } else if (key == "const" || key == "fact" || key == "pos" || key == "neg") {
      if (!section) fail("'" + key + "' outside a [train]/[test] section");
      if (key == "const") {
        section->constants.push_back(strip(rest));
      } else {
        Atom a = parse_atom(rest);
        auto& list = key == "fact" ? section->facts : key == "pos" ? section->positives : section->negatives;
        list.push_back(std::move(a));
      }
    } else {
      fail("unknown directive '" + key + "'");
    }
  }
  if (task.name.empty()) throw Error("task file has no 'task' line");
  task.target();
  return task;
}

Task parse_task_text(const std::string& text) {
  std::istringstream in(text);
  return parse_task_file(in);
}

Task load_task_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read task file " + path);
  return parse_task_file(in);
}

}  // namespace dilp
