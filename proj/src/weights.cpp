// Copyright 2026 The dilp2 Authors
// SPDX-License-Identifier: Apache-2.0

#include "dilp/weights.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace dilp {

std::string_view to_string(WeightMode m) {
  switch (m) {
    case WeightMode::per_literal: return "per_literal";
    case WeightMode::per_clause: return "per_clause";
    case WeightMode::per_template: return "per_template";
  }
  return "?";
}

WeightMode parse_weight_mode(std::string_view text) {
  if (text == "per_literal" || text == "literal") return WeightMode::per_literal;
  if (text == "per_clause" || text == "clause") return WeightMode::per_clause;
  if (text == "per_template" || text == "template") return WeightMode::per_template;
  throw Error("unknown weight mode '" + std::string(text) + "'");
}

WeightShape::WeightShape(WeightMode mode, std::vector<std::size_t> row_lengths)
    : mode_(mode), row_lengths_(std::move(row_lengths)) {
  template_offsets_.reserve(row_lengths_.size());
  for (std::size_t t = 0; t < row_lengths_.size(); ++t) {
    template_offsets_.push_back(total_);
    total_ += template_parameters(t);
  }
}

int WeightShape::rows_per_template() const {
  switch (mode_) {
    case WeightMode::per_literal: return kClauseSlots * kLiteralSlots;
    case WeightMode::per_clause: return kClauseSlots;
    case WeightMode::per_template: return 1;
  }
  return 0;
}

std::size_t WeightShape::template_parameters(std::size_t t) const {
  return static_cast<std::size_t>(rows_per_template()) * row_lengths_[t];
}

WeightShape make_weight_shape(WeightMode mode, const std::vector<Template>& templates,
                              std::size_t literal_candidates,
                              const std::array<std::size_t, 2>& clause_candidates) {
  std::vector<std::size_t> lengths;
  lengths.reserve(templates.size());
  for (const auto& t : templates) {
    const std::size_t d = clause_candidates[static_cast<std::size_t>(t.head_arity - 1)];
    switch (mode) {
      case WeightMode::per_literal: lengths.push_back(literal_candidates); break;
      case WeightMode::per_clause: lengths.push_back(d); break;
      case WeightMode::per_template: lengths.push_back(d * d); break;
    }
  }
  return WeightShape(mode, std::move(lengths));
}

WeightStore::WeightStore(WeightShape shape)
    : shape_(std::move(shape)), params_(shape_.parameter_count(), 0.0) {}

WeightStore::WeightStore(WeightShape shape, std::vector<double> params)
    : shape_(std::move(shape)), params_(std::move(params)) {
  if (params_.size() != shape_.parameter_count()) throw Error("weight store size mismatch");
}

void save_weights(const WeightStore& store, std::ostream& out) {
  const auto& shape = store.shape();
  out << "dilp-weights 1\n";
  out << "mode " << to_string(shape.mode()) << '\n';
  out << "rows " << shape.rows_per_template() << '\n';
  out << "lengths";
  for (std::size_t t = 0; t < shape.templates(); ++t) out << ' ' << shape.row_length(t);
  out << '\n';
  char buf[64];
  for (double v : store.params()) {
    std::snprintf(buf, sizeof buf, "%a\n", v);
    out << buf;
  }
}

WeightStore load_weights(std::istream& in) {
  std::string line;
  auto expect = [&](std::string_view key) {
    if (!std::getline(in, line) || line.rfind(key, 0) != 0) {
      throw Error("malformed weight checkpoint: expected '" + std::string(key) + "'");
    }
    return line.substr(key.size());
  };
  if (expect("dilp-weights") != " 1") throw Error("unsupported weight checkpoint version");
  std::string mode_text = expect("mode ");
  const WeightMode mode = parse_weight_mode(mode_text);
  const int rows = std::stoi(expect("rows "));
  std::istringstream lengths_in(expect("lengths"));
  std::vector<std::size_t> lengths;
  for (std::size_t len; lengths_in >> len;) lengths.push_back(len);
  WeightShape shape(mode, std::move(lengths));
  if (rows != shape.rows_per_template()) throw Error("malformed weight checkpoint: row count");
  std::vector<double> params;
  params.reserve(shape.parameter_count());
  while (params.size() < shape.parameter_count() && std::getline(in, line)) {
    char* end = nullptr;
    const double v = std::strtod(line.c_str(), &end);
    if (end == line.c_str()) throw Error("malformed weight checkpoint: bad value");
    params.push_back(v);
  }
  if (params.size() != shape.parameter_count()) throw Error("truncated weight checkpoint");
  return WeightStore(std::move(shape), std::move(params));
}

void save_weights(const WeightStore& store, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  save_weights(store, out);
}

WeightStore load_weights(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path);
  return load_weights(in);
}

void softmax(std::span<const double> logits, std::span<double> out) {
  const double top = *std::max_element(logits.begin(), logits.end());
  double total = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - top);
    total += out[i];
  }
  for (auto& v : out) v /= total;
}

}  // namespace dilp
