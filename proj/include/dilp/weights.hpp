// Copyright 2026 The dilp2 Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dilp/hypothesis.hpp"

namespace dilp {

enum class WeightMode : std::uint8_t { per_literal, per_clause, per_template };

std::string_view to_string(WeightMode m);
WeightMode parse_weight_mode(std::string_view text);

// Layout of the learnable logits. Every template owns rows_per_template()
// softmax rows of equal length:
//   per_literal   4 rows (clause slot, literal slot) over literal candidates
//   per_clause    2 rows (clause slot) over clause candidates
//   per_template  1 row over ordered pairs of clause candidates
class WeightShape {
 public:
  WeightShape() = default;
  WeightShape(WeightMode mode, std::vector<std::size_t> row_lengths);

  WeightMode mode() const { return mode_; }
  std::size_t templates() const { return row_lengths_.size(); }
  int rows_per_template() const;
  std::size_t row_length(std::size_t t) const { return row_lengths_[t]; }
  std::size_t row_offset(std::size_t t, int row) const {
    return template_offsets_[t] + static_cast<std::size_t>(row) * row_lengths_[t];
  }
  std::size_t template_parameters(std::size_t t) const;
  std::size_t parameter_count() const { return total_; }

  bool operator==(const WeightShape& o) const {
    return mode_ == o.mode_ && row_lengths_ == o.row_lengths_;
  }

 private:
  WeightMode mode_ = WeightMode::per_literal;
  std::vector<std::size_t> row_lengths_;
  std::vector<std::size_t> template_offsets_;
  std::size_t total_ = 0;
};

// Row lengths follow from the template head arities and the candidate sets.
WeightShape make_weight_shape(WeightMode mode, const std::vector<Template>& templates,
                              std::size_t literal_candidates,
                              const std::array<std::size_t, 2>& clause_candidates);

class WeightStore {
 public:
  WeightStore() = default;
  explicit WeightStore(WeightShape shape);
  WeightStore(WeightShape shape, std::vector<double> params);

  const WeightShape& shape() const { return shape_; }
  WeightMode mode() const { return shape_.mode(); }
  std::size_t size() const { return params_.size(); }

  std::span<double> row(std::size_t t, int r) {
    return {params_.data() + shape_.row_offset(t, r), shape_.row_length(t)};
  }
  std::span<const double> row(std::size_t t, int r) const {
    return {params_.data() + shape_.row_offset(t, r), shape_.row_length(t)};
  }
  std::vector<double>& params() { return params_; }
  const std::vector<double>& params() const { return params_; }

  bool operator==(const WeightStore&) const = default;

 private:
  WeightShape shape_;
  std::vector<double> params_;
};

// Checkpoint format, line based:
//   dilp-weights 1
//   mode <per_literal|per_clause|per_template>
//   rows <R>
//   lengths <L_0> ... <L_{T-1}>
//   <one parameter per line as a C99 hexadecimal float>
// Hex floats make the round trip bit exact.
void save_weights(const WeightStore& store, std::ostream& out);
WeightStore load_weights(std::istream& in);
void save_weights(const WeightStore& store, const std::string& path);
WeightStore load_weights(const std::string& path);

// Numerically stable softmax of one row.
void softmax(std::span<const double> logits, std::span<double> out);

}  // namespace dilp
