// Copyright 2026 The awfl Authors.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cassert>
#include <cstddef>
#include <span>
#include <vector>

namespace awfl {

// Dense row-major clients x rounds matrix. Row k holds client k's values
// over all rounds.
class Grid {
 public:
  Grid() = default;
  Grid(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }

  double& operator()(std::size_t k, std::size_t t) {
    assert(k < rows_ && t < cols_);
    return data_[k * cols_ + t];
  }
  double operator()(std::size_t k, std::size_t t) const {
    assert(k < rows_ && t < cols_);
    return data_[k * cols_ + t];
  }

  std::span<double> row(std::size_t k) { return {data_.data() + k * cols_, cols_}; }
  std::span<const double> row(std::size_t k) const {
    return {data_.data() + k * cols_, cols_};
  }

  std::vector<double> column(std::size_t t) const {
    std::vector<double> out(rows_);
    for (std::size_t k = 0; k < rows_; ++k) out[k] = (*this)(k, t);
    return out;
  }
  void set_column(std::size_t t, std::span<const double> values) {
    assert(values.size() == rows_);
    for (std::size_t k = 0; k < rows_; ++k) (*this)(k, t) = values[k];
  }

  const std::vector<double>& data() const noexcept { return data_; }
  std::vector<double>& data() noexcept { return data_; }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

}  // namespace awfl
