// Copyright 2026 The Biopipe Authors.
//
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

#ifndef BIOPIPE_CORE_TENSOR_HPP_
#define BIOPIPE_CORE_TENSOR_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "biopipe/error.hpp"

namespace biopipe {

// Extents of a tensor of rank 0 to 3. A rank-0 shape describes a scalar.
class Shape {
 public:
  static constexpr std::size_t kMaxRank = 3;

  // Scalar.
  Shape() : rank_(0), dims_{0, 0, 0} {}
  Shape(std::initializer_list<std::size_t> dims) : rank_(dims.size()), dims_{0, 0, 0} {
    if (dims.size() > kMaxRank) throw ShapeError("tensor rank above 3");
    std::size_t i = 0;
    for (const std::size_t d : dims) dims_[i++] = d;
  }
  static Shape of_rank(std::size_t rank, const std::size_t* dims) {
    if (rank > kMaxRank) throw ShapeError("tensor rank above 3");
    Shape s;
    s.rank_ = rank;
    for (std::size_t i = 0; i < rank; ++i) s.dims_[i] = dims[i];
    return s;
  }

  std::size_t rank() const { return rank_; }
  std::size_t operator[](std::size_t i) const { return dims_[i]; }
  std::size_t elements() const {
    std::size_t n = 1;
    for (std::size_t i = 0; i < rank_; ++i) n *= dims_[i];
    return n;
  }

  bool operator==(const Shape& other) const {
    if (rank_ != other.rank_) return false;
    for (std::size_t i = 0; i < rank_; ++i) {
      if (dims_[i] != other.dims_[i]) return false;
    }
    return true;
  }

  std::string str() const {
    std::string s = "[";
    for (std::size_t i = 0; i < rank_; ++i) {
      if (i) s += "x";
      s += std::to_string(dims_[i]);
    }
    return s + "]";
  }

 private:
  std::size_t rank_;
  std::array<std::size_t, kMaxRank> dims_;
};

// Dense row-major array of doubles.
class Tensor {
 public:
  // Empty vector.
  Tensor() : shape_{0} {}
  explicit Tensor(Shape shape, double fill = 0.0)
      : shape_(shape), data_(shape.elements(), fill) {}
  Tensor(Shape shape, std::vector<double> data) : shape_(shape), data_(std::move(data)) {
    if (data_.size() != shape_.elements()) {
      throw ShapeError("tensor data length " + std::to_string(data_.size()) +
                       " does not match shape " + shape_.str());
    }
  }

  static Tensor scalar(double v) { return Tensor(Shape{}, std::vector<double>{v}); }
  static Tensor vector(std::vector<double> v) {
    const std::size_t n = v.size();
    return Tensor(Shape{n}, std::move(v));
  }
  static Tensor matrix(std::size_t rows, std::size_t cols, std::vector<double> v) {
    return Tensor(Shape{rows, cols}, std::move(v));
  }

  const Shape& shape() const { return shape_; }
  std::size_t rank() const { return shape_.rank(); }
  std::size_t dim(std::size_t i) const { return shape_[i]; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }
  double* ptr() { return data_.data(); }
  const double* ptr() const { return data_.data(); }
  const std::vector<double>& values() const { return data_; }

  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }

  double& at(std::size_t i, std::size_t j) { return data_[i * shape_[1] + j]; }
  double at(std::size_t i, std::size_t j) const { return data_[i * shape_[1] + j]; }
  double& at(std::size_t i, std::size_t j, std::size_t k) {
    return data_[(i * shape_[1] + j) * shape_[2] + k];
  }
  double at(std::size_t i, std::size_t j, std::size_t k) const {
    return data_[(i * shape_[1] + j) * shape_[2] + k];
  }

  // Pointer to row i of a matrix.
  double* row(std::size_t i) { return data_.data() + i * shape_[1]; }
  const double* row(std::size_t i) const { return data_.data() + i * shape_[1]; }

  double item() const {
    if (data_.size() != 1) throw ShapeError("item() on tensor of shape " + shape_.str());
    return data_[0];
  }

  void fill(double v) { std::fill(data_.begin(), data_.end(), v); }

  bool all_finite() const {
    for (const double v : data_) {
      if (!std::isfinite(v)) return false;
    }
    return true;
  }

 private:
  Shape shape_;
  std::vector<double> data_;
};

inline void require_shape(const Tensor& t, const Shape& expected, const char* what) {
  if (!(t.shape() == expected)) {
    throw ShapeError(std::string(what) + ": expected shape " + expected.str() + ", got " +
                     t.shape().str());
  }
}

}  // namespace biopipe

#endif  // BIOPIPE_CORE_TENSOR_HPP_
