#ifndef HGLANCE_TENSOR_HPP_
#define HGLANCE_TENSOR_HPP_

#include <cstddef>
#include <initializer_list>
#include <vector>

namespace hglance {

// Dense row-major 64-bit real tensor. Networks here are tiny, so clarity and
// reproducibility win over anything clever.
struct Tensor {
  std::vector<std::size_t> shape;
  std::vector<double> data;

  Tensor() = default;
  Tensor(std::vector<std::size_t> s, std::vector<double> d);

  static Tensor zeros(std::vector<std::size_t> s);
  static Tensor scalar(double v) { return Tensor({1, 1}, {v}); }
  static Tensor row(std::vector<double> values);

  std::size_t size() const { return data.size(); }
  bool empty() const { return data.empty(); }

  // Rank-2 accessors; throw ShapeMismatch when the tensor is not a matrix.
  std::size_t rows() const;
  std::size_t cols() const;
  double& at(std::size_t r, std::size_t c);
  double at(std::size_t r, std::size_t c) const;

  bool same_shape(const Tensor& other) const { return shape == other.shape; }
  bool all_finite() const;
};

std::size_t shape_product(const std::vector<std::size_t>& shape);

}  // namespace hglance

#endif  // HGLANCE_TENSOR_HPP_
