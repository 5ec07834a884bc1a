#include "hglance/tensor.hpp"

#include <cmath>

#include "hglance/errors.hpp"

namespace hglance {

std::size_t shape_product(const std::vector<std::size_t>& shape) {
  std::size_t n = 1;
  for (std::size_t d : shape) n *= d;
  return n;
}

Tensor::Tensor(std::vector<std::size_t> s, std::vector<double> d)
    : shape(std::move(s)), data(std::move(d)) {
  if (shape_product(shape) != data.size())
    throw ShapeMismatch("tensor shape does not match data length");
}

Tensor Tensor::zeros(std::vector<std::size_t> s) {
  std::size_t n = shape_product(s);
  return Tensor(std::move(s), std::vector<double>(n, 0.0));
}

Tensor Tensor::row(std::vector<double> values) {
  std::vector<std::size_t> s{1, values.size()};
  return Tensor(std::move(s), std::move(values));
}

std::size_t Tensor::rows() const {
  if (shape.size() != 2) throw ShapeMismatch("rank-2 tensor expected");
  return shape[0];
}

std::size_t Tensor::cols() const {
  if (shape.size() != 2) throw ShapeMismatch("rank-2 tensor expected");
  return shape[1];
}

double& Tensor::at(std::size_t r, std::size_t c) { return data[r * cols() + c]; }

double Tensor::at(std::size_t r, std::size_t c) const {
  return data[r * cols() + c];
}

bool Tensor::all_finite() const {
  for (double v : data)
    if (!std::isfinite(v)) return false;
  return true;
}

}  // namespace hglance
