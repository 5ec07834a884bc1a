#ifndef HGLANCE_TAPE_HPP_
#define HGLANCE_TAPE_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hglance/param_store.hpp"
#include "hglance/tensor.hpp"

namespace hglance {

enum class Act { Relu, Tanh, Sigmoid };

// Eager-evaluating record/replay tape. Every op computes its value on
// creation and records enough to run reverse-mode accumulation afterwards.
// All tensors are rank-2; vectors are [1,d] rows and scalars [1,1].
//
// A tape is strictly single-threaded. Parameter gradients land in a local
// map (param_grads) so independent tapes can run concurrently against one
// read-only ParameterStore; the trainer merges the maps in a fixed order.
class Tape {
 public:
  using Id = std::int32_t;

  explicit Tape(const ParameterStore* store = nullptr) : store_(store) {}

  Id leaf(Tensor v);
  Id scalar_leaf(double v) { return leaf(Tensor::scalar(v)); }
  Id row_leaf(std::vector<double> v) { return leaf(Tensor::row(std::move(v))); }
  Id param(const std::string& name);

  // y = x W + b for x [n,din], W [din,dout], b [1,dout]
  Id linear(Id x, Id w, Id b);
  Id activation(Id x, Act kind);
  // y = max(x, lo) elementwise; gradient passes where x >= lo
  Id clamp_min(Id x, double lo);
  Id concat_cols(Id a, Id b);
  Id concat_rows(const std::vector<Id>& rows);
  Id rows_prefix(Id x, std::size_t k);
  Id row(Id x, std::size_t i);
  Id repeat_row(Id x, std::size_t n);
  // y[i,:] = mean of x[0..i,:]; running sum, row i scaled by 1/(i+1)
  Id prefix_mean(Id x);
  // column-wise mean over all rows -> [1,d]
  Id mean_rows(Id x);
  // softmax over the rows of a [n,1] column
  Id softmax_col(Id s);
  // y[0,:] = sum_i w[i,0] * x[i,:]
  Id rows_weighted_sum(Id w, Id x);
  Id add(Id a, Id b);
  Id mul_scalar(Id a, double c);
  // probability vector over a [1,M] row of logits (max-shifted)
  Id softmax(Id logits);
  // scalar loss -log softmax(logits)[label]; gradient probs - one_hot
  Id softmax_cross_entropy(Id logits, int label);
  // scalar log N(x; mu, sigma); backward applies the closed-form
  // log-density derivatives in mu and sigma
  Id gaussian_log_density(double x, Id mu, Id sigma, double sigma_min);
  // scalar 0.5 * (a - target)^2
  Id squared_error(Id a, double target);
  // identity value, zero gradient
  Id detach(Id a);

  const Tensor& val(Id id) const { return nodes_[static_cast<std::size_t>(id)].value; }
  double scalar(Id id) const;
  std::size_t node_count() const { return nodes_.size(); }

  // Reverse pass from a scalar root. May be called once per tape.
  void backward(Id root);

  const std::map<std::string, Tensor>& param_grads() const { return pgrads_; }
  // store.grad[name] += scale * param_grads[name]
  void accumulate_into(ParameterStore& store, double scale = 1.0) const;

 private:
  enum class Op : std::uint8_t {
    Leaf, Param, Linear, Activation, ClampMin, ConcatCols, ConcatRows,
    RowsPrefix, Row, RepeatRow, PrefixMean, MeanRows, SoftmaxCol,
    RowsWeightedSum, Add, MulScalar, Softmax, SoftmaxCe, GaussLogp,
    SquaredError, Detach
  };

  struct Node {
    Tensor value;
    Op op;
    Id a = -1, b = -1, c = -1;
    int aux_i = 0;
    double aux_d = 0.0, aux_d2 = 0.0;
    std::vector<Id> multi;
    Tensor saved;
    std::string pname;
  };

  Id push(Node n);
  const Tensor& v(Id id) const { return nodes_[static_cast<std::size_t>(id)].value; }

  const ParameterStore* store_;
  std::vector<Node> nodes_;
  std::map<std::string, Id> param_ids_;
  std::map<std::string, Tensor> pgrads_;
};

}  // namespace hglance

#endif  // HGLANCE_TAPE_HPP_
