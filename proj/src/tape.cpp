#include "hglance/tape.hpp"

#include <algorithm>
#include <cmath>

#include "hglance/errors.hpp"
#include "hglance/gaussian.hpp"

namespace hglance {

namespace {

void require_matrix(const Tensor& t, const char* op) {
  if (t.shape.size() != 2)
    throw ShapeMismatch(std::string(op) + ": rank-2 tensor required");
}

}  // namespace

Tape::Id Tape::push(Node n) {
  nodes_.push_back(std::move(n));
  return static_cast<Id>(nodes_.size() - 1);
}

Tape::Id Tape::leaf(Tensor v) {
  require_matrix(v, "leaf");
  Node n;
  n.op = Op::Leaf;
  n.value = std::move(v);
  return push(std::move(n));
}

Tape::Id Tape::param(const std::string& name) {
  if (!store_) throw Error("tape has no parameter store");
  auto it = param_ids_.find(name);
  if (it != param_ids_.end()) return it->second;
  Node n;
  n.op = Op::Param;
  n.value = store_->value(name);
  n.pname = name;
  Id id = push(std::move(n));
  param_ids_.emplace(name, id);
  return id;
}

Tape::Id Tape::linear(Id x, Id w, Id b) {
  const Tensor& xv = v(x);
  const Tensor& wv = v(w);
  const Tensor& bv = v(b);
  require_matrix(xv, "linear");
  require_matrix(wv, "linear");
  require_matrix(bv, "linear");
  const std::size_t n = xv.rows(), din = xv.cols(), dout = wv.cols();
  if (wv.rows() != din || bv.rows() != 1 || bv.cols() != dout)
    throw ShapeMismatch("linear: x/W/b shapes do not conform");

  Node nd;
  nd.op = Op::Linear;
  nd.a = x;
  nd.b = w;
  nd.c = b;
  nd.value = Tensor::zeros({n, dout});
  double* y = nd.value.data.data();
  const double* xp = xv.data.data();
  const double* wp = wv.data.data();
  const double* bp = bv.data.data();
  for (std::size_t i = 0; i < n; ++i) {
    double* yi = y + i * dout;
    for (std::size_t j = 0; j < dout; ++j) yi[j] = bp[j];
    const double* xi = xp + i * din;
    for (std::size_t k = 0; k < din; ++k) {
      const double a = xi[k];
      const double* wk = wp + k * dout;
      for (std::size_t j = 0; j < dout; ++j) yi[j] += a * wk[j];
    }
  }
  return push(std::move(nd));
}

Tape::Id Tape::activation(Id x, Act kind) {
  const Tensor& xv = v(x);
  Node nd;
  nd.op = Op::Activation;
  nd.a = x;
  nd.aux_i = static_cast<int>(kind);
  nd.value = xv;
  for (double& e : nd.value.data) {
    switch (kind) {
      case Act::Relu: e = e > 0.0 ? e : 0.0; break;
      case Act::Tanh: e = std::tanh(e); break;
      case Act::Sigmoid: e = 1.0 / (1.0 + std::exp(-e)); break;
    }
  }
  return push(std::move(nd));
}

Tape::Id Tape::clamp_min(Id x, double lo) {
  Node nd;
  nd.op = Op::ClampMin;
  nd.a = x;
  nd.aux_d = lo;
  nd.value = v(x);
  for (double& e : nd.value.data) e = std::max(e, lo);
  return push(std::move(nd));
}

Tape::Id Tape::concat_cols(Id a, Id b) {
  const Tensor& av = v(a);
  const Tensor& bv = v(b);
  require_matrix(av, "concat_cols");
  require_matrix(bv, "concat_cols");
  if (av.rows() != bv.rows()) throw ShapeMismatch("concat_cols: row counts differ");
  const std::size_t n = av.rows(), da = av.cols(), db = bv.cols();
  Node nd;
  nd.op = Op::ConcatCols;
  nd.a = a;
  nd.b = b;
  nd.value = Tensor::zeros({n, da + db});
  for (std::size_t i = 0; i < n; ++i) {
    std::copy_n(&av.data[i * da], da, &nd.value.data[i * (da + db)]);
    std::copy_n(&bv.data[i * db], db, &nd.value.data[i * (da + db) + da]);
  }
  return push(std::move(nd));
}

Tape::Id Tape::concat_rows(const std::vector<Id>& rows) {
  if (rows.empty()) throw EmptyInput("concat_rows: no inputs");
  const std::size_t d = v(rows[0]).cols();
  std::size_t n = 0;
  for (Id r : rows) {
    require_matrix(v(r), "concat_rows");
    if (v(r).cols() != d) throw ShapeMismatch("concat_rows: column counts differ");
    n += v(r).rows();
  }
  Node nd;
  nd.op = Op::ConcatRows;
  nd.multi = rows;
  nd.value = Tensor::zeros({n, d});
  std::size_t at = 0;
  for (Id r : rows) {
    const Tensor& rv = v(r);
    std::copy(rv.data.begin(), rv.data.end(), nd.value.data.begin() + static_cast<std::ptrdiff_t>(at));
    at += rv.data.size();
  }
  return push(std::move(nd));
}

Tape::Id Tape::rows_prefix(Id x, std::size_t k) {
  const Tensor& xv = v(x);
  require_matrix(xv, "rows_prefix");
  if (k == 0 || k > xv.rows()) throw IndexOutOfRange("rows_prefix: bad prefix length");
  Node nd;
  nd.op = Op::RowsPrefix;
  nd.a = x;
  nd.aux_i = static_cast<int>(k);
  nd.value = Tensor({k, xv.cols()},
                    std::vector<double>(xv.data.begin(),
                                        xv.data.begin() + static_cast<std::ptrdiff_t>(k * xv.cols())));
  return push(std::move(nd));
}

Tape::Id Tape::row(Id x, std::size_t i) {
  const Tensor& xv = v(x);
  require_matrix(xv, "row");
  if (i >= xv.rows()) throw IndexOutOfRange("row: index out of range");
  Node nd;
  nd.op = Op::Row;
  nd.a = x;
  nd.aux_i = static_cast<int>(i);
  const std::size_t d = xv.cols();
  nd.value = Tensor({1, d}, std::vector<double>(xv.data.begin() + static_cast<std::ptrdiff_t>(i * d),
                                                xv.data.begin() + static_cast<std::ptrdiff_t>((i + 1) * d)));
  return push(std::move(nd));
}

Tape::Id Tape::repeat_row(Id x, std::size_t n) {
  const Tensor& xv = v(x);
  require_matrix(xv, "repeat_row");
  if (xv.rows() != 1) throw ShapeMismatch("repeat_row: input must be a single row");
  if (n == 0) throw EmptyInput("repeat_row: zero rows");
  const std::size_t d = xv.cols();
  Node nd;
  nd.op = Op::RepeatRow;
  nd.a = x;
  nd.aux_i = static_cast<int>(n);
  nd.value = Tensor::zeros({n, d});
  for (std::size_t i = 0; i < n; ++i)
    std::copy_n(xv.data.data(), d, &nd.value.data[i * d]);
  return push(std::move(nd));
}

Tape::Id Tape::prefix_mean(Id x) {
  const Tensor& xv = v(x);
  require_matrix(xv, "prefix_mean");
  const std::size_t n = xv.rows(), d = xv.cols();
  if (n == 0) throw EmptyInput("prefix_mean: empty input");
  Node nd;
  nd.op = Op::PrefixMean;
  nd.a = x;
  nd.value = Tensor::zeros({n, d});
  std::vector<double> sum(d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double inv = 1.0 / static_cast<double>(i + 1);
    for (std::size_t j = 0; j < d; ++j) {
      sum[j] += xv.data[i * d + j];
      nd.value.data[i * d + j] = sum[j] * inv;
    }
  }
  return push(std::move(nd));
}

Tape::Id Tape::mean_rows(Id x) {
  const Tensor& xv = v(x);
  require_matrix(xv, "mean_rows");
  const std::size_t n = xv.rows(), d = xv.cols();
  if (n == 0) throw EmptyInput("mean_rows: empty input");
  Node nd;
  nd.op = Op::MeanRows;
  nd.a = x;
  nd.value = Tensor::zeros({1, d});
  const double inv = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) nd.value.data[j] += xv.data[i * d + j];
  for (std::size_t j = 0; j < d; ++j) nd.value.data[j] *= inv;
  return push(std::move(nd));
}

Tape::Id Tape::softmax_col(Id s) {
  const Tensor& sv = v(s);
  require_matrix(sv, "softmax_col");
  if (sv.cols() != 1) throw ShapeMismatch("softmax_col: [n,1] column required");
  const std::size_t n = sv.rows();
  Node nd;
  nd.op = Op::SoftmaxCol;
  nd.a = s;
  nd.value = Tensor::zeros({n, 1});
  double mx = sv.data[0];
  for (std::size_t i = 1; i < n; ++i) mx = std::max(mx, sv.data[i]);
  double z = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    nd.value.data[i] = std::exp(sv.data[i] - mx);
    z += nd.value.data[i];
  }
  for (std::size_t i = 0; i < n; ++i) nd.value.data[i] /= z;
  return push(std::move(nd));
}

Tape::Id Tape::rows_weighted_sum(Id w, Id x) {
  const Tensor& wv = v(w);
  const Tensor& xv = v(x);
  require_matrix(wv, "rows_weighted_sum");
  require_matrix(xv, "rows_weighted_sum");
  if (wv.cols() != 1 || wv.rows() != xv.rows())
    throw ShapeMismatch("rows_weighted_sum: weights must be [n,1] matching rows");
  const std::size_t n = xv.rows(), d = xv.cols();
  Node nd;
  nd.op = Op::RowsWeightedSum;
  nd.a = w;
  nd.b = x;
  nd.value = Tensor::zeros({1, d});
  for (std::size_t i = 0; i < n; ++i) {
    const double wi = wv.data[i];
    for (std::size_t j = 0; j < d; ++j) nd.value.data[j] += wi * xv.data[i * d + j];
  }
  return push(std::move(nd));
}

Tape::Id Tape::add(Id a, Id b) {
  const Tensor& av = v(a);
  const Tensor& bv = v(b);
  if (!av.same_shape(bv)) throw ShapeMismatch("add: shapes differ");
  Node nd;
  nd.op = Op::Add;
  nd.a = a;
  nd.b = b;
  nd.value = av;
  for (std::size_t i = 0; i < bv.data.size(); ++i) nd.value.data[i] += bv.data[i];
  return push(std::move(nd));
}

Tape::Id Tape::mul_scalar(Id a, double c) {
  Node nd;
  nd.op = Op::MulScalar;
  nd.a = a;
  nd.aux_d = c;
  nd.value = v(a);
  for (double& e : nd.value.data) e *= c;
  return push(std::move(nd));
}

Tape::Id Tape::softmax(Id logits) {
  const Tensor& lv = v(logits);
  require_matrix(lv, "softmax");
  if (lv.rows() != 1) throw ShapeMismatch("softmax: [1,M] row required");
  const std::size_t m = lv.cols();
  Node nd;
  nd.op = Op::Softmax;
  nd.a = logits;
  nd.value = Tensor::zeros({1, m});
  double mx = lv.data[0];
  for (std::size_t j = 1; j < m; ++j) mx = std::max(mx, lv.data[j]);
  double z = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    nd.value.data[j] = std::exp(lv.data[j] - mx);
    z += nd.value.data[j];
  }
  for (std::size_t j = 0; j < m; ++j) nd.value.data[j] /= z;
  return push(std::move(nd));
}

Tape::Id Tape::softmax_cross_entropy(Id logits, int label) {
  const Tensor& lv = v(logits);
  require_matrix(lv, "softmax_cross_entropy");
  if (lv.rows() != 1) throw ShapeMismatch("softmax_cross_entropy: [1,M] row required");
  const std::size_t m = lv.cols();
  if (label < 0 || static_cast<std::size_t>(label) >= m)
    throw IndexOutOfRange("softmax_cross_entropy: label out of range");
  Node nd;
  nd.op = Op::SoftmaxCe;
  nd.a = logits;
  nd.aux_i = label;
  nd.saved = Tensor::zeros({1, m});
  double mx = lv.data[0];
  for (std::size_t j = 1; j < m; ++j) mx = std::max(mx, lv.data[j]);
  double z = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    nd.saved.data[j] = std::exp(lv.data[j] - mx);
    z += nd.saved.data[j];
  }
  for (std::size_t j = 0; j < m; ++j) nd.saved.data[j] /= z;
  nd.value = Tensor::scalar(-std::log(nd.saved.data[static_cast<std::size_t>(label)]));
  return push(std::move(nd));
}

Tape::Id Tape::gaussian_log_density(double x, Id mu, Id sigma, double sigma_min) {
  const double mv = scalar(mu);
  const double sv = scalar(sigma);
  check_sigma(sv, sigma_min);
  Node nd;
  nd.op = Op::GaussLogp;
  nd.a = mu;
  nd.b = sigma;
  nd.aux_d = x;
  nd.aux_d2 = sigma_min;
  nd.value = Tensor::scalar(log_normal_density(x, mv, sv));
  return push(std::move(nd));
}

Tape::Id Tape::squared_error(Id a, double target) {
  const double av = scalar(a);
  Node nd;
  nd.op = Op::SquaredError;
  nd.a = a;
  nd.aux_d = target;
  nd.value = Tensor::scalar(0.5 * (av - target) * (av - target));
  return push(std::move(nd));
}

Tape::Id Tape::detach(Id a) {
  Node nd;
  nd.op = Op::Detach;
  nd.a = a;
  nd.value = v(a);
  return push(std::move(nd));
}

double Tape::scalar(Id id) const {
  const Tensor& t = v(id);
  if (t.size() != 1) throw ShapeMismatch("scalar: tensor has more than one element");
  return t.data[0];
}

void Tape::backward(Id root) {
  const std::size_t n = nodes_.size();
  if (root < 0 || static_cast<std::size_t>(root) >= n)
    throw IndexOutOfRange("backward: bad root");
  if (v(root).size() != 1) throw ShapeMismatch("backward: root must be scalar");

  // Reachability; Detach blocks descent.
  std::vector<char> need(n, 0);
  need[static_cast<std::size_t>(root)] = 1;
  for (std::size_t idx = static_cast<std::size_t>(root) + 1; idx-- > 0;) {
    if (!need[idx]) continue;
    const Node& nd = nodes_[idx];
    if (nd.op == Op::Detach || nd.op == Op::Leaf || nd.op == Op::Param) continue;
    if (nd.a >= 0) need[static_cast<std::size_t>(nd.a)] = 1;
    if (nd.b >= 0) need[static_cast<std::size_t>(nd.b)] = 1;
    if (nd.c >= 0) need[static_cast<std::size_t>(nd.c)] = 1;
    for (Id m : nd.multi) need[static_cast<std::size_t>(m)] = 1;
  }

  std::vector<Tensor> grads(n);
  auto g = [&](Id id) -> Tensor& {
    Tensor& t = grads[static_cast<std::size_t>(id)];
    if (t.data.empty()) t = Tensor::zeros(v(id).shape);
    return t;
  };
  auto wants = [&](Id id) {
    if (id < 0) return false;
    const Op op = nodes_[static_cast<std::size_t>(id)].op;
    return need[static_cast<std::size_t>(id)] && op != Op::Leaf;
  };

  g(root).data[0] = 1.0;

  for (std::size_t idx = static_cast<std::size_t>(root) + 1; idx-- > 0;) {
    if (!need[idx]) continue;
    Node& nd = nodes_[idx];
    Tensor& gy = grads[idx];
    if (gy.data.empty()) continue;  // never received gradient

    switch (nd.op) {
      case Op::Leaf:
        break;
      case Op::Param:
        if (!nd.pname.empty()) {
          auto it = pgrads_.find(nd.pname);
          if (it == pgrads_.end())
            it = pgrads_.emplace(nd.pname, Tensor::zeros(nd.value.shape)).first;
          for (std::size_t i = 0; i < gy.data.size(); ++i) it->second.data[i] += gy.data[i];
        }
        break;
      case Op::Linear: {
        const Tensor& xv = v(nd.a);
        const Tensor& wv = v(nd.b);
        const std::size_t rows = xv.rows(), din = xv.cols(), dout = wv.cols();
        const double* gp = gy.data.data();
        if (wants(nd.a)) {
          Tensor& gx = g(nd.a);
          const double* wp = wv.data.data();
          for (std::size_t i = 0; i < rows; ++i) {
            const double* gi = gp + i * dout;
            double* gxi = gx.data.data() + i * din;
            for (std::size_t k = 0; k < din; ++k) {
              const double* wk = wp + k * dout;
              double acc = 0.0;
              for (std::size_t j = 0; j < dout; ++j) acc += gi[j] * wk[j];
              gxi[k] += acc;
            }
          }
        }
        if (wants(nd.b)) {
          Tensor& gw = g(nd.b);
          const double* xp = xv.data.data();
          for (std::size_t i = 0; i < rows; ++i) {
            const double* gi = gp + i * dout;
            const double* xi = xp + i * din;
            for (std::size_t k = 0; k < din; ++k) {
              const double xk = xi[k];
              double* gwk = gw.data.data() + k * dout;
              for (std::size_t j = 0; j < dout; ++j) gwk[j] += xk * gi[j];
            }
          }
        }
        if (wants(nd.c)) {
          Tensor& gb = g(nd.c);
          for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < dout; ++j) gb.data[j] += gp[i * dout + j];
        }
        break;
      }
      case Op::Activation: {
        if (!wants(nd.a)) break;
        Tensor& gx = g(nd.a);
        const Tensor& xv = v(nd.a);
        const Tensor& yv = nd.value;
        switch (static_cast<Act>(nd.aux_i)) {
          case Act::Relu:
            for (std::size_t i = 0; i < gx.data.size(); ++i)
              if (xv.data[i] > 0.0) gx.data[i] += gy.data[i];
            break;
          case Act::Tanh:
            for (std::size_t i = 0; i < gx.data.size(); ++i)
              gx.data[i] += gy.data[i] * (1.0 - yv.data[i] * yv.data[i]);
            break;
          case Act::Sigmoid:
            for (std::size_t i = 0; i < gx.data.size(); ++i)
              gx.data[i] += gy.data[i] * yv.data[i] * (1.0 - yv.data[i]);
            break;
        }
        break;
      }
      case Op::ClampMin: {
        if (!wants(nd.a)) break;
        Tensor& gx = g(nd.a);
        const Tensor& xv = v(nd.a);
        for (std::size_t i = 0; i < gx.data.size(); ++i)
          if (xv.data[i] >= nd.aux_d) gx.data[i] += gy.data[i];
        break;
      }
      case Op::ConcatCols: {
        const std::size_t rows = v(nd.a).rows(), da = v(nd.a).cols(), db = v(nd.b).cols();
        if (wants(nd.a)) {
          Tensor& ga = g(nd.a);
          for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < da; ++j) ga.data[i * da + j] += gy.data[i * (da + db) + j];
        }
        if (wants(nd.b)) {
          Tensor& gb = g(nd.b);
          for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < db; ++j) gb.data[i * db + j] += gy.data[i * (da + db) + da + j];
        }
        break;
      }
      case Op::ConcatRows: {
        std::size_t at = 0;
        for (Id r : nd.multi) {
          const std::size_t sz = v(r).data.size();
          if (wants(r)) {
            Tensor& gr = g(r);
            for (std::size_t i = 0; i < sz; ++i) gr.data[i] += gy.data[at + i];
          }
          at += sz;
        }
        break;
      }
      case Op::RowsPrefix: {
        if (!wants(nd.a)) break;
        Tensor& gx = g(nd.a);
        for (std::size_t i = 0; i < gy.data.size(); ++i) gx.data[i] += gy.data[i];
        break;
      }
      case Op::Row: {
        if (!wants(nd.a)) break;
        Tensor& gx = g(nd.a);
        const std::size_t d = nd.value.cols();
        const std::size_t off = static_cast<std::size_t>(nd.aux_i) * d;
        for (std::size_t j = 0; j < d; ++j) gx.data[off + j] += gy.data[j];
        break;
      }
      case Op::RepeatRow: {
        if (!wants(nd.a)) break;
        Tensor& gx = g(nd.a);
        const std::size_t rows = nd.value.rows(), d = nd.value.cols();
        for (std::size_t i = 0; i < rows; ++i)
          for (std::size_t j = 0; j < d; ++j) gx.data[j] += gy.data[i * d + j];
        break;
      }
      case Op::PrefixMean: {
        if (!wants(nd.a)) break;
        Tensor& gx = g(nd.a);
        const std::size_t rows = nd.value.rows(), d = nd.value.cols();
        std::vector<double> acc(d, 0.0);
        for (std::size_t i = rows; i-- > 0;) {
          const double inv = 1.0 / static_cast<double>(i + 1);
          for (std::size_t j = 0; j < d; ++j) {
            acc[j] += gy.data[i * d + j] * inv;
            gx.data[i * d + j] += acc[j];
          }
        }
        break;
      }
      case Op::MeanRows: {
        if (!wants(nd.a)) break;
        Tensor& gx = g(nd.a);
        const std::size_t rows = v(nd.a).rows(), d = v(nd.a).cols();
        const double inv = 1.0 / static_cast<double>(rows);
        for (std::size_t i = 0; i < rows; ++i)
          for (std::size_t j = 0; j < d; ++j) gx.data[i * d + j] += gy.data[j] * inv;
        break;
      }
      case Op::SoftmaxCol: {
        if (!wants(nd.a)) break;
        Tensor& gs = g(nd.a);
        const std::size_t rows = nd.value.rows();
        double dot = 0.0;
        for (std::size_t i = 0; i < rows; ++i) dot += gy.data[i] * nd.value.data[i];
        for (std::size_t i = 0; i < rows; ++i)
          gs.data[i] += nd.value.data[i] * (gy.data[i] - dot);
        break;
      }
      case Op::RowsWeightedSum: {
        const Tensor& wv = v(nd.a);
        const Tensor& xv = v(nd.b);
        const std::size_t rows = xv.rows(), d = xv.cols();
        if (wants(nd.a)) {
          Tensor& gw = g(nd.a);
          for (std::size_t i = 0; i < rows; ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j < d; ++j) acc += gy.data[j] * xv.data[i * d + j];
            gw.data[i] += acc;
          }
        }
        if (wants(nd.b)) {
          Tensor& gx = g(nd.b);
          for (std::size_t i = 0; i < rows; ++i) {
            const double wi = wv.data[i];
            for (std::size_t j = 0; j < d; ++j) gx.data[i * d + j] += wi * gy.data[j];
          }
        }
        break;
      }
      case Op::Add: {
        if (wants(nd.a)) {
          Tensor& ga = g(nd.a);
          for (std::size_t i = 0; i < gy.data.size(); ++i) ga.data[i] += gy.data[i];
        }
        if (wants(nd.b)) {
          Tensor& gb = g(nd.b);
          for (std::size_t i = 0; i < gy.data.size(); ++i) gb.data[i] += gy.data[i];
        }
        break;
      }
      case Op::MulScalar: {
        if (!wants(nd.a)) break;
        Tensor& ga = g(nd.a);
        for (std::size_t i = 0; i < gy.data.size(); ++i) ga.data[i] += gy.data[i] * nd.aux_d;
        break;
      }
      case Op::Softmax: {
        if (!wants(nd.a)) break;
        Tensor& gl = g(nd.a);
        const std::size_t m = nd.value.cols();
        double dot = 0.0;
        for (std::size_t j = 0; j < m; ++j) dot += gy.data[j] * nd.value.data[j];
        for (std::size_t j = 0; j < m; ++j)
          gl.data[j] += nd.value.data[j] * (gy.data[j] - dot);
        break;
      }
      case Op::SoftmaxCe: {
        if (!wants(nd.a)) break;
        Tensor& gl = g(nd.a);
        const std::size_t m = nd.saved.cols();
        const double s = gy.data[0];
        for (std::size_t j = 0; j < m; ++j) {
          const double onehot = (static_cast<int>(j) == nd.aux_i) ? 1.0 : 0.0;
          gl.data[j] += s * (nd.saved.data[j] - onehot);
        }
        break;
      }
      case Op::GaussLogp: {
        const double mu = v(nd.a).data[0];
        const double sg = v(nd.b).data[0];
        const double s = gy.data[0];
        if (wants(nd.a)) g(nd.a).data[0] += s * xi_mu(nd.aux_d, mu, sg, nd.aux_d2);
        if (wants(nd.b)) g(nd.b).data[0] += s * xi_sigma(nd.aux_d, mu, sg, nd.aux_d2);
        break;
      }
      case Op::SquaredError: {
        if (!wants(nd.a)) break;
        g(nd.a).data[0] += gy.data[0] * (v(nd.a).data[0] - nd.aux_d);
        break;
      }
      case Op::Detach:
        break;
    }
  }
}

void Tape::accumulate_into(ParameterStore& store, double scale) const {
  for (const auto& [name, gt] : pgrads_) {
    Tensor& dst = store.grad(name);
    if (!dst.same_shape(gt)) throw ShapeMismatch("gradient shape mismatch: " + name);
    for (std::size_t i = 0; i < gt.data.size(); ++i) dst.data[i] += scale * gt.data[i];
  }
}

}  // namespace hglance
