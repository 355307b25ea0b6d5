#pragma once

#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "rarenmt/error.hpp"
#include "rarenmt/nmt/tensor.hpp"

namespace rarenmt {

// Reverse-mode tape over Eigen matrices. Every op records a backward closure
// over its input node ids; backward() walks the nodes in reverse creation
// order, which is a topological order by construction. Leaf nodes are bound
// to Tensor parameters and accumulate straight into Tensor::grad, so the
// gradients of several tapes (e.g. the sentences of a batch) add up.
template <class S>
class Tape {
 public:
  using M = Matrix<S>;

  int constant(M value) { return push(std::move(value), nullptr); }

  int leaf(Tensor<S>& tensor) {
    Node node;
    node.bound = &tensor;
    nodes_.push_back(std::move(node));
    return static_cast<int>(nodes_.size()) - 1;
  }

  const M& value(int id) const {
    const Node& n = nodes_[id];
    return n.bound ? n.bound->value : n.value;
  }

  M& grad(int id) {
    Node& n = nodes_[id];
    if (n.bound) return n.bound->grad;
    if (n.grad.size() == 0) n.grad = M::Zero(n.value.rows(), n.value.cols());
    return n.grad;
  }

  // ---- ops ----

  int matmul(int a, int b) {
    return push(value(a) * value(b), [a, b](Tape& t, int out) {
      const M& g = t.grad(out);
      t.grad(a).noalias() += g * t.value(b).transpose();
      t.grad(b).noalias() += t.value(a).transpose() * g;
    });
  }

  int add(int a, int b) {
    return push(value(a) + value(b), [a, b](Tape& t, int out) {
      const M& g = t.grad(out);
      t.grad(a) += g;
      t.grad(b) += g;
    });
  }

  int tanh(int a) {
    return push(value(a).array().tanh().matrix(), [a](Tape& t, int out) {
      const M& y = t.value(out);
      t.grad(a).array() += t.grad(out).array() * (S(1) - y.array().square());
    });
  }

  int sigmoid(int a) {
    M y = (S(1) / (S(1) + (-value(a).array()).exp())).matrix();
    return push(std::move(y), [a](Tape& t, int out) {
      const M& y_ = t.value(out);
      t.grad(a).array() += t.grad(out).array() * y_.array() * (S(1) - y_.array());
    });
  }

  int cmul(int a, int b) {
    return push((value(a).array() * value(b).array()).matrix(), [a, b](Tape& t, int out) {
      const M& g = t.grad(out);
      t.grad(a).array() += g.array() * t.value(b).array();
      t.grad(b).array() += g.array() * t.value(a).array();
    });
  }

  int concat_rows(int a, int b) {
    M y(value(a).rows() + value(b).rows(), value(a).cols());
    y << value(a), value(b);
    return push(std::move(y), [a, b](Tape& t, int out) {
      const M& g = t.grad(out);
      Eigen::Index ra = t.value(a).rows();
      t.grad(a) += g.topRows(ra);
      t.grad(b) += g.bottomRows(g.rows() - ra);
    });
  }

  int slice_rows(int a, Eigen::Index start, Eigen::Index count) {
    return push(value(a).middleRows(start, count), [a, start, count](Tape& t, int out) {
      t.grad(a).middleRows(start, count) += t.grad(out);
    });
  }

  int col(int a, Eigen::Index index) {
    return push(value(a).col(index), [a, index](Tape& t, int out) {
      t.grad(a).col(index) += t.grad(out);
    });
  }

  // [c_0 c_1 ... c_{n-1}] from column-vector nodes.
  int hstack(std::vector<int> columns) {
    if (columns.empty()) throw UsageError("hstack of zero columns");
    M y(value(columns[0]).rows(), static_cast<Eigen::Index>(columns.size()));
    for (std::size_t i = 0; i < columns.size(); ++i) y.col(i) = value(columns[i]);
    return push(std::move(y), [columns = std::move(columns)](Tape& t, int out) {
      const M& g = t.grad(out);
      for (std::size_t i = 0; i < columns.size(); ++i)
        t.grad(columns[i]) += g.col(static_cast<Eigen::Index>(i));
    });
  }

  // Y = A + v * ones(1, cols): adds a column vector to every column.
  int broadcast_add_col(int a, int v) {
    M y = value(a);
    y.colwise() += value(v).col(0);
    return push(std::move(y), [a, v](Tape& t, int out) {
      const M& g = t.grad(out);
      t.grad(a) += g;
      t.grad(v) += g.rowwise().sum();
    });
  }

  // y = A^T v  (A: m x n, v: m x 1, y: n x 1)
  int matTvec(int a, int v) {
    return push(value(a).transpose() * value(v), [a, v](Tape& t, int out) {
      const M& g = t.grad(out);
      t.grad(a).noalias() += t.value(v) * g.transpose();
      t.grad(v).noalias() += t.value(a) * g;
    });
  }

  int softmax_vec(int a) {
    const M& x = value(a);
    S max = x.maxCoeff();
    M y = (x.array() - max).exp().matrix();
    y /= y.sum();
    return push(std::move(y), [a](Tape& t, int out) {
      const M& y_ = t.value(out);
      const M& g = t.grad(out);
      S dot = (g.array() * y_.array()).sum();
      t.grad(a).array() += y_.array() * (g.array() - dot);
    });
  }

  // Gather of embedding table columns with scatter-add on the way back.
  int embed_cols(Tensor<S>& table, std::vector<int> ids) {
    M y(table.rows(), static_cast<Eigen::Index>(ids.size()));
    for (std::size_t i = 0; i < ids.size(); ++i) y.col(i) = table.value.col(ids[i]);
    Tensor<S>* bound = &table;
    return push(std::move(y), [bound, ids = std::move(ids)](Tape& t, int out) {
      const M& g = t.grad(out);
      for (std::size_t i = 0; i < ids.size(); ++i)
        bound->grad.col(ids[i]) += g.col(static_cast<Eigen::Index>(i));
    });
  }

  int scale(int a, S factor) {
    return push(value(a) * factor, [a, factor](Tape& t, int out) {
      t.grad(a) += t.grad(out) * factor;
    });
  }

  // Numerically stable softmax cross-entropy against one target index.
  // Value: logsumexp(logits) - logits[target]; gradient: softmax - onehot.
  int cross_entropy(int logits, Eigen::Index target) {
    const M& x = value(logits);
    S max = x.maxCoeff();
    S sum = (x.array() - max).exp().sum();
    M y(1, 1);
    y(0, 0) = max + std::log(sum) - x(target, 0);
    return push(std::move(y), [logits, target](Tape& t, int out) {
      const M& x_ = t.value(logits);
      S m = x_.maxCoeff();
      M soft = (x_.array() - m).exp().matrix();
      soft /= soft.sum();
      soft(target, 0) -= S(1);
      t.grad(logits) += soft * t.grad(out)(0, 0);
    });
  }

  // Seeds d(root)/d(root) = seed and propagates through every node that the
  // root depends on. Nodes whose grad was never touched are skipped.
  void backward(int root, S seed = S(1)) {
    if (value(root).size() != 1) throw NumericError("backward root must be a scalar node");
    grad(root)(0, 0) += seed;
    for (int id = root; id >= 0; --id) {
      Node& n = nodes_[id];
      if (!n.bound && n.grad.size() == 0) continue;
      if (n.backward) n.backward(*this, id);
    }
  }

  std::size_t size() const { return nodes_.size(); }

 private:
  struct Node {
    M value;
    M grad;
    Tensor<S>* bound = nullptr;
    std::function<void(Tape&, int)> backward;
  };

  int push(M value, std::function<void(Tape&, int)> backward) {
    Node node;
    node.value = std::move(value);
    node.backward = std::move(backward);
    nodes_.push_back(std::move(node));
    return static_cast<int>(nodes_.size()) - 1;
  }

  std::vector<Node> nodes_;
};

}  // namespace rarenmt
