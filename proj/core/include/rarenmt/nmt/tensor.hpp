#pragma once

#include <Eigen/Core>
#include <string>

namespace rarenmt {

template <class S>
using Matrix = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;

// A named trainable parameter with its gradient accumulator.
template <class S>
struct Tensor {
  std::string name;
  Matrix<S> value;
  Matrix<S> grad;

  Tensor(std::string tensor_name, Eigen::Index rows, Eigen::Index cols)
      : name(std::move(tensor_name)),
        value(Matrix<S>::Zero(rows, cols)),
        grad(Matrix<S>::Zero(rows, cols)) {}

  Eigen::Index rows() const { return value.rows(); }
  Eigen::Index cols() const { return value.cols(); }
  Eigen::Index size() const { return value.size(); }
  void zero_grad() { grad.setZero(); }
};

}  // namespace rarenmt
