#pragma once

#include <Eigen/Dense>

#include "twc/bigint.hpp"

namespace twc {

template <class Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <class Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using IntMatrix = Mat<BigInt>;
using IntVector = Vec<BigInt>;

template <class Scalar>
bool is_zero(const Mat<Scalar>& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (!(m(i, j) == Scalar(0))) return false;
  return true;
}

template <class Scalar>
bool is_zero(const Vec<Scalar>& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (!(v(i) == Scalar(0))) return false;
  return true;
}

}  // namespace twc
