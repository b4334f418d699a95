#pragma once

#include <Eigen/Dense>

namespace tattr {

/// Dense real vector of n input features (pixel intensities or abstract features).
using FeatureVector = Eigen::VectorXd;

template <class Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <class Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

}  // namespace tattr
