#pragma once

#include <complex>

#include <Eigen/Dense>

namespace gie {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Matrix4c = Eigen::Matrix4cd;

}  // namespace gie
