#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>

namespace enzq {

using Complex = std::complex<double>;
using RMatrix = Eigen::MatrixXd;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

// Zero-based qubit index. Qubit 0 is the most significant bit of a
// full-space basis index; |g> maps to bit 0 and |e> to bit 1.
using QubitIndex = std::size_t;

enum class ExecPolicy { Serial, Parallel };

}  // namespace enzq
