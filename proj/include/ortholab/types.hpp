#pragma once

#include <Eigen/Dense>
#include <cstdint>

namespace ortholab {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;
using Seed = std::uint64_t;

}  // namespace ortholab
