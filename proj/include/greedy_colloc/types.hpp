#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace gcol {

/// Points live in R^3; planar problems leave the third coordinate at zero.
using Point = Eigen::Vector3d;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;
using IndexList = std::vector<Index>;

}  // namespace gcol
