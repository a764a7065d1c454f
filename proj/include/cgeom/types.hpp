#pragma once

#include <Eigen/Dense>

#include <functional>

namespace cgeom {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// h_K(x) for a body K living in some fixed dimension.
using SupportFn = std::function<double(const Vec&)>;
/// Minkowski functional ||x||_K.
using GaugeFn = std::function<double(const Vec&)>;
/// Decides x in K.
using MembershipFn = std::function<bool(const Vec&)>;

}  // namespace cgeom
