#pragma once

#include "metaot/measures.hpp"
#include "metaot/sqw_dsw.hpp"

#include <Eigen/Dense>

#include <random>
#include <string>
#include <vector>

namespace metaot {

// Synthetic data used by the experiment pipelines and the test suites.

enum class Shape2D { circle, square, star };

std::string to_string(Shape2D shape);

/// `n` samples along the boundary of a unit-size outline (uniform in arc
/// length), then a random rotation, a random translation in [-5, 5]^2 and
/// Gaussian jitter of 1% of the shape size.
Eigen::MatrixXd sample_shape_2d(Shape2D shape, int n, std::mt19937_64& rng);

enum class Solid3D { ellipsoid, box };

/// `n` points on the surface of an axis-aligned solid with semi-axes `axes`.
Eigen::MatrixXd sample_solid_3d(Solid3D solid, const Eigen::Vector3d& axes, int n,
                                std::mt19937_64& rng);

/// Meta-measure of N inner measures, each n uniform points in [-1, 1]^d.
MetaMeasure random_meta(int N, int n, int d, std::mt19937_64& rng);

/// Meta-measure with random sizes N in [1, max_N], n_i in [1, max_n].
MetaMeasure random_meta_varying(int max_N, int max_n, int d, std::mt19937_64& rng);

/// Function families on [0, 1] evaluated at the knots of `grid`:
/// pair 1: cos(i x), i = 1..5   vs  sin(j x + j pi), j = 1..10
/// pair 2: cos(i x + i) + sin(x) vs  sin(j x)^j
std::pair<FunctionSample, FunctionSample> functional_test_pair(int which,
                                                               const QuadratureGrid& grid);

}  // namespace metaot
