#pragma once

#include "metaot/ot1d.hpp"

#include <Eigen/Dense>

#include <random>
#include <variant>
#include <vector>

namespace metaot {

enum class GridKind {
    trapezoid,  // knots (r-1)/(R-1) including both endpoints, trapezoidal weights
    midpoint,   // knots (r-1/2)/R, equal weights 1/R
};

/// Quadrature rule on [0, 1].
struct QuadratureGrid {
    Eigen::VectorXd knots;
    Eigen::VectorXd weights;
    GridKind kind = GridKind::trapezoid;

    Eigen::Index size() const { return knots.size(); }
};

QuadratureGrid make_grid(int knots, GridKind kind = GridKind::trapezoid);

/// Squared-exponential kernel exp(-|s - t|^2 / (2 sigma^2)).
struct RbfKernel {
    double sigma = 0.1;
};

/// Brownian-motion kernel min(s, t).
struct BrownianKernel {};

using KernelSpec = std::variant<RbfKernel, BrownianKernel>;

double kernel_value(const KernelSpec& kernel, double s, double t);
void validate_kernel(const KernelSpec& kernel);

Eigen::MatrixXd covariance_matrix(const KernelSpec& kernel, const QuadratureGrid& grid);

/// Values of one Gaussian-process sample path at the grid knots.
struct GPPathSample {
    Eigen::VectorXd values;
};

/// Draws zero-mean Gaussian vectors with the kernel's covariance on a fixed
/// grid. The lower Cholesky factor is computed once; the diagonal is jittered
/// starting at 1e-10 and escalated tenfold up to 1e-6 before giving up.
class GpSampler {
public:
    GpSampler(const KernelSpec& kernel, const QuadratureGrid& grid);

    /// `count` paths as columns of an R x count matrix.
    Eigen::MatrixXd sample(std::mt19937_64& rng, Eigen::Index count) const;

    const Eigen::MatrixXd& factor() const { return chol_; }
    double jitter() const { return jitter_; }

private:
    Eigen::MatrixXd chol_;
    double jitter_ = 0.0;
};

std::vector<GPPathSample> sample_paths(const KernelSpec& kernel, const QuadratureGrid& grid,
                                       int count, std::mt19937_64& rng);

/// Quadrature value of <Q, g>: sum_r w_r Q(t_r) g(t_r).
double project_quantile(const Quantile1D& q, const GPPathSample& path, const QuadratureGrid& grid,
                        Interpolation mode);

/// Row vector (w_r Q(t_r))_r, so that <Q, g> is its dot product with the path values.
Eigen::VectorXd weighted_quantile_row(const Quantile1D& q, const QuadratureGrid& grid,
                                      Interpolation mode);

}  // namespace metaot
