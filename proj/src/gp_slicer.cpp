#include "metaot/gp_slicer.hpp"

#include "metaot/errors.hpp"

#include <cmath>

namespace metaot {

QuadratureGrid make_grid(int knots, GridKind kind) {
    QuadratureGrid grid;
    grid.kind = kind;
    if (kind == GridKind::trapezoid) {
        if (knots < 2) throw InvalidInput("trapezoidal grid needs at least 2 knots");
        const double h = 1.0 / static_cast<double>(knots - 1);
        grid.knots.resize(knots);
        grid.weights = Eigen::VectorXd::Constant(knots, h);
        for (int r = 0; r < knots; ++r) grid.knots[r] = static_cast<double>(r) * h;
        grid.knots[knots - 1] = 1.0;
        grid.weights[0] = 0.5 * h;
        grid.weights[knots - 1] = 0.5 * h;
    } else {
        if (knots < 1) throw InvalidInput("midpoint grid needs at least 1 knot");
        const double h = 1.0 / static_cast<double>(knots);
        grid.knots.resize(knots);
        grid.weights = Eigen::VectorXd::Constant(knots, h);
        for (int r = 0; r < knots; ++r) grid.knots[r] = (static_cast<double>(r) + 0.5) * h;
    }
    return grid;
}

void validate_kernel(const KernelSpec& kernel) {
    if (const auto* rbf = std::get_if<RbfKernel>(&kernel)) {
        if (!(rbf->sigma > 0.0) || !std::isfinite(rbf->sigma)) {
            throw InvalidInput("RBF kernel needs sigma > 0");
        }
    }
}

double kernel_value(const KernelSpec& kernel, double s, double t) {
    if (const auto* rbf = std::get_if<RbfKernel>(&kernel)) {
        const double d = s - t;
        return std::exp(-d * d / (2.0 * rbf->sigma * rbf->sigma));
    }
    return std::min(s, t);
}

Eigen::MatrixXd covariance_matrix(const KernelSpec& kernel, const QuadratureGrid& grid) {
    validate_kernel(kernel);
    const Eigen::Index r = grid.size();
    Eigen::MatrixXd k(r, r);
    for (Eigen::Index i = 0; i < r; ++i) {
        k(i, i) = kernel_value(kernel, grid.knots[i], grid.knots[i]);
        for (Eigen::Index j = 0; j < i; ++j) {
            const double v = kernel_value(kernel, grid.knots[i], grid.knots[j]);
            k(i, j) = v;
            k(j, i) = v;
        }
    }
    return k;
}

GpSampler::GpSampler(const KernelSpec& kernel, const QuadratureGrid& grid) {
    const Eigen::MatrixXd k = covariance_matrix(kernel, grid);
    const Eigen::Index r = k.rows();
    for (double jitter = 1e-10; jitter <= 1e-6 * (1 + 1e-9); jitter *= 10.0) {
        Eigen::LLT<Eigen::MatrixXd> llt(k + jitter * Eigen::MatrixXd::Identity(r, r));
        if (llt.info() == Eigen::Success) {
            chol_ = llt.matrixL();
            jitter_ = jitter;
            return;
        }
    }
    throw NumericalError("covariance factorization failed even with jitter 1e-6");
}

Eigen::MatrixXd GpSampler::sample(std::mt19937_64& rng, Eigen::Index count) const {
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXd z(chol_.rows(), count);
    for (Eigen::Index c = 0; c < count; ++c)
        for (Eigen::Index r = 0; r < chol_.rows(); ++r) z(r, c) = normal(rng);
    return chol_.triangularView<Eigen::Lower>() * z;
}

std::vector<GPPathSample> sample_paths(const KernelSpec& kernel, const QuadratureGrid& grid,
                                       int count, std::mt19937_64& rng) {
    if (count < 1) throw InvalidInput("sample_paths needs count >= 1");
    const GpSampler sampler(kernel, grid);
    const Eigen::MatrixXd draws = sampler.sample(rng, count);
    std::vector<GPPathSample> paths(static_cast<std::size_t>(count));
    for (int c = 0; c < count; ++c) paths[static_cast<std::size_t>(c)].values = draws.col(c);
    return paths;
}

Eigen::VectorXd weighted_quantile_row(const Quantile1D& q, const QuadratureGrid& grid,
                                      Interpolation mode) {
    Eigen::VectorXd row(grid.size());
    eval_quantile_sorted(q, std::span<const double>(grid.knots.data(), grid.knots.size()), mode,
                         std::span<double>(row.data(), row.size()));
    return row.cwiseProduct(grid.weights);
}

double project_quantile(const Quantile1D& q, const GPPathSample& path, const QuadratureGrid& grid,
                        Interpolation mode) {
    if (path.values.size() != grid.size()) {
        throw InvalidInput("path length does not match grid length");
    }
    return weighted_quantile_row(q, grid, mode).dot(path.values);
}

}  // namespace metaot
