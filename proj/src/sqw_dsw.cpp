#include "metaot/sqw_dsw.hpp"

#include "metaot/discrete_ot.hpp"
#include "metaot/errors.hpp"
#include "metaot/ot1d.hpp"
#include "metaot/parallel.hpp"
#include "metaot/rng.hpp"
#include "metaot/sphere.hpp"

#include <cmath>
#include <functional>
#include <optional>

namespace metaot {

void SlicingConfig::validate() const {
    if (outer_S < 1 || inner_per_outer < 1) {
        throw InvalidInput("slicing config needs outer_S >= 1 and inner_per_outer >= 1");
    }
    if (grid.size() < 1 || grid.weights.size() != grid.size()) {
        throw InvalidInput("slicing config has an invalid quadrature grid");
    }
    validate_kernel(kernel);
}

namespace {

double pairwise_sum(const double* x, std::size_t n) {
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += x[i];
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(x, half) + pairwise_sum(x + half, n - half);
}

double mean_of(const std::vector<double>& x) {
    return pairwise_sum(x.data(), x.size()) / static_cast<double>(x.size());
}

double sample_variance(const std::vector<double>& x, double mean) {
    if (x.size() < 2) return 0.0;
    std::vector<double> sq(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) sq[i] = (x[i] - mean) * (x[i] - mean);
    return pairwise_sum(sq.data(), sq.size()) / static_cast<double>(x.size() - 1);
}

/// Rows (w_r Q_i(t_r))_r for every inner measure, optionally after projecting
/// onto `theta`.
Eigen::MatrixXd quantile_rows(const MetaMeasure& meta, const Eigen::VectorXd* theta,
                              const QuadratureGrid& grid, Interpolation mode) {
    Eigen::MatrixXd rows(static_cast<Eigen::Index>(meta.size()), grid.size());
    Eigen::VectorXd projected;
    for (std::size_t i = 0; i < meta.size(); ++i) {
        const auto& m = meta.inner(i);
        if (theta) {
            projected.noalias() = m.points() * (*theta);
        } else {
            projected = m.points().col(0);
        }
        const Quantile1D q = quantile_of(
            std::span<const double>(projected.data(), static_cast<std::size_t>(projected.size())),
            std::span<const double>(m.weights().data(), static_cast<std::size_t>(m.size())));
        rows.row(static_cast<Eigen::Index>(i)) = weighted_quantile_row(q, grid, mode).transpose();
    }
    return rows;
}

/// Quantiles of the scalar outer measures, one per path column.
std::vector<Quantile1D> path_quantiles(const Eigen::MatrixXd& rows, const Eigen::VectorXd& outer,
                                       const Eigen::MatrixXd& paths) {
    const Eigen::MatrixXd scalars = rows * paths;  // N x P
    std::vector<Quantile1D> out;
    out.reserve(static_cast<std::size_t>(paths.cols()));
    for (Eigen::Index p = 0; p < paths.cols(); ++p) {
        out.push_back(quantile_of(
            std::span<const double>(scalars.col(p).data(), static_cast<std::size_t>(scalars.rows())),
            std::span<const double>(outer.data(), static_cast<std::size_t>(outer.size()))));
    }
    return out;
}

using RowsFn = std::function<Eigen::MatrixXd(std::size_t item, const Eigen::VectorXd* theta)>;

/// Squared per-projection distances for every unordered pair (i < j), in
/// pair order (0,1), (0,2), ..., (1,2), ...
std::vector<std::vector<double>> pair_terms(std::size_t items, const RowsFn& rows_for,
                                            const std::vector<Eigen::VectorXd>& outer,
                                            std::optional<Eigen::Index> sphere_dim,
                                            const SlicingConfig& config) {
    config.validate();
    const std::size_t pairs = items * (items - 1) / 2;
    const auto total = static_cast<std::size_t>(config.total());
    const auto inner = static_cast<std::size_t>(config.inner_per_outer);
    std::vector<std::vector<double>> terms(pairs, std::vector<double>(total, 0.0));
    if (pairs == 0) return terms;

    const GpSampler sampler(config.kernel, config.grid);
    const SeedSequence seeds(config.seed);
    parallel_for(static_cast<std::size_t>(config.outer_S), config.threads, [&](std::size_t s) {
        std::optional<Direction> theta;
        if (sphere_dim) {
            auto dir_rng = seeds.stream("direction", s);
            theta = sample_direction(*sphere_dim, dir_rng);
        }
        auto path_rng = seeds.stream("paths", s);
        const Eigen::MatrixXd paths = sampler.sample(path_rng, config.inner_per_outer);
        std::vector<std::vector<Quantile1D>> quantiles(items);
        for (std::size_t k = 0; k < items; ++k) {
            const Eigen::MatrixXd rows = rows_for(k, theta ? &theta->vector() : nullptr);
            quantiles[k] = path_quantiles(rows, outer[k], paths);
        }
        std::size_t pair = 0;
        for (std::size_t i = 0; i < items; ++i) {
            for (std::size_t j = i + 1; j < items; ++j, ++pair) {
                for (std::size_t p = 0; p < inner; ++p) {
                    terms[pair][s * inner + p] = squared_distance(quantiles[i][p], quantiles[j][p]);
                }
            }
        }
    });
    return terms;
}

Eigen::MatrixXd to_matrix(std::size_t items, const std::vector<std::vector<double>>& terms) {
    const auto k = static_cast<Eigen::Index>(items);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(k, k);
    std::size_t pair = 0;
    for (Eigen::Index i = 0; i < k; ++i) {
        for (Eigen::Index j = i + 1; j < k; ++j, ++pair) {
            const double v = std::sqrt(mean_of(terms[pair]));
            m(i, j) = v;
            m(j, i) = v;
        }
    }
    return m;
}

void require_same_dim(const std::vector<MetaMeasure>& metas) {
    if (metas.empty()) throw InvalidInput("need at least one meta-measure");
    for (const auto& m : metas) {
        if (m.dim() != metas.front().dim()) throw InvalidInput("dimension mismatch");
    }
}

void require_1d(const std::vector<MetaMeasure>& metas) {
    require_same_dim(metas);
    if (metas.front().dim() != 1) {
        throw InvalidInput("SQW needs 1-dimensional meta-measures, got d = " +
                           std::to_string(metas.front().dim()));
    }
}

std::vector<Eigen::VectorXd> outer_weights_of(const std::vector<MetaMeasure>& metas) {
    std::vector<Eigen::VectorXd> out;
    for (const auto& m : metas) out.push_back(m.outer_weights());
    return out;
}

std::vector<std::vector<double>> meta_terms(const std::vector<MetaMeasure>& metas,
                                            const SlicingConfig& config, bool sphere) {
    const RowsFn rows_for = [&](std::size_t k, const Eigen::VectorXd* theta) {
        return quantile_rows(metas[k], theta, config.grid, config.interpolation);
    };
    return pair_terms(metas.size(), rows_for, outer_weights_of(metas),
                      sphere ? std::optional<Eigen::Index>(metas.front().dim()) : std::nullopt,
                      config);
}

}  // namespace

DistanceEstimate summarize_squared(const std::vector<double>& squared_terms, int block) {
    if (squared_terms.empty()) throw InvalidInput("no projection terms to summarize");
    DistanceEstimate est;
    est.S = static_cast<long>(squared_terms.size());
    const double mean = mean_of(squared_terms);
    double se_mean = 0.0;
    const std::size_t b = static_cast<std::size_t>(std::max(block, 1));
    const std::size_t blocks = squared_terms.size() / b;
    if (b > 1 && blocks >= 2 && blocks * b == squared_terms.size()) {
        std::vector<double> means(blocks);
        for (std::size_t k = 0; k < blocks; ++k) {
            means[k] = pairwise_sum(squared_terms.data() + k * b, b) / static_cast<double>(b);
        }
        se_mean = std::sqrt(sample_variance(means, mean) / static_cast<double>(blocks));
    } else {
        se_mean = std::sqrt(sample_variance(squared_terms, mean) /
                            static_cast<double>(squared_terms.size()));
    }
    est.value = std::sqrt(std::max(mean, 0.0));
    est.std_error = est.value > 0.0 ? se_mean / (2.0 * est.value) : 0.0;
    return est;
}

DistanceEstimate sqw(const MetaMeasure& a, const MetaMeasure& b,
                     const std::vector<GPPathSample>& paths, const QuadratureGrid& grid,
                     Interpolation interpolation) {
    require_1d({a, b});
    if (paths.empty()) throw InvalidInput("sqw needs at least one path");
    Eigen::MatrixXd g(grid.size(), static_cast<Eigen::Index>(paths.size()));
    for (std::size_t p = 0; p < paths.size(); ++p) {
        if (paths[p].values.size() != grid.size()) {
            throw InvalidInput("path length does not match grid length");
        }
        g.col(static_cast<Eigen::Index>(p)) = paths[p].values;
    }
    const auto qa = path_quantiles(quantile_rows(a, nullptr, grid, interpolation),
                                   a.outer_weights(), g);
    const auto qb = path_quantiles(quantile_rows(b, nullptr, grid, interpolation),
                                   b.outer_weights(), g);
    std::vector<double> terms(paths.size());
    for (std::size_t p = 0; p < paths.size(); ++p) terms[p] = squared_distance(qa[p], qb[p]);
    return summarize_squared(terms);
}

DistanceEstimate sqw(const MetaMeasure& a, const MetaMeasure& b, const SlicingConfig& config) {
    std::vector<MetaMeasure> metas{a, b};
    require_1d(metas);
    return summarize_squared(meta_terms(metas, config, false).front());
}

Eigen::MatrixXd sqw_distance_matrix(const std::vector<MetaMeasure>& metas,
                                    const SlicingConfig& config) {
    require_1d(metas);
    return to_matrix(metas.size(), meta_terms(metas, config, false));
}

DistanceEstimate dsw(const MetaMeasure& a, const MetaMeasure& b, const SlicingConfig& config) {
    std::vector<MetaMeasure> metas{a, b};
    require_same_dim(metas);
    return summarize_squared(meta_terms(metas, config, true).front(), config.inner_per_outer);
}

Eigen::MatrixXd dsw_distance_matrix(const std::vector<MetaMeasure>& metas,
                                    const SlicingConfig& config) {
    require_same_dim(metas);
    return to_matrix(metas.size(), meta_terms(metas, config, true));
}

DistanceEstimate sw_wow(const MetaMeasure& a, const MetaMeasure& b, int outer_S,
                        std::uint64_t seed, unsigned threads) {
    if (a.dim() != b.dim()) throw InvalidInput("dimension mismatch");
    if (outer_S < 1) throw InvalidInput("sw_wow needs outer_S >= 1");
    const SeedSequence seeds(seed);
    std::vector<double> terms(static_cast<std::size_t>(outer_S));
    parallel_for(terms.size(), threads, [&](std::size_t s) {
        auto rng = seeds.stream("direction", s);
        const Direction theta = sample_direction(a.dim(), rng);
        auto quantiles = [&](const MetaMeasure& meta) {
            std::vector<Quantile1D> out;
            Eigen::VectorXd projected;
            for (const auto& m : meta.inner()) {
                projected.noalias() = m.points() * theta.vector();
                out.push_back(quantile_of(
                    std::span<const double>(projected.data(), static_cast<std::size_t>(projected.size())),
                    std::span<const double>(m.weights().data(), static_cast<std::size_t>(m.size()))));
            }
            return out;
        };
        const auto qa = quantiles(a);
        const auto qb = quantiles(b);
        Eigen::MatrixXd cost(static_cast<Eigen::Index>(qa.size()), static_cast<Eigen::Index>(qb.size()));
        for (std::size_t i = 0; i < qa.size(); ++i)
            for (std::size_t j = 0; j < qb.size(); ++j)
                cost(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                    squared_distance(qa[i], qb[j]);
        terms[s] = std::max(0.0, solve_exact(CostMatrix(std::move(cost)), a.outer_weights(),
                                             b.outer_weights())
                                     .objective);
    });
    return summarize_squared(terms);
}

DistanceEstimate sliced_l2(const FunctionSample& a, const FunctionSample& b,
                           const SlicingConfig& config) {
    for (const FunctionSample* f : {&a, &b}) {
        if (f->values.cols() != config.grid.size()) {
            throw InvalidInput("function samples must have one column per grid knot");
        }
        if (f->weights.size() != f->values.rows()) {
            throw InvalidInput("function sample weight count mismatch");
        }
        validate_simplex(f->weights, "function sample");
    }
    const std::vector<Eigen::MatrixXd> rows{
        a.values * config.grid.weights.asDiagonal(),
        b.values * config.grid.weights.asDiagonal()};
    const RowsFn rows_for = [&](std::size_t k, const Eigen::VectorXd*) { return rows[k]; };
    return summarize_squared(
        pair_terms(2, rows_for, {a.weights, b.weights}, std::nullopt, config).front());
}

}  // namespace metaot
