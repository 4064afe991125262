#pragma once

#include "metaot/gp_slicer.hpp"
#include "metaot/measures.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace metaot {

/// Monte Carlo configuration shared by the SQW and DSW estimators.
///
/// Projections come in blocks: each of the `outer_S` blocks owns one sphere
/// direction (DSW only) and `inner_per_outer` Gaussian-process paths, so the
/// total number of projections is outer_S * inner_per_outer. Block s draws
/// from the substreams ("direction", s) and ("paths", s) of `seed`.
struct SlicingConfig {
    int outer_S = 100;
    int inner_per_outer = 100;
    QuadratureGrid grid = make_grid(10);
    KernelSpec kernel = RbfKernel{0.1};
    Interpolation interpolation = Interpolation::linear;
    std::uint64_t seed = 0;
    unsigned threads = 1;  // execution only; results do not depend on it

    long total() const { return static_cast<long>(outer_S) * inner_per_outer; }
    void validate() const;
};

/// Root-mean-square estimate with its Monte Carlo standard error.
struct DistanceEstimate {
    double value = 0.0;
    double std_error = 0.0;
    long S = 0;
};

/// Reduces squared per-projection distances to an estimate. The standard
/// error of the mean uses block means when there are at least two blocks of
/// `block` terms (terms inside a block share a direction), and is carried to
/// the root by the delta method; it is 0 when the value is 0.
DistanceEstimate summarize_squared(const std::vector<double>& squared_terms, int block = 1);

/// SQW between 1-dimensional meta-measures for an explicit set of paths.
DistanceEstimate sqw(const MetaMeasure& a, const MetaMeasure& b,
                     const std::vector<GPPathSample>& paths, const QuadratureGrid& grid,
                     Interpolation interpolation);

/// SQW with config.total() paths drawn from the config's seed.
DistanceEstimate sqw(const MetaMeasure& a, const MetaMeasure& b, const SlicingConfig& config);

/// Pairwise SQW matrix where every pair sees the same paths.
Eigen::MatrixXd sqw_distance_matrix(const std::vector<MetaMeasure>& metas,
                                    const SlicingConfig& config);

/// Double-sliced WoW estimate between meta-measures in R^d.
DistanceEstimate dsw(const MetaMeasure& a, const MetaMeasure& b, const SlicingConfig& config);

/// Pairwise DSW matrix with shared directions and paths; symmetric with a
/// zero diagonal by construction. Entry (i, j) equals dsw(metas[i], metas[j]).
Eigen::MatrixXd dsw_distance_matrix(const std::vector<MetaMeasure>& metas,
                                    const SlicingConfig& config);

/// Sliced WoW: sphere slicing with the 1D WoW solved exactly per direction.
/// Direction s is drawn from substream ("direction", s), as in dsw.
DistanceEstimate sw_wow(const MetaMeasure& a, const MetaMeasure& b, int outer_S,
                        std::uint64_t seed, unsigned threads = 1);

/// Weighted finite set of functions on [0, 1], sampled at the knots of a grid
/// (one function per row).
struct FunctionSample {
    Eigen::MatrixXd values;
    Eigen::VectorXd weights;
};

/// Gaussian-slicing SW between measures on L2([0, 1]), using config.total()
/// paths. Both samples must live on config.grid.
DistanceEstimate sliced_l2(const FunctionSample& a, const FunctionSample& b,
                           const SlicingConfig& config);

}  // namespace metaot
