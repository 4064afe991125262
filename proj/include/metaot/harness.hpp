#pragma once

#include "metaot/measures.hpp"
#include "metaot/patches.hpp"
#include "metaot/sqw_dsw.hpp"
#include "metaot/synthetic.hpp"

#include "json.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace metaot {

// ---------------------------------------------------------------- KNN

struct KnnConfig {
    int k = 3;
    double train_fraction = 0.25;
    int trials = 1000;
    std::uint64_t seed = 0;
};

struct KnnResult {
    double mean_accuracy = 0.0;
    double std_accuracy = 0.0;
};

/// Repeated random train/test splits of a precomputed distance matrix.
///
/// Each trial shuffles the items with substream ("knn-trial", t) and uses the
/// first round(train_fraction * K) (at least 1, at most K - 1) as training
/// items. A test item takes the majority label among its k nearest training
/// items (distance ties by lower index); vote ties go to the label with the
/// smaller summed neighbor distance, then to the one whose nearest voter has
/// the lower index.
KnnResult knn_classify(const Eigen::MatrixXd& dist, const std::vector<std::string>& labels,
                       const KnnConfig& config);

// ---------------------------------------------------------------- reports

struct EvalRow {
    double parameter = 0.0;
    std::string metric;
    double mean = 0.0;
    double std = 0.0;
};

struct EvalReport {
    std::vector<EvalRow> rows;

    std::string to_csv() const;
    nlohmann::json to_json() const;
};

double sample_std(const std::vector<double>& values);

// ---------------------------------------------------------------- Monte Carlo rate

struct McReport {
    EvalReport report;
    std::optional<double> slope;  // empty when some std is zero
};

/// For each S, `reps` independent-seed estimates of dsw^2 with S total
/// projections (outer_S = S / base.inner_per_outer); slope of log std vs log S.
McReport mc_convergence_report(const MetaMeasure& a, const MetaMeasure& b,
                               const std::vector<int>& S_list, int reps,
                               const SlicingConfig& base);

// ---------------------------------------------------------------- bound check

struct BoundCheck {
    DistanceEstimate dsw;
    DistanceEstimate sw_wow;
    double wow = 0.0;
    bool dsw_below_sw = false;
    bool sw_below_wow = false;

    bool pass() const { return dsw_below_sw && sw_below_wow; }
    nlohmann::json to_json() const;
};

/// Evaluates dsw, sliced WoW (sw_outer_S directions, same seed) and exact WoW
/// and checks dsw <= sw_wow + 3 sigma and sw_wow <= wow + 3 sigma.
BoundCheck bound_check_report(const MetaMeasure& a, const MetaMeasure& b,
                              const SlicingConfig& config, int sw_outer_S);

// ---------------------------------------------------------------- point clouds

struct TargetSpec {
    int M = 0;
    double noise_sigma = 0.0;
    int m = 0;
    std::uint64_t seed = 0;
};

using TargetBuilder = std::function<MetaMeasure(const TargetSpec&)>;

enum class SweepKind { shapes, noise, resolution };
enum class BatchMetric { dsw, wow };

struct PointCloudEvalConfig {
    SweepKind sweep = SweepKind::shapes;
    std::vector<double> values;
    int default_M = 10;
    double default_noise = 0.0;
    int default_m = 50;
    BatchMetric metric = BatchMetric::dsw;
    int reps = 5;
    SlicingConfig slicing;  // its seed is the master seed of the sweep
};

/// Scores target batches against a fixed reference while one parameter
/// varies. Rep r builds its target from seed ("target", r) and, for dsw,
/// projects with seed ("slicing", r).
EvalReport pointcloud_eval(const MetaMeasure& reference, const TargetBuilder& builder,
                           const PointCloudEvalConfig& config);

/// Template population of 3D shapes: N templates alternating ellipsoids and
/// boxes with distinct semi-axes. batch(spec) draws spec.M shapes, shape j
/// from template j mod N, spec.m surface points each, plus N(0, sigma^2 I)
/// noise per point.
class SolidFamily {
public:
    explicit SolidFamily(int templates);

    MetaMeasure batch(const TargetSpec& spec) const;
    int templates() const { return static_cast<int>(axes_.size()); }

private:
    std::vector<Eigen::Vector3d> axes_;
};

// ---------------------------------------------------------------- texture sweep

enum class TextureParameter { lacunarity, persistence };

struct TextureEvalConfig {
    TextureParameter parameter = TextureParameter::lacunarity;
    std::vector<double> values{1.0, 1.5, 2.0, 2.5, 3.0};
    double reference_value = 2.0;
    PerlinParams base{};  // the swept field is overwritten per batch
    int batch = 16;
    int size = 64;
    int patch = 8;
    int seeds = 5;
    SlicingConfig slicing;  // its seed is the master seed
};

/// dsw between a reference Perlin batch and target batches per parameter value,
/// averaged over `seeds` independent reference/target draws.
EvalReport texture_lacunarity_eval(const TextureEvalConfig& config);

}  // namespace metaot
