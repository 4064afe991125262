#pragma once

#include <Eigen/Dense>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace metaot {

/// Weighted finite point set in R^d. Rows of `points` are support points.
/// Immutable after construction; the constructor validates every invariant.
class EmpiricalMeasure {
public:
    EmpiricalMeasure(Eigen::MatrixXd points, Eigen::VectorXd weights);

    /// Uniform weights 1/n.
    static EmpiricalMeasure uniform(Eigen::MatrixXd points);
    /// 1-dimensional measure with uniform weights.
    static EmpiricalMeasure uniform_1d(const std::vector<double>& values);
    static EmpiricalMeasure dirac(const Eigen::VectorXd& x);

    const Eigen::MatrixXd& points() const { return points_; }
    const Eigen::VectorXd& weights() const { return weights_; }
    Eigen::Index size() const { return points_.rows(); }
    Eigen::Index dim() const { return points_.cols(); }
    /// True when every weight equals 1/n exactly.
    bool is_uniform() const { return uniform_; }

private:
    Eigen::MatrixXd points_;
    Eigen::VectorXd weights_;
    bool uniform_ = false;
};

/// Weighted finite collection of empirical measures sharing one dimension.
class MetaMeasure {
public:
    MetaMeasure(std::vector<EmpiricalMeasure> inner, Eigen::VectorXd outer_weights);

    const std::vector<EmpiricalMeasure>& inner() const { return inner_; }
    const EmpiricalMeasure& inner(std::size_t i) const { return inner_[i]; }
    const Eigen::VectorXd& outer_weights() const { return outer_weights_; }
    std::size_t size() const { return inner_.size(); }
    Eigen::Index dim() const { return inner_.front().dim(); }

private:
    std::vector<EmpiricalMeasure> inner_;
    Eigen::VectorXd outer_weights_;
};

/// Omitted weights default to uniform 1/N.
MetaMeasure build_meta(std::vector<EmpiricalMeasure> measures,
                       std::optional<Eigen::VectorXd> outer_weights = std::nullopt);

/// M2(mu) = sum_k w_k |x_k|^2.
double second_moment(const EmpiricalMeasure& measure);

/// Checks that `w` is a probability vector (nonnegative, finite, sums to 1 within 1e-12).
void validate_simplex(const Eigen::VectorXd& w, const char* what);

// ---- ingestion ----

/// Parses CSV text: one point per line, comma separated reals, no header.
EmpiricalMeasure parse_point_cloud(const std::string& text);
EmpiricalMeasure load_point_cloud(const std::filesystem::path& path);
/// Writes coordinates with round-trip precision (weights are not stored).
void save_point_cloud(const EmpiricalMeasure& measure, const std::filesystem::path& path);

struct ManifestItem {
    std::filesystem::path path;  // resolved against base_dir
    std::string label;
};

struct DatasetManifest {
    std::filesystem::path base_dir;
    std::vector<ManifestItem> items;
};

/// Reads `{"base_dir": "...", "items": [{"path": "...", "label": "..."}]}`.
/// A relative base_dir is resolved against the manifest's own directory.
DatasetManifest load_manifest(const std::filesystem::path& path);

/// One inner measure per manifest item (CSV point clouds), uniform outer weights.
MetaMeasure load_meta(const DatasetManifest& manifest);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace metaot
