#pragma once

#include "metaot/measures.hpp"

#include <Eigen/Dense>

#include <random>
#include <vector>

namespace metaot {

/// Unit vector in R^d.
class Direction {
public:
    /// Normalizes `v`; throws on a zero or non-finite vector.
    explicit Direction(const Eigen::VectorXd& v);

    const Eigen::VectorXd& vector() const { return vector_; }
    Eigen::Index dim() const { return vector_.size(); }

private:
    Eigen::VectorXd vector_;
};

/// Uniform draw on S^{d-1} by normalizing a standard Gaussian vector.
Direction sample_direction(Eigen::Index d, std::mt19937_64& rng);
std::vector<Direction> sample_directions(Eigen::Index d, int count, std::mt19937_64& rng);

/// Pushforward under x -> <theta, x>. Weights are unchanged.
EmpiricalMeasure project_measure(const EmpiricalMeasure& measure, const Direction& theta);
MetaMeasure project_meta(const MetaMeasure& meta, const Direction& theta);

}  // namespace metaot
