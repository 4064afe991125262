#include "metaot/sphere.hpp"

#include "metaot/errors.hpp"

#include <cmath>

namespace metaot {

Direction::Direction(const Eigen::VectorXd& v) {
    const double norm = v.norm();
    if (v.size() < 1 || !(norm > 0.0) || !std::isfinite(norm)) {
        throw InvalidInput("direction needs a nonzero finite vector");
    }
    vector_ = v / norm;
}

Direction sample_direction(Eigen::Index d, std::mt19937_64& rng) {
    if (d < 1) throw InvalidInput("direction dimension must be >= 1");
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::VectorXd v(d);
    for (;;) {
        for (Eigen::Index k = 0; k < d; ++k) v[k] = normal(rng);
        if (v.squaredNorm() > 0.0) return Direction(v);
    }
}

std::vector<Direction> sample_directions(Eigen::Index d, int count, std::mt19937_64& rng) {
    std::vector<Direction> out;
    out.reserve(static_cast<std::size_t>(std::max(count, 0)));
    for (int s = 0; s < count; ++s) out.push_back(sample_direction(d, rng));
    return out;
}

EmpiricalMeasure project_measure(const EmpiricalMeasure& measure, const Direction& theta) {
    if (measure.dim() != theta.dim()) throw InvalidInput("dimension mismatch");
    Eigen::MatrixXd projected = measure.points() * theta.vector();
    return EmpiricalMeasure(std::move(projected), measure.weights());
}

MetaMeasure project_meta(const MetaMeasure& meta, const Direction& theta) {
    std::vector<EmpiricalMeasure> inner;
    inner.reserve(meta.size());
    for (const auto& m : meta.inner()) inner.push_back(project_measure(m, theta));
    return MetaMeasure(std::move(inner), meta.outer_weights());
}

}  // namespace metaot
