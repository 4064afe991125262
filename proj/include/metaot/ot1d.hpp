#pragma once

#include "metaot/measures.hpp"

#include <span>
#include <vector>

namespace metaot {

enum class Interpolation { step, linear };

/// Piecewise-constant quantile function of a 1D empirical measure:
/// Q(s) = values[j] for s in (cum_weights[j-1], cum_weights[j]], Q(0) = values[0].
struct Quantile1D {
    std::vector<double> values;       // nondecreasing, ties merged
    std::vector<double> cum_weights;  // strictly increasing, last == 1
};

Quantile1D quantile_of(const EmpiricalMeasure& measure);
/// Same, from raw support values and weights (weights must form a simplex vector).
Quantile1D quantile_of(std::span<const double> support, std::span<const double> weights);

/// Evaluates Q at t in [0, 1].
///
/// Linear mode uses the piecewise-linear interpolant through the nodes
/// (m_j, values[j]), m_j being the midpoint of step j's mass interval,
/// clamped to the end values outside [m_first, m_last].
double eval_quantile(const Quantile1D& q, double t, Interpolation mode);

/// Evaluates Q at each t of a nondecreasing sequence (single merge pass).
void eval_quantile_sorted(const Quantile1D& q, std::span<const double> ts, Interpolation mode,
                          std::span<double> out);

/// Exact integral of (Q_a - Q_b)^2 over [0, 1], via the common refinement of
/// the two breakpoint sequences.
double squared_distance(const Quantile1D& a, const Quantile1D& b);

/// W2 between two 1-dimensional empirical measures.
double wasserstein_1d(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu);

/// W2^2 between weighted scalar samples (inputs need not be sorted).
double squared_wasserstein_1d(std::span<const double> x, std::span<const double> wx,
                              std::span<const double> y, std::span<const double> wy);

}  // namespace metaot
