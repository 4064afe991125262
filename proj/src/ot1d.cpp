#include "metaot/ot1d.hpp"

#include "metaot/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace metaot {

namespace {

void require_1d(const EmpiricalMeasure& m) {
    if (m.dim() != 1) throw InvalidInput("expected a 1-dimensional measure, got d = " +
                                         std::to_string(m.dim()));
}

}  // namespace

Quantile1D quantile_of(std::span<const double> support, std::span<const double> weights) {
    if (support.size() != weights.size() || support.empty()) {
        throw InvalidInput("quantile_of: support and weights must be nonempty and equal length");
    }
    std::vector<std::size_t> order(support.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return support[i] < support[j]; });
    Quantile1D q;
    q.values.reserve(support.size());
    q.cum_weights.reserve(support.size());
    double acc = 0.0;
    for (std::size_t k : order) {
        if (weights[k] <= 0.0) continue;
        acc += weights[k];
        if (!q.values.empty() && q.values.back() == support[k]) {
            q.cum_weights.back() = acc;
        } else {
            q.values.push_back(support[k]);
            q.cum_weights.push_back(acc);
        }
    }
    if (q.values.empty()) throw InvalidInput("quantile_of: all weights are zero");
    q.cum_weights.back() = 1.0;
    return q;
}

Quantile1D quantile_of(const EmpiricalMeasure& measure) {
    require_1d(measure);
    const auto& p = measure.points();
    const auto& w = measure.weights();
    return quantile_of(std::span<const double>(p.data(), static_cast<std::size_t>(p.rows())),
                       std::span<const double>(w.data(), static_cast<std::size_t>(w.size())));
}

double eval_quantile(const Quantile1D& q, double t, Interpolation mode) {
    if (!(t >= 0.0 && t <= 1.0)) throw InvalidInput("eval_quantile: t outside [0, 1]");
    double out = 0.0;
    eval_quantile_sorted(q, std::span<const double>(&t, 1), mode, std::span<double>(&out, 1));
    return out;
}

void eval_quantile_sorted(const Quantile1D& q, std::span<const double> ts, Interpolation mode,
                          std::span<double> out) {
    const auto& v = q.values;
    const auto& c = q.cum_weights;
    const std::size_t n = v.size();
    if (mode == Interpolation::step) {
        std::size_t j = 0;
        for (std::size_t r = 0; r < ts.size(); ++r) {
            while (j + 1 < n && c[j] < ts[r]) ++j;
            out[r] = v[j];
        }
        return;
    }
    // Midpoint nodes m_j; segment j spans [m_j, m_{j+1}].
    auto mid = [&](std::size_t j) { return 0.5 * ((j == 0 ? 0.0 : c[j - 1]) + c[j]); };
    std::size_t j = 0;
    for (std::size_t r = 0; r < ts.size(); ++r) {
        const double t = ts[r];
        if (n == 1 || t <= mid(0)) {
            out[r] = v[0];
            continue;
        }
        if (t >= mid(n - 1)) {
            out[r] = v[n - 1];
            continue;
        }
        while (j + 2 < n && mid(j + 1) <= t) ++j;
        const double m0 = mid(j);
        const double m1 = mid(j + 1);
        const double lambda = (t - m0) / (m1 - m0);
        out[r] = v[j] + lambda * (v[j + 1] - v[j]);
    }
}

double squared_distance(const Quantile1D& a, const Quantile1D& b) {
    std::size_t i = 0;
    std::size_t j = 0;
    double prev = 0.0;
    double total = 0.0;
    while (i < a.values.size() && j < b.values.size()) {
        const double ca = a.cum_weights[i];
        const double cb = b.cum_weights[j];
        const double next = std::min(ca, cb);
        const double diff = a.values[i] - b.values[j];
        total += (next - prev) * diff * diff;
        prev = next;
        if (ca <= next) ++i;
        if (cb <= next) ++j;
    }
    return total;
}

double wasserstein_1d(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu) {
    require_1d(mu);
    require_1d(nu);
    return std::sqrt(squared_distance(quantile_of(mu), quantile_of(nu)));
}

double squared_wasserstein_1d(std::span<const double> x, std::span<const double> wx,
                              std::span<const double> y, std::span<const double> wy) {
    return squared_distance(quantile_of(x, wx), quantile_of(y, wy));
}

}  // namespace metaot
