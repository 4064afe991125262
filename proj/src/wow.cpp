#include "metaot/wow.hpp"

#include "metaot/errors.hpp"
#include "metaot/ot1d.hpp"
#include "metaot/parallel.hpp"

#include <cmath>
#include <sstream>

namespace metaot {

std::string InnerSolver::describe() const {
    if (kind == Kind::exact) return "exact";
    std::ostringstream s;
    s.precision(17);
    s << "entropic(eps=" << entropic.epsilon << ",max_iter=" << entropic.max_iter
      << ",tol=" << entropic.tol << ")";
    return s.str();
}

Eigen::MatrixXd inner_cost_matrix(const MetaMeasure& a, const MetaMeasure& b,
                                  const InnerSolver& inner, unsigned threads) {
    if (a.dim() != b.dim()) throw InvalidInput("dimension mismatch");
    for (const auto& mu : a.inner())
        for (const auto& nu : b.inner()) {
            const double cells = static_cast<double>(mu.size()) * static_cast<double>(nu.size());
            if (a.dim() > 1 && cells > kExactSizeLimit) {
                throw NumericalError("inner solve exceeds the 25e6 cell size guard");
            }
        }
    const auto n = static_cast<Eigen::Index>(a.size());
    const auto m = static_cast<Eigen::Index>(b.size());
    Eigen::MatrixXd costs(n, m);
    if (a.dim() == 1) {
        std::vector<Quantile1D> qa, qb;
        for (const auto& mu : a.inner()) qa.push_back(quantile_of(mu));
        for (const auto& nu : b.inner()) qb.push_back(quantile_of(nu));
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < m; ++j)
                costs(i, j) = squared_distance(qa[static_cast<std::size_t>(i)],
                                               qb[static_cast<std::size_t>(j)]);
        return costs;
    }
    parallel_for(static_cast<std::size_t>(n * m), threads, [&](std::size_t k) {
        const auto i = static_cast<Eigen::Index>(k) / m;
        const auto j = static_cast<Eigen::Index>(k) % m;
        const auto& mu = a.inner(static_cast<std::size_t>(i));
        const auto& nu = b.inner(static_cast<std::size_t>(j));
        const CostMatrix c = squared_euclidean_cost(mu, nu);
        costs(i, j) = inner.kind == InnerSolver::Kind::exact
                          ? solve_exact(c, mu.weights(), nu.weights()).objective
                          : solve_entropic(c, mu.weights(), nu.weights(), inner.entropic).objective;
        costs(i, j) = std::max(costs(i, j), 0.0);
    });
    return costs;
}

double wow_from_inner(const Eigen::MatrixXd& inner_costs, const MetaMeasure& a,
                      const MetaMeasure& b) {
    if (inner_costs.rows() != static_cast<Eigen::Index>(a.size()) ||
        inner_costs.cols() != static_cast<Eigen::Index>(b.size())) {
        throw InvalidInput("inner cost matrix shape does not match the meta-measures");
    }
    const auto sol = solve_exact(CostMatrix(inner_costs), a.outer_weights(), b.outer_weights());
    return std::sqrt(std::max(0.0, sol.objective));
}

double wow_exact(const MetaMeasure& a, const MetaMeasure& b, const InnerSolver& inner,
                 unsigned threads) {
    return wow_from_inner(inner_cost_matrix(a, b, inner, threads), a, b);
}

Eigen::MatrixXd wow_distance_matrix(const std::vector<MetaMeasure>& metas,
                                    const InnerSolver& inner, unsigned threads) {
    if (metas.empty()) throw InvalidInput("need at least one meta-measure");
    const auto k = static_cast<Eigen::Index>(metas.size());
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(k, k);
    for (Eigen::Index i = 0; i < k; ++i) {
        for (Eigen::Index j = i + 1; j < k; ++j) {
            const double v = wow_exact(metas[static_cast<std::size_t>(i)],
                                       metas[static_cast<std::size_t>(j)], inner, threads);
            out(i, j) = v;
            out(j, i) = v;
        }
    }
    return out;
}

}  // namespace metaot
