#pragma once

#include "metaot/discrete_ot.hpp"
#include "metaot/measures.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace metaot {

/// How the inner (measure-to-measure) distances are computed. Inner pairs in
/// d = 1 always use the exact quantile formula.
struct InnerSolver {
    enum class Kind { exact, entropic } kind = Kind::exact;
    EntropicOptions entropic{};

    static InnerSolver exact() { return {}; }
    static InnerSolver with_entropy(double epsilon) {
        InnerSolver s;
        s.kind = Kind::entropic;
        s.entropic.epsilon = epsilon;
        return s;
    }
    /// Stable textual form, used in cache keys and output metadata.
    std::string describe() const;
};

/// N x M matrix of squared inner Wasserstein distances.
Eigen::MatrixXd inner_cost_matrix(const MetaMeasure& a, const MetaMeasure& b,
                                  const InnerSolver& inner = InnerSolver::exact(),
                                  unsigned threads = 1);

/// Outer exact OT on a precomputed inner cost matrix; returns the root.
double wow_from_inner(const Eigen::MatrixXd& inner_costs, const MetaMeasure& a,
                      const MetaMeasure& b);

/// Wasserstein-over-Wasserstein distance.
double wow_exact(const MetaMeasure& a, const MetaMeasure& b,
                 const InnerSolver& inner = InnerSolver::exact(), unsigned threads = 1);

/// Pairwise WoW, one solve per unordered pair, zero diagonal.
Eigen::MatrixXd wow_distance_matrix(const std::vector<MetaMeasure>& metas,
                                    const InnerSolver& inner = InnerSolver::exact(),
                                    unsigned threads = 1);

}  // namespace metaot
