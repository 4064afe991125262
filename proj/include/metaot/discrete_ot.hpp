#pragma once

#include "metaot/measures.hpp"

#include <Eigen/Dense>

namespace metaot {

/// Nonnegative finite n x m ground-cost matrix.
class CostMatrix {
public:
    explicit CostMatrix(Eigen::MatrixXd entries);

    const Eigen::MatrixXd& entries() const { return entries_; }
    Eigen::Index rows() const { return entries_.rows(); }
    Eigen::Index cols() const { return entries_.cols(); }
    double operator()(Eigen::Index i, Eigen::Index j) const { return entries_(i, j); }

private:
    Eigen::MatrixXd entries_;
};

/// Squared Euclidean distances between the supports of two measures.
CostMatrix squared_euclidean_cost(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu);

struct TransportPlan {
    Eigen::MatrixXd entries;
    Eigen::VectorXd row_marginal;
    Eigen::VectorXd col_marginal;
};

struct ExactSolution {
    TransportPlan plan;
    double objective = 0.0;
    long pivots = 0;
};

/// Exact transport LP via the transportation simplex on the bipartite
/// network. Starts from the northwest-corner basis and always enters the
/// lowest-index arc with negative reduced cost; ties on the leaving arc go
/// to the lowest index, so the pivot sequence (and the output) is fixed.
ExactSolution solve_exact(const CostMatrix& cost, const Eigen::VectorXd& a,
                          const Eigen::VectorXd& b);

enum class EntropicStop { tolerance, max_iter };

struct EntropicSolution {
    double objective = 0.0;  // <plan, cost> of the scaled plan
    int iterations = 0;
    EntropicStop stop = EntropicStop::max_iter;
    double marginal_error = 0.0;
};

struct EntropicOptions {
    double epsilon = 0.01;
    int max_iter = 10'000;
    double tol = 1e-8;
};

/// Log-domain Sinkhorn iterations. Stops once the row-marginal violation
/// (max norm) drops below `tol`; column marginals are exact after each sweep.
EntropicSolution solve_entropic(const CostMatrix& cost, const Eigen::VectorXd& a,
                                const Eigen::VectorXd& b, const EntropicOptions& options = {});

/// Largest n*m accepted by wasserstein_exact.
inline constexpr double kExactSizeLimit = 25'000'000.0;

/// W2 between measures of equal dimension by exact LP on squared Euclidean cost.
double wasserstein_exact(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu);

/// Entropic counterpart: sqrt of the entropic plan's transport cost.
double wasserstein_entropic(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu,
                            const EntropicOptions& options = {});

}  // namespace metaot
