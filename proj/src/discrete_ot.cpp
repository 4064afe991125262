#include "metaot/discrete_ot.hpp"

#include "metaot/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace metaot {

CostMatrix::CostMatrix(Eigen::MatrixXd entries) : entries_(std::move(entries)) {
    if (entries_.rows() < 1 || entries_.cols() < 1) throw InvalidInput("empty cost matrix");
    if (!entries_.allFinite() || (entries_.array() < 0.0).any()) {
        throw InvalidInput("cost matrix has negative or non-finite entries");
    }
}

CostMatrix squared_euclidean_cost(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu) {
    if (mu.dim() != nu.dim()) throw InvalidInput("dimension mismatch");
    const auto& x = mu.points();
    const auto& y = nu.points();
    Eigen::MatrixXd c(x.rows(), y.rows());
    for (Eigen::Index j = 0; j < y.rows(); ++j)
        for (Eigen::Index i = 0; i < x.rows(); ++i) c(i, j) = (x.row(i) - y.row(j)).squaredNorm();
    return CostMatrix(std::move(c));
}

namespace {

void check_marginals(const CostMatrix& cost, const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    if (a.size() != cost.rows() || b.size() != cost.cols()) {
        throw InvalidInput("dimension mismatch between cost matrix and marginals");
    }
    validate_simplex(a, "row marginal");
    validate_simplex(b, "column marginal");
}

/// Spanning-tree basis of the n x m transportation problem. Nodes 0..n-1 are
/// rows, n..n+m-1 are columns; each basic cell is an edge.
class TransportationSimplex {
public:
    TransportationSimplex(const Eigen::MatrixXd& cost, const Eigen::VectorXd& a,
                          const Eigen::VectorXd& b)
        : c_(cost), n_(cost.rows()), m_(cost.cols()),
          basic_(static_cast<std::size_t>(n_ * m_), -1),
          adj_(static_cast<std::size_t>(n_ + m_)),
          u_(n_), v_(m_) {
        northwest_corner(a, b);
        eps_ = 1e-12 * std::max(1.0, c_.cwiseAbs().maxCoeff());
    }

    long run() {
        long pivots = 0;
        for (;;) {
            compute_potentials();
            const long entering = find_entering();
            if (entering < 0) return pivots;
            pivot(entering);
            ++pivots;
        }
    }

    Eigen::MatrixXd plan() const {
        Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n_, m_);
        for (const auto& cell : cells_) p(cell.i, cell.j) = cell.flow;
        return p;
    }

    double objective() const {
        double total = 0.0;
        for (const auto& cell : cells_) total += cell.flow * c_(cell.i, cell.j);
        return total;
    }

private:
    struct Cell {
        Eigen::Index i, j;
        double flow;
    };

    long index(Eigen::Index i, Eigen::Index j) const { return static_cast<long>(i * m_ + j); }

    void add_cell(Eigen::Index i, Eigen::Index j, double flow) {
        const int id = static_cast<int>(cells_.size());
        cells_.push_back({i, j, flow});
        basic_[static_cast<std::size_t>(index(i, j))] = id;
        adj_[static_cast<std::size_t>(i)].push_back(id);
        adj_[static_cast<std::size_t>(n_ + j)].push_back(id);
    }

    void northwest_corner(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
        Eigen::VectorXd supply = a;
        Eigen::VectorXd demand = b;
        Eigen::Index i = 0;
        Eigen::Index j = 0;
        for (;;) {
            double x;
            if (i == n_ - 1) {
                x = demand[j];
            } else if (j == m_ - 1) {
                x = supply[i];
            } else {
                x = std::min(supply[i], demand[j]);
            }
            x = std::max(x, 0.0);
            add_cell(i, j, x);
            if (i == n_ - 1 && j == m_ - 1) break;
            const bool row_done = supply[i] <= demand[j];
            supply[i] -= x;
            demand[j] -= x;
            if (i == n_ - 1) {
                ++j;
            } else if (j == m_ - 1) {
                ++i;
            } else if (row_done) {
                ++i;
            } else {
                ++j;
            }
        }
    }

    int other_end(const Cell& cell, Eigen::Index node) const {
        return static_cast<int>(node < n_ ? n_ + cell.j : cell.i);
    }

    void compute_potentials() {
        const auto nodes = static_cast<std::size_t>(n_ + m_);
        std::vector<char> seen(nodes, 0);
        std::vector<double> pot(nodes, 0.0);
        std::vector<Eigen::Index> stack{0};
        seen[0] = 1;
        while (!stack.empty()) {
            const Eigen::Index node = stack.back();
            stack.pop_back();
            for (int id : adj_[static_cast<std::size_t>(node)]) {
                const Cell& cell = cells_[static_cast<std::size_t>(id)];
                const int next = other_end(cell, node);
                if (seen[static_cast<std::size_t>(next)]) continue;
                seen[static_cast<std::size_t>(next)] = 1;
                // u_i + v_j = c_ij
                pot[static_cast<std::size_t>(next)] =
                    c_(cell.i, cell.j) - pot[static_cast<std::size_t>(node)];
                stack.push_back(next);
            }
        }
        for (Eigen::Index i = 0; i < n_; ++i) u_[i] = pot[static_cast<std::size_t>(i)];
        for (Eigen::Index j = 0; j < m_; ++j) v_[j] = pot[static_cast<std::size_t>(n_ + j)];
    }

    long find_entering() const {
        for (Eigen::Index i = 0; i < n_; ++i) {
            for (Eigen::Index j = 0; j < m_; ++j) {
                if (basic_[static_cast<std::size_t>(index(i, j))] >= 0) continue;
                if (c_(i, j) - u_[i] - v_[j] < -eps_) return index(i, j);
            }
        }
        return -1;
    }

    // Tree path of cell ids from row node `from` to column node `to`.
    std::vector<int> tree_path(Eigen::Index from, Eigen::Index to) const {
        const auto nodes = static_cast<std::size_t>(n_ + m_);
        std::vector<int> via(nodes, -2);
        std::vector<Eigen::Index> stack{from};
        via[static_cast<std::size_t>(from)] = -1;
        while (!stack.empty()) {
            const Eigen::Index node = stack.back();
            stack.pop_back();
            if (node == to) break;
            for (int id : adj_[static_cast<std::size_t>(node)]) {
                const int next = other_end(cells_[static_cast<std::size_t>(id)], node);
                if (via[static_cast<std::size_t>(next)] != -2) continue;
                via[static_cast<std::size_t>(next)] = id;
                stack.push_back(next);
            }
        }
        std::vector<int> path;
        Eigen::Index node = to;
        while (node != from) {
            const int id = via[static_cast<std::size_t>(node)];
            path.push_back(id);
            node = other_end(cells_[static_cast<std::size_t>(id)], node);
        }
        std::reverse(path.begin(), path.end());  // starts at `from`
        return path;
    }

    void pivot(long entering) {
        const Eigen::Index ei = entering / m_;
        const Eigen::Index ej = entering % m_;
        const std::vector<int> path = tree_path(ei, n_ + ej);
        // Entering cell gains theta; path cells alternate -, +, -, ... from row ei.
        int leaving = -1;
        double theta = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < path.size(); k += 2) {
            const Cell& cell = cells_[static_cast<std::size_t>(path[k])];
            const bool better = cell.flow < theta ||
                                (cell.flow == theta &&
                                 index(cell.i, cell.j) <
                                     index(cells_[static_cast<std::size_t>(leaving)].i,
                                           cells_[static_cast<std::size_t>(leaving)].j));
            if (leaving < 0 || better) {
                theta = cell.flow;
                leaving = path[k];
            }
        }
        for (std::size_t k = 0; k < path.size(); ++k) {
            Cell& cell = cells_[static_cast<std::size_t>(path[k])];
            cell.flow += (k % 2 == 0) ? -theta : theta;
            if (cell.flow < 0.0) cell.flow = 0.0;
        }
        // Reuse the leaving slot for the entering cell.
        Cell& out = cells_[static_cast<std::size_t>(leaving)];
        basic_[static_cast<std::size_t>(index(out.i, out.j))] = -1;
        detach(out.i, leaving);
        detach(n_ + out.j, leaving);
        out = Cell{ei, ej, theta};
        basic_[static_cast<std::size_t>(entering)] = leaving;
        adj_[static_cast<std::size_t>(ei)].push_back(leaving);
        adj_[static_cast<std::size_t>(n_ + ej)].push_back(leaving);
    }

    void detach(Eigen::Index node, int id) {
        auto& list = adj_[static_cast<std::size_t>(node)];
        list.erase(std::find(list.begin(), list.end(), id));
    }

    const Eigen::MatrixXd& c_;
    Eigen::Index n_, m_;
    std::vector<Cell> cells_;
    std::vector<int> basic_;  // cell id per (i, j), -1 when nonbasic
    std::vector<std::vector<int>> adj_;
    Eigen::VectorXd u_, v_;
    double eps_ = 0.0;
};

double log_sum_exp(const Eigen::Ref<const Eigen::VectorXd>& x) {
    const double mx = x.maxCoeff();
    if (!std::isfinite(mx)) return mx;
    return mx + std::log((x.array() - mx).exp().sum());
}

}  // namespace

ExactSolution solve_exact(const CostMatrix& cost, const Eigen::VectorXd& a,
                          const Eigen::VectorXd& b) {
    check_marginals(cost, a, b);
    TransportationSimplex simplex(cost.entries(), a, b);
    ExactSolution sol;
    sol.pivots = simplex.run();
    sol.plan.entries = simplex.plan();
    sol.plan.row_marginal = a;
    sol.plan.col_marginal = b;
    sol.objective = simplex.objective();
    return sol;
}

EntropicSolution solve_entropic(const CostMatrix& cost, const Eigen::VectorXd& a,
                                const Eigen::VectorXd& b, const EntropicOptions& options) {
    check_marginals(cost, a, b);
    if (!(options.epsilon > 0.0)) throw InvalidInput("entropic epsilon must be positive");
    if (options.max_iter < 1 || !(options.tol > 0.0)) {
        throw InvalidInput("entropic solver needs max_iter >= 1 and tol > 0");
    }
    const double eps = options.epsilon;
    const Eigen::MatrixXd& c = cost.entries();
    const Eigen::Index n = c.rows();
    const Eigen::Index m = c.cols();
    const Eigen::ArrayXd log_a = a.array().log();
    const Eigen::ArrayXd log_b = b.array().log();
    Eigen::VectorXd f = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd g = Eigen::VectorXd::Zero(m);
    Eigen::VectorXd buf_m(m);
    Eigen::VectorXd buf_n(n);
    auto log_plan = [&](Eigen::Index i, Eigen::Index j) {
        return (f[i] + g[j] - c(i, j)) / eps + log_a[i] + log_b[j];
    };

    EntropicSolution sol;
    for (int it = 1; it <= options.max_iter; ++it) {
        for (Eigen::Index i = 0; i < n; ++i) {
            if (a[i] <= 0.0) continue;
            for (Eigen::Index j = 0; j < m; ++j) buf_m[j] = (g[j] - c(i, j)) / eps + log_b[j];
            f[i] = -eps * log_sum_exp(buf_m);
        }
        for (Eigen::Index j = 0; j < m; ++j) {
            if (b[j] <= 0.0) continue;
            for (Eigen::Index i = 0; i < n; ++i) buf_n[i] = (f[i] - c(i, j)) / eps + log_a[i];
            g[j] = -eps * log_sum_exp(buf_n);
        }
        double err = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            double row = 0.0;
            for (Eigen::Index j = 0; j < m; ++j) row += std::exp(log_plan(i, j));
            err = std::max(err, std::abs(row - a[i]));
        }
        sol.iterations = it;
        sol.marginal_error = err;
        if (err < options.tol) {
            sol.stop = EntropicStop::tolerance;
            break;
        }
    }
    double total = 0.0;
    for (Eigen::Index j = 0; j < m; ++j)
        for (Eigen::Index i = 0; i < n; ++i) total += std::exp(log_plan(i, j)) * c(i, j);
    sol.objective = total;
    return sol;
}

namespace {

void guard_size(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu) {
    if (mu.dim() != nu.dim()) throw InvalidInput("dimension mismatch");
    const double cells = static_cast<double>(mu.size()) * static_cast<double>(nu.size());
    if (cells > kExactSizeLimit) {
        throw NumericalError("exact OT refused: " + std::to_string(mu.size()) + " x " +
                             std::to_string(nu.size()) +
                             " supports exceed the 25e6 cell limit; use the entropic solver");
    }
}

}  // namespace

double wasserstein_exact(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu) {
    guard_size(mu, nu);
    const auto sol = solve_exact(squared_euclidean_cost(mu, nu), mu.weights(), nu.weights());
    return std::sqrt(std::max(0.0, sol.objective));
}

double wasserstein_entropic(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu,
                            const EntropicOptions& options) {
    guard_size(mu, nu);
    const auto sol = solve_entropic(squared_euclidean_cost(mu, nu), mu.weights(), nu.weights(),
                                    options);
    return std::sqrt(std::max(0.0, sol.objective));
}

}  // namespace metaot
