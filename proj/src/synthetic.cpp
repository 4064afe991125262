#include "metaot/synthetic.hpp"

#include "metaot/errors.hpp"

#include <cmath>
#include <numbers>

namespace metaot {

std::string to_string(Shape2D shape) {
    switch (shape) {
        case Shape2D::circle: return "circle";
        case Shape2D::square: return "square";
        case Shape2D::star: return "star";
    }
    return "unknown";
}

namespace {

using std::numbers::pi;

/// Closed polygon, point at arc-length fraction s in [0, 1).
Eigen::Vector2d polygon_point(const std::vector<Eigen::Vector2d>& vertices, double s) {
    const std::size_t k = vertices.size();
    std::vector<double> cum(k + 1, 0.0);
    for (std::size_t i = 0; i < k; ++i) {
        cum[i + 1] = cum[i] + (vertices[(i + 1) % k] - vertices[i]).norm();
    }
    const double target = s * cum[k];
    std::size_t i = 0;
    while (i + 1 < k && cum[i + 1] < target) ++i;
    const double seg = cum[i + 1] - cum[i];
    const double lambda = seg > 0.0 ? (target - cum[i]) / seg : 0.0;
    return vertices[i] + lambda * (vertices[(i + 1) % k] - vertices[i]);
}

std::vector<Eigen::Vector2d> star_vertices() {
    std::vector<Eigen::Vector2d> v;
    for (int k = 0; k < 10; ++k) {
        const double r = (k % 2 == 0) ? 1.0 : 0.4;
        const double a = pi / 2 + k * pi / 5;
        v.emplace_back(r * std::cos(a), r * std::sin(a));
    }
    return v;
}

}  // namespace

Eigen::MatrixXd sample_shape_2d(Shape2D shape, int n, std::mt19937_64& rng) {
    if (n < 1) throw InvalidInput("shape needs n >= 1 samples");
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> normal(0.0, 1.0);
    static const std::vector<Eigen::Vector2d> square{{-1, -1}, {1, -1}, {1, 1}, {-1, 1}};
    static const std::vector<Eigen::Vector2d> star = star_vertices();
    Eigen::MatrixXd pts(n, 2);
    for (int k = 0; k < n; ++k) {
        const double s = unit(rng);
        Eigen::Vector2d p;
        switch (shape) {
            case Shape2D::circle: p = {std::cos(2 * pi * s), std::sin(2 * pi * s)}; break;
            case Shape2D::square: p = polygon_point(square, s); break;
            case Shape2D::star: p = polygon_point(star, s); break;
        }
        pts.row(k) = p.transpose();
    }
    const double angle = 2 * pi * unit(rng);
    Eigen::Matrix2d rot;
    rot << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
    const Eigen::RowVector2d shift(10.0 * unit(rng) - 5.0, 10.0 * unit(rng) - 5.0);
    pts = (pts * rot.transpose()).rowwise() + shift;
    for (int k = 0; k < n; ++k)
        for (int c = 0; c < 2; ++c) pts(k, c) += 0.01 * normal(rng);
    return pts;
}

Eigen::MatrixXd sample_solid_3d(Solid3D solid, const Eigen::Vector3d& axes, int n,
                                std::mt19937_64& rng) {
    if (n < 1) throw InvalidInput("solid needs n >= 1 samples");
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> sym(-1.0, 1.0);
    Eigen::MatrixXd pts(n, 3);
    for (int k = 0; k < n; ++k) {
        Eigen::Vector3d p;
        if (solid == Solid3D::ellipsoid) {
            Eigen::Vector3d g(normal(rng), normal(rng), normal(rng));
            while (g.squaredNorm() == 0.0) g = {normal(rng), normal(rng), normal(rng)};
            p = g.normalized().cwiseProduct(axes);
        } else {
            // Face chosen proportionally to its area, then a uniform point on it.
            const double ayz = axes[1] * axes[2], axz = axes[0] * axes[2], axy = axes[0] * axes[1];
            std::uniform_real_distribution<double> pick(0.0, ayz + axz + axy);
            const double f = pick(rng);
            const int axis = f < ayz ? 0 : (f < ayz + axz ? 1 : 2);
            p = {sym(rng) * axes[0], sym(rng) * axes[1], sym(rng) * axes[2]};
            p[axis] = (sym(rng) < 0.0 ? -1.0 : 1.0) * axes[axis];
        }
        pts.row(k) = p.transpose();
    }
    return pts;
}

MetaMeasure random_meta(int N, int n, int d, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> sym(-1.0, 1.0);
    std::vector<EmpiricalMeasure> inner;
    for (int i = 0; i < N; ++i) {
        Eigen::MatrixXd pts(n, d);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < d; ++c) pts(r, c) = sym(rng);
        inner.push_back(EmpiricalMeasure::uniform(std::move(pts)));
    }
    return build_meta(std::move(inner));
}

MetaMeasure random_meta_varying(int max_N, int max_n, int d, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> count_n(1, max_N);
    std::uniform_int_distribution<int> count_pts(1, max_n);
    std::uniform_real_distribution<double> sym(-1.0, 1.0);
    const int N = count_n(rng);
    std::vector<EmpiricalMeasure> inner;
    for (int i = 0; i < N; ++i) {
        const int n = count_pts(rng);
        Eigen::MatrixXd pts(n, d);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < d; ++c) pts(r, c) = sym(rng);
        inner.push_back(EmpiricalMeasure::uniform(std::move(pts)));
    }
    return build_meta(std::move(inner));
}

std::pair<FunctionSample, FunctionSample> functional_test_pair(int which,
                                                               const QuadratureGrid& grid) {
    if (which != 1 && which != 2) throw InvalidInput("functional test pair must be 1 or 2");
    const Eigen::Index r = grid.size();
    FunctionSample f{Eigen::MatrixXd(5, r), Eigen::VectorXd::Constant(5, 0.2)};
    FunctionSample h{Eigen::MatrixXd(10, r), Eigen::VectorXd::Constant(10, 0.1)};
    for (Eigen::Index k = 0; k < r; ++k) {
        const double x = grid.knots[k];
        for (int i = 1; i <= 5; ++i) {
            f.values(i - 1, k) = which == 1 ? std::cos(i * x) : std::cos(i * x + i) + std::sin(x);
        }
        for (int j = 1; j <= 10; ++j) {
            h.values(j - 1, k) = which == 1 ? std::sin(j * x + j * pi) : std::pow(std::sin(j * x), j);
        }
    }
    return {f, h};
}

}  // namespace metaot
