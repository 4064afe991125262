#include "doctest.h"

#include "metaot/errors.hpp"
#include "metaot/rng.hpp"
#include "metaot/sphere.hpp"
#include "metaot/sqw_dsw.hpp"
#include "metaot/synthetic.hpp"
#include "metaot/ot1d.hpp"

#include <cmath>

using namespace metaot;

namespace {

MetaMeasure dirac_meta(const Eigen::VectorXd& x) { return build_meta({EmpiricalMeasure::dirac(x)}); }

MetaMeasure line_meta(std::vector<std::vector<double>> supports) {
    std::vector<EmpiricalMeasure> inner;
    for (auto& s : supports) inner.push_back(EmpiricalMeasure::uniform_1d(s));
    return build_meta(std::move(inner));
}

SlicingConfig small_config(std::uint64_t seed) {
    SlicingConfig c;
    c.outer_S = 20;
    c.inner_per_outer = 10;
    c.seed = seed;
    return c;
}

}  // namespace

TEST_CASE("summarize_squared") {
    const auto e = summarize_squared({4.0, 4.0, 4.0, 4.0});
    CHECK(e.value == 2.0);
    CHECK(e.std_error == 0.0);
    CHECK(e.S == 4);
    const auto z = summarize_squared({0.0, 0.0});
    CHECK(z.value == 0.0);
    CHECK(z.std_error == 0.0);
    // block means (1, 3): variance 2, se of mean 1, delta method 1 / (2 sqrt 2)
    const auto b = summarize_squared({1.0, 1.0, 3.0, 3.0}, 2);
    CHECK(b.value == doctest::Approx(std::sqrt(2.0)));
    CHECK(b.std_error == doctest::Approx(1.0 / (2.0 * std::sqrt(2.0))));
    CHECK_THROWS_AS(summarize_squared({}), InvalidInput);
}

TEST_CASE("sqw basic properties") {
    const auto a = line_meta({{0.0, 1.0}, {2.0, 5.0, 7.0}, {-1.0}});
    const auto b = line_meta({{0.5, 1.5}, {3.0}});
    const auto cfg = small_config(4);
    CHECK(sqw(a, a, cfg).value == 0.0);
    CHECK(sqw(a, b, cfg).value == sqw(b, a, cfg).value);
    CHECK(sqw(a, b, cfg).value > 0.0);
    CHECK(sqw(a, b, cfg).S == 200);
    CHECK_THROWS_AS(sqw(dirac_meta(Eigen::Vector2d(0, 0)), dirac_meta(Eigen::Vector2d(1, 0)), cfg), InvalidInput);
}

TEST_CASE("sqw of single Diracs factors through the path integrals") {
    const double c1 = -0.7, c2 = 1.9;
    const auto grid = make_grid(10);
    auto rng = SeedSequence(5).stream("test-paths");
    const auto paths = sample_paths(RbfKernel{0.1}, grid, 500, rng);
    const auto est = sqw(dirac_meta(Eigen::VectorXd::Constant(1, c1)), dirac_meta(Eigen::VectorXd::Constant(1, c2)),
                         paths, grid, Interpolation::linear);
    double acc = 0.0;
    for (const auto& p : paths) acc += std::pow(grid.weights.dot(p.values), 2);
    CHECK(est.value == doctest::Approx(std::abs(c1 - c2) * std::sqrt(acc / paths.size())).epsilon(1e-12));
}

TEST_CASE("dsw basic properties") {
    auto rng = SeedSequence(10).stream("metas");
    const auto a = random_meta(3, 5, 3, rng), b = random_meta(4, 6, 3, rng);
    const auto cfg = small_config(11);
    CHECK(dsw(a, a, cfg).value == 0.0);
    CHECK(dsw(a, b, cfg).value == dsw(b, a, cfg).value);
    CHECK(dsw(a, b, cfg).value > 0.0);
    CHECK_THROWS_AS(dsw(a, dirac_meta(Eigen::Vector2d(0, 0)), cfg), InvalidInput);
}

TEST_CASE("dsw of single Diracs matches per-sample closed form") {
    const Eigen::Vector3d x(1.0, -2.0, 0.5), y(0.0, 1.0, 2.0);
    const auto cfg = small_config(12);
    const auto est = dsw(dirac_meta(x), dirac_meta(y), cfg);
    const SeedSequence seeds(cfg.seed);
    const GpSampler sampler(cfg.kernel, cfg.grid);
    double acc = 0.0;
    for (int s = 0; s < cfg.outer_S; ++s) {
        auto dr = seeds.stream("direction", static_cast<std::uint64_t>(s));
        const auto theta = sample_direction(3, dr);
        auto pr = seeds.stream("paths", static_cast<std::uint64_t>(s));
        const Eigen::MatrixXd g = sampler.sample(pr, cfg.inner_per_outer);
        const double proj = theta.vector().dot(x - y);
        for (Eigen::Index p = 0; p < g.cols(); ++p) acc += proj * proj * std::pow(cfg.grid.weights.dot(g.col(p)), 2);
    }
    CHECK(est.value == doctest::Approx(std::sqrt(acc / cfg.total())).epsilon(1e-12));
}

TEST_CASE("dsw is positively 1-homogeneous under a shared seed") {
    auto rng = SeedSequence(13).stream("metas");
    const auto a = random_meta(3, 4, 2, rng), b = random_meta(2, 5, 2, rng);
    auto scaled = [](const MetaMeasure& m) {
        std::vector<EmpiricalMeasure> inner;
        for (const auto& mu : m.inner()) inner.emplace_back(2.0 * mu.points(), mu.weights());
        return MetaMeasure(inner, m.outer_weights());
    };
    const auto cfg = small_config(14);
    CHECK(dsw(scaled(a), scaled(b), cfg).value == 2.0 * dsw(a, b, cfg).value);
}

TEST_CASE("sw_wow") {
    auto rng = SeedSequence(15).stream("metas");
    const auto a = random_meta(3, 4, 2, rng), b = random_meta(2, 5, 2, rng);
    CHECK(sw_wow(a, a, 50, 1).value == 0.0);
    CHECK(sw_wow(a, b, 50, 1).value > 0.0);

    for (int d : {2, 3, 8}) {
        Eigen::VectorXd x = Eigen::VectorXd::Zero(d), y = Eigen::VectorXd::LinSpaced(d, 0.5, 1.5);
        const auto est = sw_wow(dirac_meta(x), dirac_meta(y), 5000, 16);
        CHECK(std::abs(est.value - (x - y).norm() / std::sqrt(d)) <= 3.0 * est.std_error);
    }

    // N = M = 1: sqrt(mean of projected 1D W²)
    const auto m1 = build_meta({a.inner(0)}), m2 = build_meta({b.inner(1)});
    const SeedSequence seeds(17);
    double acc = 0.0;
    for (int s = 0; s < 40; ++s) {
        auto r = seeds.stream("direction", static_cast<std::uint64_t>(s));
        const auto theta = sample_direction(2, r);
        acc += std::pow(wasserstein_1d(project_measure(a.inner(0), theta), project_measure(b.inner(1), theta)), 2);
    }
    CHECK(sw_wow(m1, m2, 40, 17).value == doctest::Approx(std::sqrt(acc / 40)).epsilon(1e-12));
}

TEST_CASE("distance matrices under shared projections") {
    auto rng = SeedSequence(20).stream("metas");
    std::vector<MetaMeasure> metas;
    for (int k = 0; k < 6; ++k) metas.push_back(random_meta_varying(4, 5, 2, rng));
    metas.push_back(metas[2]);
    const auto cfg = small_config(21);
    const Eigen::MatrixXd m = dsw_distance_matrix(metas, cfg);
    const auto K = static_cast<Eigen::Index>(metas.size());
    for (Eigen::Index i = 0; i < K; ++i) {
        CHECK(m(i, i) == 0.0);
        for (Eigen::Index j = 0; j < K; ++j) {
            CHECK(m(i, j) == m(j, i));
            for (Eigen::Index k = 0; k < K; ++k) CHECK(m(i, k) <= m(i, j) + m(j, k) + 1e-10);
        }
    }
    CHECK(m(2, 6) == 0.0);
    CHECK(m(0, 3) == dsw(metas[0], metas[3], cfg).value);

    CHECK(dsw_distance_matrix({metas[0]}, cfg) == Eigen::MatrixXd::Zero(1, 1));

    auto cfg4 = cfg;
    cfg4.threads = 4;
    CHECK(dsw_distance_matrix(metas, cfg4) == m);
}

TEST_CASE("sqw distance matrix is a pseudo-metric and matches pairwise sqw") {
    std::vector<MetaMeasure> metas{line_meta({{0.0, 1.0}, {3.0}}), line_meta({{0.2}, {1.0, 2.0}, {4.0}}),
                                   line_meta({{-1.0, 5.0}}), line_meta({{0.0, 0.5, 1.0}})};
    const auto cfg = small_config(22);
    const Eigen::MatrixXd m = sqw_distance_matrix(metas, cfg);
    for (Eigen::Index i = 0; i < 4; ++i)
        for (Eigen::Index j = 0; j < 4; ++j)
            for (Eigen::Index k = 0; k < 4; ++k) CHECK(m(i, k) <= m(i, j) + m(j, k) + 1e-10);
    CHECK(m(1, 3) == sqw(metas[1], metas[3], cfg).value);
}

TEST_CASE("estimator is thread-count independent") {
    auto rng = SeedSequence(23).stream("metas");
    const auto a = random_meta(3, 5, 3, rng), b = random_meta(4, 6, 3, rng);
    auto cfg = small_config(24);
    const auto one = dsw(a, b, cfg);
    cfg.threads = 3;
    const auto three = dsw(a, b, cfg);
    CHECK(one.value == three.value);
    CHECK(one.std_error == three.std_error);
    CHECK(sw_wow(a, b, 30, 2, 1).value == sw_wow(a, b, 30, 2, 4).value);
}

TEST_CASE("sliced L2 on function samples") {
    const auto grid = make_grid(50);
    auto [f, h] = functional_test_pair(1, grid);
    auto cfg = small_config(25);
    cfg.grid = grid;
    CHECK(sliced_l2(f, f, cfg).value == 0.0);
    CHECK(sliced_l2(f, h, cfg).value > 0.0);
    FunctionSample bad{Eigen::MatrixXd::Zero(2, 7), Eigen::Vector2d(0.5, 0.5)};
    CHECK_THROWS_AS(sliced_l2(f, bad, cfg), InvalidInput);
}

TEST_CASE("slicing config validation") {
    SlicingConfig c;
    c.outer_S = 0;
    CHECK_THROWS_AS(c.validate(), InvalidInput);
    c = SlicingConfig{};
    c.kernel = RbfKernel{0.0};
    CHECK_THROWS_AS(c.validate(), InvalidInput);
    CHECK(SlicingConfig{}.total() == 10000);
}
