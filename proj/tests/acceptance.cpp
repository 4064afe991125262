// Acceptance run: one PASS/FAIL line per criterion.
#include "metaot/discrete_ot.hpp"
#include "metaot/gp_slicer.hpp"
#include "metaot/harness.hpp"
#include "metaot/mmspace.hpp"
#include "metaot/ot1d.hpp"
#include "metaot/patches.hpp"
#include "metaot/rng.hpp"
#include "metaot/sqw_dsw.hpp"
#include "metaot/synthetic.hpp"
#include "metaot/wow.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace metaot;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Criterion {
    int id;
    const char* name;
    double time_limit_s;
    std::function<Outcome()> run;
};

std::string num(double v) {
    std::ostringstream s;
    s.precision(4);
    s << v;
    return s.str();
}

Eigen::VectorXd random_weights(int n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.05, 1.0);
    Eigen::VectorXd w(n);
    for (int i = 0; i < n; ++i) w(i) = u(rng);
    return w / w.sum();
}

EmpiricalMeasure random_line_measure(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 2.0);
    Eigen::MatrixXd x(n, 1);
    for (int i = 0; i < n; ++i) x(i, 0) = g(rng);
    return EmpiricalMeasure(x, random_weights(n, rng));
}

Outcome oracle_1d() {
    std::mt19937_64 rng(101);
    std::uniform_int_distribution<int> size(1, 8);
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const auto mu = random_line_measure(size(rng), rng), nu = random_line_measure(size(rng), rng);
        const double exact = std::sqrt(std::max(
            0.0, solve_exact(squared_euclidean_cost(mu, nu), mu.weights(), nu.weights()).objective));
        worst = std::max(worst, std::abs(wasserstein_1d(mu, nu) - exact));
    }
    return {worst <= 1e-9, "max |W_1d - W_simplex| = " + num(worst) + " over 200 instances (tol 1e-9)"};
}

Outcome quantile_isometry() {
    std::mt19937_64 rng(102);
    std::uniform_int_distribution<int> size(1, 10);
    const auto grid = make_grid(200000, GridKind::midpoint);
    std::vector<double> ts(grid.knots.data(), grid.knots.data() + grid.size());
    std::vector<double> qa(ts.size()), qb(ts.size());
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const auto mu = random_line_measure(size(rng), rng), nu = random_line_measure(size(rng), rng);
        eval_quantile_sorted(quantile_of(mu), ts, Interpolation::step, qa);
        eval_quantile_sorted(quantile_of(nu), ts, Interpolation::step, qb);
        double l2 = 0.0;
        for (std::size_t r = 0; r < ts.size(); ++r) l2 += grid.weights(static_cast<Eigen::Index>(r)) * (qa[r] - qb[r]) * (qa[r] - qb[r]);
        const double w2 = std::pow(wasserstein_1d(mu, nu), 2);
        worst = std::max(worst, std::abs(l2 - w2) / std::max(w2, 1e-300));
    }
    return {worst <= 1e-3, "max relative error of quadrature ||Q_mu - Q_nu||^2 vs W^2 = " + num(worst) +
                               " over 50 pairs (tol 1e-3)"};
}

Outcome bound_sandwich() {
    SlicingConfig cfg;
    cfg.grid = make_grid(50);
    cfg.outer_S = 500;
    cfg.inner_per_outer = 10;  // S = 5000 paths
    // discretized second moment of the RBF path: sum_r w_r k(t_r, t_r)
    const double m2 = cfg.grid.weights.sum();
    auto rng = SeedSequence(103).stream("metas");
    int passed = 0;
    double worst_gap = -1e300;
    for (int i = 0; i < 20; ++i) {
        const auto a = random_meta_varying(4, 6, 3, rng), b = random_meta_varying(4, 6, 3, rng);
        cfg.seed = SeedSequence(103).derive("instance", static_cast<std::uint64_t>(i));
        const auto bc = bound_check_report(a, b, cfg, 5000);
        passed += bc.pass() ? 1 : 0;
        worst_gap = std::max(worst_gap, bc.dsw.value / std::sqrt(m2) - bc.sw_wow.value);
    }
    return {passed == 20 && std::abs(m2 - 1.0) < 1e-12,
            std::to_string(passed) + "/20 instances satisfy dsw <= sw_wow + 3se and sw_wow <= wow + 3se; M2 = " +
                num(m2) + "; max(dsw - sw_wow) = " + num(worst_gap)};
}

Outcome mc_rate() {
    auto rng = SeedSequence(104).stream("metas");
    const auto a = random_meta(4, 6, 3, rng), b = random_meta(4, 6, 3, rng);
    SlicingConfig base;
    base.inner_per_outer = 10;
    base.seed = 104;
    const auto rep = mc_convergence_report(a, b, {100, 400, 1600, 6400}, 50, base);
    if (!rep.slope) return {false, "slope undefined"};
    return {*rep.slope >= -0.65 && *rep.slope <= -0.35,
            "log-log slope of std(dsw^2) vs S = " + num(*rep.slope) + " (required [-0.65, -0.35])"};
}

Outcome metric_axioms() {
    auto rng = SeedSequence(105).stream("metas");
    std::vector<MetaMeasure> metas;
    for (int k = 0; k < 8; ++k) metas.push_back(random_meta_varying(4, 6, 3, rng));
    SlicingConfig cfg;
    cfg.seed = 105;
    auto check = [](const Eigen::MatrixXd& m, double tol, double& worst) {
        bool ok = true;
        worst = 0.0;
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            ok = ok && m(i, i) == 0.0;
            for (Eigen::Index j = 0; j < m.rows(); ++j) {
                ok = ok && m(i, j) == m(j, i);
                for (Eigen::Index k = 0; k < m.rows(); ++k) worst = std::max(worst, m(i, k) - m(i, j) - m(j, k));
            }
        }
        return ok && worst <= tol;
    };
    double wd = 0.0, ww = 0.0;
    const bool d_ok = check(dsw_distance_matrix(metas, cfg), 1e-10, wd);
    const bool w_ok = check(wow_distance_matrix(metas), 1e-8, ww);
    return {d_ok && w_ok, std::string("dsw matrix ") + (d_ok ? "ok" : "violates") + " (max triangle excess " + num(wd) +
                              "), wow matrix " + (w_ok ? "ok" : "violates") + " (max triangle excess " + num(ww) + ")"};
}

Outcome dirac_closed_form() {
    bool ok = true;
    std::string detail;
    for (int d : {2, 3, 8}) {
        std::mt19937_64 rng(106 + d);
        std::normal_distribution<double> g;
        Eigen::VectorXd x(d), y(d);
        for (int i = 0; i < d; ++i) {
            x(i) = g(rng);
            y(i) = g(rng);
        }
        const auto est = sw_wow(build_meta({EmpiricalMeasure::dirac(x)}), build_meta({EmpiricalMeasure::dirac(y)}),
                                5000, 106);
        const double target = (x - y).norm() / std::sqrt(d);
        const double z = (est.value - target) / est.std_error;
        ok = ok && std::abs(z) <= 3.0;
        detail += "d=" + std::to_string(d) + ": " + num(est.value) + " vs " + num(target) + " (z " + num(z) + ") ";
    }
    return {ok, detail};
}

Outcome isometry_invariance() {
    auto rng = SeedSequence(107).stream("cloud");
    std::normal_distribution<double> g;
    Eigen::MatrixXd p(40, 3);
    for (Eigen::Index i = 0; i < p.rows(); ++i) p.row(i) << g(rng), g(rng), g(rng);
    SlicingConfig cfg;
    cfg.outer_S = 1;
    cfg.inner_per_outer = 1000;
    cfg.seed = 107;
    // on a dyadic grid, quarter turn + reflection + dyadic shift are exact in floating point
    const Eigen::MatrixXd grid_p = (p * 1024.0).array().round() / 1024.0;
    Eigen::Matrix3d exact;
    exact << 0, -1, 0, 1, 0, 0, 0, 0, -1;
    const Eigen::MatrixXd p_exact = (grid_p * exact.transpose()).rowwise() + Eigen::RowVector3d(0.5, -2.0, 4.25);
    const Eigen::Matrix3d rot = (Eigen::AngleAxisd(0.7, Eigen::Vector3d::UnitZ()) *
                                 Eigen::AngleAxisd(-1.3, Eigen::Vector3d::UnitY()) *
                                 Eigen::AngleAxisd(2.1, Eigen::Vector3d::UnitX())).toRotationMatrix();
    const Eigen::MatrixXd p_rot = (p * rot.transpose()).rowwise() + Eigen::RowVector3d(3.3, -1.7, 0.9);
    const double d_exact = sqw_shape_distance(PointCloudShape{grid_p}, PointCloudShape{p_exact}, cfg).value;
    const double d_rot = sqw_shape_distance(PointCloudShape{p}, PointCloudShape{p_rot}, cfg).value;
    const auto scaled = sqw_shape_distance(PointCloudShape{p}, PointCloudShape{2.0 * p}, cfg);
    const bool ok = d_exact == 0.0 && d_rot <= 1e-9 && scaled.value > 5.0 * scaled.std_error;
    return {ok, "exact isometry " + num(d_exact) + " (== 0), generic rotation+translation " + num(d_rot) +
                    " (<= 1e-9), x2 scaling " + num(scaled.value) + " = " + num(scaled.value / scaled.std_error) +
                    " std errors (> 5)"};
}

Outcome shape_knn() {
    auto rng = SeedSequence(108).stream("shapes");
    std::vector<ShapeInput> shapes;
    std::vector<std::string> labels;
    for (auto s : {Shape2D::circle, Shape2D::square, Shape2D::star})
        for (int k = 0; k < 30; ++k) {
            shapes.emplace_back(PointCloudShape{sample_shape_2d(s, 50, rng)});
            labels.push_back(to_string(s));
        }
    SlicingConfig cfg;
    cfg.outer_S = 1;
    cfg.inner_per_outer = 100;
    cfg.kernel = RbfKernel{0.01};
    cfg.grid = make_grid(10);
    cfg.seed = 108;
    const Eigen::MatrixXd dist = shape_distance_matrix(shapes, cfg);
    KnnConfig knn;
    knn.seed = 1080;
    const auto r = knn_classify(dist, labels, knn);
    return {r.mean_accuracy >= 0.95,
            "accuracy " + num(r.mean_accuracy) + " +- " + num(r.std_accuracy) + " over 1000 trials (required >= 0.95)"};
}

Outcome patch_count() {
    PerlinParams p;
    p.seed = 109;
    const auto patches = extract_patches(perlin_texture(64, 64, p), 8);
    return {patches.size() == 3249 && patches.dim() == 64,
            std::to_string(patches.size()) + " patches of dimension " + std::to_string(patches.dim()) +
                " (expected 3249 x 64)"};
}

Outcome texture_discrimination() {
    TextureEvalConfig cfg;
    cfg.slicing.seed = 110;
    cfg.slicing.kernel = RbfKernel{0.1};
    cfg.slicing.outer_S = 100;
    cfg.slicing.inner_per_outer = 100;
    const auto rep = texture_lacunarity_eval(cfg);
    std::size_t best = 0;
    std::string detail;
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
        if (rep.rows[i].mean < rep.rows[best].mean) best = i;
        detail += num(rep.rows[i].parameter) + ":" + num(rep.rows[i].mean) + "+-" + num(rep.rows[i].std) + " ";
    }
    const double argmin = rep.rows[best].parameter;
    return {argmin == cfg.reference_value, "argmin lacunarity " + num(argmin) + " (reference 2); " + detail};
}

Outcome pointcloud_trends() {
    const SolidFamily family(10);
    const std::uint64_t seed = 111;
    const MetaMeasure reference = family.batch({10, 0.0, 50, SeedSequence(seed).derive("reference", 0)});
    const TargetBuilder builder = [&](const TargetSpec& s) { return family.batch(s); };
    PointCloudEvalConfig cfg;
    cfg.default_M = 10;
    cfg.default_m = 50;
    cfg.reps = 5;
    cfg.slicing.seed = seed;

    cfg.sweep = SweepKind::shapes;
    cfg.values = {1, 10};
    const auto modes = pointcloud_eval(reference, builder, cfg);
    const auto& m1 = modes.rows[0];
    const auto& mN = modes.rows[1];
    // std of the difference of the two rep means
    const double combined = std::sqrt((m1.std * m1.std + mN.std * mN.std) / cfg.reps);
    const bool collapse = m1.mean - mN.mean > 5.0 * combined;

    cfg.sweep = SweepKind::noise;
    cfg.values = {0.0, 0.05, 0.1, 0.2};
    const auto noise = pointcloud_eval(reference, builder, cfg);
    bool monotone = true;
    std::string trail;
    for (std::size_t i = 0; i < noise.rows.size(); ++i) {
        trail += num(noise.rows[i].mean) + " ";
        if (i > 0) {
            const double slack = 2.0 * std::hypot(noise.rows[i].std, noise.rows[i - 1].std);
            monotone = monotone && noise.rows[i].mean + slack >= noise.rows[i - 1].mean;
        }
    }
    return {collapse && monotone, "mode collapse M=1 " + num(m1.mean) + " vs M=10 " + num(mN.mean) + " (gap " +
                                      num(m1.mean - mN.mean) + " > 5 x " + num(combined) + ": " +
                                      (collapse ? "yes" : "no") + "); noise sweep " + trail +
                                      (monotone ? "nondecreasing" : "NOT nondecreasing")};
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(f), {}};
}

Outcome determinism() {
    const fs::path dir = fs::temp_directory_path() / "metaot_acceptance_determinism";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const std::string bin = METAOT_BINARY, data = METAOT_DATA_DIR;
    {
        std::ofstream(dir / "mc.json") << R"({"S_list": [100, 400], "reps": 10, "random": {"N": 3, "n": 5, "d": 3}})";
        std::ofstream(dir / "pc.json")
            << R"({"templates": 4, "N": 4, "n": 30, "sweep": "noise", "values": [0, 0.1], "reps": 2,)"
               R"( "slicing": {"outer_S": 20, "inner_per_outer": 20}})";
        std::ofstream(dir / "perlin.json") << R"({"count": 4, "height": 32, "width": 32})";
        std::ofstream(dir / "bound.json") << R"({"S": 500, "random": {"instances": 3, "N": 3, "n": 4, "d": 2}})";
    }
    struct Cmd {
        std::string args;
        std::vector<std::string> files;
    };
    const std::vector<Cmd> cmds = {
        {"dsw " + data + "/a.json " + data + "/b.json --seed 12 --out {}/dsw.json", {"dsw.json"}},
        {"sqw " + data + "/line_a.json " + data + "/line_b.json --seed 12 --out {}/sqw.json", {"sqw.json"}},
        {"mc-report " + (dir / "mc.json").string() + " --seed 12 --out {}/mc.csv", {"mc.csv", "mc.json"}},
        {"pointcloud-eval " + (dir / "pc.json").string() + " --seed 12 --out {}/pc.csv", {"pc.csv", "pc.json"}},
        {"bound-check " + (dir / "bound.json").string() + " --seed 12 --out {}/bound.json", {"bound.json"}},
        {"gen-perlin " + (dir / "perlin.json").string() + " --seed 12 --out {}/perlin",
         {"perlin/manifest.json", "perlin/texture_000.pgm", "perlin/texture_003.pgm"}},
    };
    int identical = 0, total = 0;
    std::string bad;
    for (const auto& c : cmds) {
        for (const char* threads : {"1", "4"}) {
            std::string args = c.args;
            const fs::path out = dir / (std::string("t") + threads);
            args.replace(args.find("{}"), 2, out.string());
            const std::string cmd = bin + " " + args + " --threads " + threads + " > /dev/null";
            if (std::system(cmd.c_str()) != 0) return {false, "command failed: " + cmd};
        }
        for (const auto& f : c.files) {
            ++total;
            const std::string a = slurp(dir / "t1" / f), b = slurp(dir / "t4" / f);
            if (!a.empty() && a == b) {
                ++identical;
            } else {
                bad += f + " ";
            }
        }
    }
    return {identical == total, std::to_string(identical) + "/" + std::to_string(total) +
                                    " output files bit-identical between --threads 1 and 4" +
                                    (bad.empty() ? "" : "; differing: " + bad)};
}

Outcome functional_stability() {
    bool ok = true;
    std::string detail;
    for (int which : {1, 2}) {
        for (int kernel = 0; kernel < 2; ++kernel) {
            DistanceEstimate est[2];
            int idx = 0;
            for (int R : {50, 100}) {
                SlicingConfig cfg;
                cfg.grid = make_grid(R);
                cfg.kernel = kernel == 0 ? KernelSpec{RbfKernel{0.1}} : KernelSpec{BrownianKernel{}};
                cfg.outer_S = 100;
                cfg.inner_per_outer = 100;
                cfg.seed = SeedSequence(113).derive("pair", static_cast<std::uint64_t>(which * 10 + kernel));
                auto [f, h] = functional_test_pair(which, cfg.grid);
                est[idx++] = sliced_l2(f, h, cfg);
            }
            const double z = std::abs(est[0].value - est[1].value) / std::hypot(est[0].std_error, est[1].std_error);
            ok = ok && z < 3.0;
            detail += std::string("pair ") + std::to_string(which) + (kernel == 0 ? " rbf" : " brownian") + ": " +
                      num(est[0].value) + " vs " + num(est[1].value) + " (z " + num(z) + ") ";
        }
    }
    return {ok, detail};
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "1D oracle equivalence", 5, oracle_1d},
        {2, "quantile isometry", 5, quantile_isometry},
        {3, "bound sandwich", 60, bound_sandwich},
        {4, "Monte Carlo rate", 120, mc_rate},
        {5, "metric axioms under shared projections", 60, metric_axioms},
        {6, "single-Dirac closed form", 10, dirac_closed_form},
        {7, "isometry invariance", 10, isometry_invariance},
        {8, "synthetic shape KNN", 120, shape_knn},
        {9, "patch count", 1, patch_count},
        {10, "texture discrimination", 600, texture_discrimination},
        {11, "point-cloud trends", 300, pointcloud_trends},
        {12, "determinism across thread counts", 30, determinism},
        {13, "functional quadrature stability", 60, functional_stability},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = secs < c.time_limit_s;
        const bool pass = o.pass && in_time;
        failures += pass ? 0 : 1;
        std::printf("%s  %2d  %-40s %8.2fs (limit %gs%s)  %s\n", pass ? "PASS" : "FAIL", c.id, c.name, secs,
                    c.time_limit_s, in_time ? "" : ", EXCEEDED", o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
