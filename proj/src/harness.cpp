#include "metaot/harness.hpp"

#include "metaot/errors.hpp"
#include "metaot/patches.hpp"
#include "metaot/rng.hpp"
#include "metaot/wow.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace metaot {

double sample_std(const std::vector<double>& values) {
    if (values.size() < 2) return 0.0;
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) /
                        static_cast<double>(values.size());
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

namespace {

double mean_of(const std::vector<double>& values) {
    return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

std::string format_real(double v) {
    std::ostringstream s;
    s.precision(17);
    s << v;
    return s.str();
}

}  // namespace

// ---------------------------------------------------------------- KNN

KnnResult knn_classify(const Eigen::MatrixXd& dist, const std::vector<std::string>& labels,
                       const KnnConfig& config) {
    const auto K = static_cast<std::size_t>(dist.rows());
    if (K < 2) throw InvalidInput("knn_classify needs at least 2 items");
    if (dist.cols() != dist.rows() || labels.size() != K) {
        throw InvalidInput("distance matrix and label vector sizes disagree");
    }
    if (std::set<std::string>(labels.begin(), labels.end()).size() < 2) {
        throw InvalidInput("degenerate labels: all items share one class");
    }
    if (config.k < 1 || config.trials < 1 || !(config.train_fraction > 0.0 && config.train_fraction < 1.0)) {
        throw InvalidInput("invalid KNN configuration");
    }
    const auto n_train = static_cast<std::size_t>(std::clamp<long>(
        std::lround(config.train_fraction * static_cast<double>(K)), 1L, static_cast<long>(K) - 1));
    const SeedSequence seeds(config.seed);
    std::vector<double> accuracies(static_cast<std::size_t>(config.trials));
    std::vector<std::size_t> order(K);
    for (int t = 0; t < config.trials; ++t) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        auto rng = seeds.stream("knn-trial", static_cast<std::uint64_t>(t));
        for (std::size_t i = K - 1; i > 0; --i) {
            const auto j = static_cast<std::size_t>(rng() % (i + 1));
            std::swap(order[i], order[j]);
        }
        std::vector<std::size_t> train(order.begin(), order.begin() + static_cast<long>(n_train));
        std::sort(train.begin(), train.end());
        const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(config.k), n_train);
        std::size_t correct = 0;
        for (std::size_t q = n_train; q < K; ++q) {
            const std::size_t item = order[q];
            std::vector<std::size_t> nn = train;
            std::partial_sort(nn.begin(), nn.begin() + static_cast<long>(k), nn.end(),
                              [&](std::size_t x, std::size_t y) {
                                  const double dx = dist(static_cast<Eigen::Index>(item), static_cast<Eigen::Index>(x));
                                  const double dy = dist(static_cast<Eigen::Index>(item), static_cast<Eigen::Index>(y));
                                  return dx < dy || (dx == dy && x < y);
                              });
            struct Vote {
                int count = 0;
                double sum = 0.0;
                std::size_t first = 0;
            };
            std::map<std::string, Vote> votes;
            for (std::size_t r = 0; r < k; ++r) {
                auto& v = votes[labels[nn[r]]];
                if (v.count == 0) v.first = nn[r];
                ++v.count;
                v.sum += dist(static_cast<Eigen::Index>(item), static_cast<Eigen::Index>(nn[r]));
            }
            const std::string* best = nullptr;
            const Vote* best_vote = nullptr;
            for (const auto& [label, v] : votes) {
                const bool better = !best_vote || v.count > best_vote->count ||
                                    (v.count == best_vote->count &&
                                     (v.sum < best_vote->sum ||
                                      (v.sum == best_vote->sum && v.first < best_vote->first)));
                if (better) {
                    best = &label;
                    best_vote = &v;
                }
            }
            if (*best == labels[item]) ++correct;
        }
        accuracies[static_cast<std::size_t>(t)] =
            static_cast<double>(correct) / static_cast<double>(K - n_train);
    }
    return {mean_of(accuracies), sample_std(accuracies)};
}

// ---------------------------------------------------------------- reports

std::string EvalReport::to_csv() const {
    std::ostringstream out;
    out << "parameter,metric,mean,std\n";
    for (const auto& r : rows) {
        out << format_real(r.parameter) << ',' << r.metric << ',' << format_real(r.mean) << ','
            << format_real(r.std) << '\n';
    }
    return out.str();
}

nlohmann::json EvalReport::to_json() const {
    nlohmann::json rows_json = nlohmann::json::array();
    for (const auto& r : rows) {
        rows_json.push_back({{"parameter", r.parameter}, {"metric", r.metric}, {"mean", r.mean}, {"std", r.std}});
    }
    return rows_json;
}

// ---------------------------------------------------------------- Monte Carlo rate

McReport mc_convergence_report(const MetaMeasure& a, const MetaMeasure& b,
                               const std::vector<int>& S_list, int reps,
                               const SlicingConfig& base) {
    if (reps < 10) throw InvalidInput("mc_convergence_report needs reps >= 10");
    if (S_list.empty() || !std::is_sorted(S_list.begin(), S_list.end())) {
        throw InvalidInput("S list must be nonempty and ascending");
    }
    const SeedSequence seeds(base.seed);
    McReport out;
    std::vector<double> log_s, log_std;
    bool any_zero = false;
    for (int S : S_list) {
        if (S < base.inner_per_outer || S % base.inner_per_outer != 0) {
            throw InvalidInput("each S must be a positive multiple of inner_per_outer");
        }
        std::vector<double> values(static_cast<std::size_t>(reps));
        for (int r = 0; r < reps; ++r) {
            SlicingConfig cfg = base;
            cfg.outer_S = S / base.inner_per_outer;
            cfg.seed = seeds.derive("mc-rep", static_cast<std::uint64_t>(r));
            const double v = dsw(a, b, cfg).value;
            values[static_cast<std::size_t>(r)] = v * v;
        }
        const double sd = sample_std(values);
        out.report.rows.push_back({static_cast<double>(S), "dsw_squared", mean_of(values), sd});
        if (sd > 0.0) {
            log_s.push_back(std::log(static_cast<double>(S)));
            log_std.push_back(std::log(sd));
        } else {
            any_zero = true;
        }
    }
    if (!any_zero && log_s.size() >= 2) {
        const double mx = mean_of(log_s);
        const double my = mean_of(log_std);
        double sxy = 0.0, sxx = 0.0;
        for (std::size_t i = 0; i < log_s.size(); ++i) {
            sxy += (log_s[i] - mx) * (log_std[i] - my);
            sxx += (log_s[i] - mx) * (log_s[i] - mx);
        }
        out.slope = sxy / sxx;
    }
    return out;
}

// ---------------------------------------------------------------- bound check

nlohmann::json BoundCheck::to_json() const {
    return {{"dsw", dsw.value},         {"dsw_std_error", dsw.std_error},
            {"sw_wow", sw_wow.value},   {"sw_wow_std_error", sw_wow.std_error},
            {"wow", wow},               {"dsw_below_sw_wow", dsw_below_sw},
            {"sw_wow_below_wow", sw_below_wow}, {"pass", pass()}};
}

BoundCheck bound_check_report(const MetaMeasure& a, const MetaMeasure& b,
                              const SlicingConfig& config, int sw_outer_S) {
    BoundCheck out;
    out.wow = wow_exact(a, b, InnerSolver::exact(), config.threads);
    out.dsw = dsw(a, b, config);
    out.sw_wow = sw_wow(a, b, sw_outer_S, config.seed, config.threads);
    const double combined = std::hypot(out.dsw.std_error, out.sw_wow.std_error);
    out.dsw_below_sw = out.dsw.value <= out.sw_wow.value + 3.0 * combined;
    out.sw_below_wow = out.sw_wow.value <= out.wow + 3.0 * out.sw_wow.std_error + 1e-9;
    return out;
}

// ---------------------------------------------------------------- point clouds

SolidFamily::SolidFamily(int templates) {
    if (templates < 1) throw InvalidInput("shape family needs at least one template");
    for (int t = 0; t < templates; ++t) {
        // Distinct aspect ratios; deterministic so that references are reproducible.
        const double s = static_cast<double>(t) / std::max(1, templates - 1);
        axes_.emplace_back(0.5 + 0.6 * s, 1.1 - 0.5 * s, 0.3 + 0.4 * ((t * 7) % templates) /
                                                             std::max(1, templates - 1));
    }
}

MetaMeasure SolidFamily::batch(const TargetSpec& spec) const {
    if (spec.M < 1 || spec.m < 1) throw InvalidInput("target batch needs M >= 1 and m >= 1");
    if (spec.noise_sigma < 0.0) throw InvalidInput("noise sigma must be nonnegative");
    const SeedSequence seeds(spec.seed);
    std::vector<EmpiricalMeasure> inner;
    for (int j = 0; j < spec.M; ++j) {
        const auto t = static_cast<std::size_t>(j % templates());
        auto rng = seeds.stream("shape", static_cast<std::uint64_t>(j));
        Eigen::MatrixXd pts = sample_solid_3d(t % 2 == 0 ? Solid3D::ellipsoid : Solid3D::box,
                                              axes_[t], spec.m, rng);
        if (spec.noise_sigma > 0.0) {
            std::normal_distribution<double> normal(0.0, spec.noise_sigma);
            for (Eigen::Index r = 0; r < pts.rows(); ++r)
                for (Eigen::Index c = 0; c < 3; ++c) pts(r, c) += normal(rng);
        }
        inner.push_back(EmpiricalMeasure::uniform(std::move(pts)));
    }
    return build_meta(std::move(inner));
}

EvalReport pointcloud_eval(const MetaMeasure& reference, const TargetBuilder& builder,
                           const PointCloudEvalConfig& config) {
    if (config.reps < 1 || config.values.empty()) {
        throw InvalidInput("point-cloud sweep needs reps >= 1 and at least one value");
    }
    const SeedSequence seeds(config.slicing.seed);
    const char* metric = config.metric == BatchMetric::dsw ? "dsw" : "wow";
    EvalReport report;
    for (double value : config.values) {
        std::vector<double> scores;
        for (int r = 0; r < config.reps; ++r) {
            TargetSpec spec{config.default_M, config.default_noise, config.default_m,
                            seeds.derive("target", static_cast<std::uint64_t>(r))};
            switch (config.sweep) {
                case SweepKind::shapes: spec.M = static_cast<int>(std::lround(value)); break;
                case SweepKind::noise: spec.noise_sigma = value; break;
                case SweepKind::resolution: spec.m = static_cast<int>(std::lround(value)); break;
            }
            const MetaMeasure target = builder(spec);
            if (config.metric == BatchMetric::dsw) {
                SlicingConfig cfg = config.slicing;
                cfg.seed = seeds.derive("slicing", static_cast<std::uint64_t>(r));
                scores.push_back(dsw(reference, target, cfg).value);
            } else {
                scores.push_back(wow_exact(reference, target, InnerSolver::exact(), config.slicing.threads));
            }
        }
        report.rows.push_back({value, metric, mean_of(scores), sample_std(scores)});
    }
    return report;
}

// ---------------------------------------------------------------- textures

EvalReport texture_lacunarity_eval(const TextureEvalConfig& config) {
    if (config.seeds < 1 || config.values.empty()) {
        throw InvalidInput("texture sweep needs seeds >= 1 and at least one value");
    }
    const SeedSequence seeds(config.slicing.seed);
    auto with_value = [&](double v, std::uint64_t seed) {
        PerlinParams p = config.base;
        (config.parameter == TextureParameter::lacunarity ? p.lacunarity : p.persistence) = v;
        p.seed = seed;
        return p;
    };
    const char* metric = config.parameter == TextureParameter::lacunarity ? "dsw_lacunarity"
                                                                          : "dsw_persistence";
    std::vector<std::vector<double>> scores(config.values.size());
    for (int s = 0; s < config.seeds; ++s) {
        const auto su = static_cast<std::uint64_t>(s);
        const MetaMeasure reference = batch_to_meta(
            perlin_batch(config.batch, config.size, config.size,
                         with_value(config.reference_value, seeds.derive("reference", su)),
                         config.slicing.threads),
            config.patch);
        SlicingConfig cfg = config.slicing;
        cfg.seed = seeds.derive("slicing", su);
        for (std::size_t v = 0; v < config.values.size(); ++v) {
            const MetaMeasure target = batch_to_meta(
                perlin_batch(config.batch, config.size, config.size,
                             with_value(config.values[v], seeds.derive("target", su)),
                             config.slicing.threads),
                config.patch);
            scores[v].push_back(dsw(reference, target, cfg).value);
        }
    }
    EvalReport report;
    for (std::size_t v = 0; v < config.values.size(); ++v) {
        report.rows.push_back({config.values[v], metric, mean_of(scores[v]), sample_std(scores[v])});
    }
    return report;
}

}  // namespace metaot
