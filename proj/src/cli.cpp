#include "metaot/cli.hpp"

#include "metaot/cache.hpp"
#include "metaot/errors.hpp"
#include "metaot/harness.hpp"
#include "metaot/measures.hpp"
#include "metaot/mmspace.hpp"
#include "metaot/patches.hpp"
#include "metaot/rng.hpp"
#include "metaot/synthetic.hpp"
#include "metaot/wow.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

namespace metaot::cli {

using nlohmann::json;

namespace {

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Common {
    std::uint64_t seed = 0;
    std::string out;
    unsigned threads = 1;
    std::string cache_dir;
    bool verbose = false;
};

struct SlicingFlags {
    int outer_S = 100;
    int inner = 100;
    int R = 10;
    double sigma = 0.1;
    std::string kernel = "rbf";
    std::string interpolation = "linear";
    std::string grid = "trapezoid";

    SlicingConfig resolve(std::uint64_t seed, unsigned threads) const {
        json j = {{"outer_S", outer_S}, {"inner_per_outer", inner}, {"R", R},
                  {"sigma", sigma},     {"kernel", kernel},        {"interpolation", interpolation},
                  {"grid", grid}};
        SlicingConfig c = slicing_from_json(j);
        c.seed = seed;
        c.threads = threads;
        return c;
    }
};

struct Context {
    std::ostream& out;
    std::ostream& err;
    Common common;
    CLI::App* sub = nullptr;

    bool has_seed_flag() const { return sub->count("--seed") > 0; }

    std::uint64_t require_seed() const {
        if (!has_seed_flag()) {
            throw UsageError(sub->get_name() + ": an explicit --seed is required for stochastic commands");
        }
        return common.seed;
    }

    /// --seed wins over the config's "seed" field; one of them must exist.
    std::uint64_t seed_from(const json& config) const {
        if (has_seed_flag()) return common.seed;
        if (config.contains("seed")) return config.at("seed").get<std::uint64_t>();
        throw UsageError(sub->get_name() + ": an explicit seed is required (--seed or \"seed\" in the config)");
    }

    std::optional<MatrixCache> cache() const {
        std::string dir = common.cache_dir;
        if (dir.empty()) {
            if (const char* env = std::getenv("META_OT_CACHE")) dir = env;
        }
        if (dir.empty()) return std::nullopt;
        return MatrixCache(dir, [this](const std::string& msg) { err << msg << '\n'; });
    }

    void verbose(const std::string& msg) const {
        if (common.verbose) err << "[verbose] " << msg << '\n';
    }
};

std::string fmt(double v) {
    std::ostringstream s;
    s << std::setprecision(10) << v;
    return s.str();
}

json envelope(const std::string& command, std::optional<std::uint64_t> seed, const json& config,
              const json& result) {
    json j;
    j["tool"] = kToolName;
    j["version"] = kVersion;
    j["command"] = command;
    j["seed"] = seed ? json(*seed) : json(nullptr);
    j["config"] = config;
    j["result"] = result;
    return j;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot write " + path.string());
    f << content;
    if (!f) throw IoError("write failure on " + path.string());
}

std::string csv_preamble(const json& env) {
    json meta = {{"tool", env["tool"]}, {"version", env["version"]}, {"command", env["command"]},
                 {"seed", env["seed"]}, {"config", env["config"]}};
    return "# " + meta.dump() + "\n";
}

/// Writes the JSON envelope and, if given, a CSV table. With --out x.csv the
/// table goes to x.csv and the envelope to x.json; otherwise the envelope
/// goes to --out and the table next to it with a .csv extension.
void emit(const Context& ctx, const json& env, const std::optional<std::string>& csv = std::nullopt) {
    if (ctx.common.out.empty()) return;
    std::filesystem::path out = ctx.common.out;
    std::filesystem::path json_path = out;
    if (csv) {
        std::filesystem::path csv_path = out;
        if (out.extension() == ".csv") {
            json_path.replace_extension(".json");
        } else {
            csv_path.replace_extension(".csv");
        }
        write_file(csv_path, csv_preamble(env) + *csv);
    }
    write_file(json_path, env.dump(2) + "\n");
}

json estimate_json(const DistanceEstimate& e) {
    return {{"value", e.value}, {"std_error", e.std_error}, {"S", e.S}};
}

json matrix_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(row);
    }
    return rows;
}

json read_config(const std::string& path) {
    try {
        return json::parse(read_text_file(path));
    } catch (const json::exception& e) {
        throw InvalidInput(path + ": " + e.what());
    }
}

std::uint64_t meta_hash(ContentHasher& h, const MetaMeasure& m) {
    h.add("meta").add(m.outer_weights());
    for (const auto& mu : m.inner()) h.add(mu.points()).add(mu.weights());
    return h.value();
}

class Timer {
public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

// ---------------------------------------------------------------- commands

int run_dsw(Context& ctx, const std::string& a_path, const std::string& b_path,
            const SlicingFlags& flags) {
    const std::uint64_t seed = ctx.require_seed();
    const SlicingConfig cfg = flags.resolve(seed, ctx.common.threads);
    const MetaMeasure a = load_meta(load_manifest(a_path));
    const MetaMeasure b = load_meta(load_manifest(b_path));
    Timer t;
    const DistanceEstimate est = dsw(a, b, cfg);
    ctx.verbose("dsw evaluated in " + fmt(t.seconds()) + " s");
    const json config = {{"a", a_path}, {"b", b_path}, {"slicing", slicing_to_json(cfg)}};
    emit(ctx, envelope("dsw", seed, config, estimate_json(est)));
    ctx.out << "dsw value=" << fmt(est.value) << " std_error=" << fmt(est.std_error)
            << " S=" << est.S << '\n';
    return ok;
}

int run_sqw(Context& ctx, const std::string& a_path, const std::string& b_path,
            const SlicingFlags& flags) {
    const std::uint64_t seed = ctx.require_seed();
    const SlicingConfig cfg = flags.resolve(seed, ctx.common.threads);
    const MetaMeasure a = load_meta(load_manifest(a_path));
    const MetaMeasure b = load_meta(load_manifest(b_path));
    const DistanceEstimate est = sqw(a, b, cfg);
    const json config = {{"a", a_path}, {"b", b_path}, {"slicing", slicing_to_json(cfg)}};
    emit(ctx, envelope("sqw", seed, config, estimate_json(est)));
    ctx.out << "sqw value=" << fmt(est.value) << " std_error=" << fmt(est.std_error)
            << " S=" << est.S << '\n';
    return ok;
}

InnerSolver parse_inner(const std::string& name, double epsilon) {
    if (name == "exact") return InnerSolver::exact();
    if (name == "entropic") return InnerSolver::with_entropy(epsilon);
    throw UsageError("--inner must be 'exact' or 'entropic'");
}

int run_wow(Context& ctx, const std::string& a_path, const std::string& b_path,
            const std::string& inner_name, double epsilon) {
    const InnerSolver inner = parse_inner(inner_name, epsilon);
    const MetaMeasure a = load_meta(load_manifest(a_path));
    const MetaMeasure b = load_meta(load_manifest(b_path));
    Timer t;
    const auto cache = ctx.cache();
    ContentHasher h;
    h.add("inner-wow-costs");
    meta_hash(h, a);
    meta_hash(h, b);
    const std::uint64_t key = h.add(inner.describe()).value();
    std::optional<Eigen::MatrixXd> costs;
    if (cache) costs = cache->get(key);
    const bool hit = costs.has_value();
    if (!costs) {
        costs = inner_cost_matrix(a, b, inner, ctx.common.threads);
        if (cache) cache->put(key, *costs);
    }
    ctx.verbose(std::string("inner cost matrix ") + (hit ? "cache hit" : "computed") + " in " +
                fmt(t.seconds()) + " s (key " + hex64(key) + ")");
    const double value = wow_from_inner(*costs, a, b);
    const json config = {{"a", a_path}, {"b", b_path}, {"inner", inner.describe()}};
    emit(ctx, envelope("wow", std::nullopt, config, {{"value", value}}));
    ctx.out << "wow value=" << fmt(value) << '\n';
    return ok;
}

ShapeInput load_shape(const std::filesystem::path& path) {
    if (path.extension() == ".off") {
        const TriangleMesh mesh = read_off(path);
        return GraphShape{mesh.vertices.rows(), mesh_edges(mesh)};
    }
    return PointCloudShape{load_point_cloud(path).points()};
}

int run_shape_knn(Context& ctx, const std::string& manifest_path, SlicingFlags flags, int k,
                  double train_fraction, int trials) {
    const std::uint64_t seed = ctx.require_seed();
    const SlicingConfig cfg = flags.resolve(seed, ctx.common.threads);
    const DatasetManifest manifest = load_manifest(manifest_path);
    std::vector<ShapeInput> shapes;
    std::vector<std::string> labels;
    ContentHasher h;
    h.add("shape-distance-matrix").add(slicing_to_json(cfg).dump());
    for (const auto& item : manifest.items) {
        shapes.push_back(load_shape(item.path));
        labels.push_back(item.label);
        h.add(read_text_file(item.path));
    }
    const auto cache = ctx.cache();
    const std::uint64_t key = h.value();
    Timer t;
    std::optional<Eigen::MatrixXd> dist;
    if (cache) dist = cache->get(key);
    const bool hit = dist.has_value();
    if (dist && dist->rows() != static_cast<Eigen::Index>(shapes.size())) dist.reset();
    if (!dist) {
        dist = shape_distance_matrix(shapes, cfg);
        if (cache) cache->put(key, *dist);
    }
    ctx.verbose(std::string("distance matrix ") + (hit ? "cache hit" : "computed") + " in " +
                fmt(t.seconds()) + " s (key " + hex64(key) + ")");
    KnnConfig knn;
    knn.k = k;
    knn.train_fraction = train_fraction;
    knn.trials = trials;
    knn.seed = SeedSequence(seed).derive("knn", 0);
    const KnnResult res = knn_classify(*dist, labels, knn);
    const json config = {{"manifest", manifest_path},
                         {"slicing", slicing_to_json(cfg)},
                         {"knn", {{"k", k}, {"train_fraction", train_fraction}, {"trials", trials}}}};
    emit(ctx, envelope("shape-knn", seed, config,
                       {{"mean_accuracy", res.mean_accuracy}, {"std_accuracy", res.std_accuracy},
                        {"labels", labels}, {"distances", matrix_json(*dist)}}));
    ctx.out << "shape-knn accuracy=" << fmt(res.mean_accuracy) << " std=" << fmt(res.std_accuracy)
            << " shapes=" << shapes.size() << '\n';
    return ok;
}

SweepKind parse_sweep(const std::string& s) {
    if (s == "shapes" || s == "M") return SweepKind::shapes;
    if (s == "noise" || s == "sigma") return SweepKind::noise;
    if (s == "resolution" || s == "m") return SweepKind::resolution;
    throw InvalidInput("sweep must be one of shapes, noise, resolution");
}

int run_pointcloud_eval(Context& ctx, const std::string& config_path) {
    const json cfg_json = read_config(config_path);
    const std::uint64_t seed = ctx.seed_from(cfg_json);
    const int templates = cfg_json.value("templates", 10);
    const int N = cfg_json.value("N", templates);
    const int n = cfg_json.value("n", 50);
    PointCloudEvalConfig cfg;
    cfg.sweep = parse_sweep(cfg_json.value("sweep", std::string("shapes")));
    cfg.values = cfg_json.value("values", std::vector<double>{1, 2, 5, 10});
    cfg.default_M = cfg_json.value("M", N);
    cfg.default_noise = cfg_json.value("noise_sigma", 0.0);
    cfg.default_m = cfg_json.value("m", n);
    const std::string metric = cfg_json.value("metric", std::string("dsw"));
    if (metric != "dsw" && metric != "wow") throw InvalidInput("metric must be dsw or wow");
    cfg.metric = metric == "dsw" ? BatchMetric::dsw : BatchMetric::wow;
    cfg.reps = cfg_json.value("reps", 5);
    cfg.slicing = slicing_from_json(cfg_json.value("slicing", json::object()));
    cfg.slicing.seed = seed;
    cfg.slicing.threads = ctx.common.threads;

    const SolidFamily family(templates);
    const MetaMeasure reference =
        family.batch({N, 0.0, n, SeedSequence(seed).derive("reference", 0)});
    const EvalReport report =
        pointcloud_eval(reference, [&](const TargetSpec& s) { return family.batch(s); }, cfg);

    const json resolved = {{"templates", templates}, {"N", N}, {"n", n},
                           {"sweep", cfg_json.value("sweep", std::string("shapes"))},
                           {"values", cfg.values}, {"M", cfg.default_M},
                           {"noise_sigma", cfg.default_noise}, {"m", cfg.default_m},
                           {"metric", metric}, {"reps", cfg.reps},
                           {"slicing", slicing_to_json(cfg.slicing)}};
    emit(ctx, envelope("pointcloud-eval", seed, resolved, report.to_json()), report.to_csv());
    ctx.out << "pointcloud-eval rows=" << report.rows.size();
    for (const auto& r : report.rows) ctx.out << ' ' << fmt(r.parameter) << ':' << fmt(r.mean);
    ctx.out << '\n';
    return ok;
}

PerlinParams perlin_from_json(const json& j, PerlinParams p = {}) {
    p.scale = j.value("scale", p.scale);
    p.octaves = j.value("octaves", p.octaves);
    p.persistence = j.value("persistence", p.persistence);
    p.lacunarity = j.value("lacunarity", p.lacunarity);
    p.validate();
    return p;
}

json perlin_to_json(const PerlinParams& p) {
    return {{"scale", p.scale}, {"octaves", p.octaves}, {"persistence", p.persistence},
            {"lacunarity", p.lacunarity}};
}

std::vector<GrayImage> load_image_batch(const std::string& manifest_path) {
    std::vector<GrayImage> out;
    for (const auto& item : load_manifest(manifest_path).items) out.push_back(read_pgm(item.path));
    return out;
}

int run_patch_eval(Context& ctx, const std::string& config_path) {
    const json cfg_json = read_config(config_path);
    const std::uint64_t seed = ctx.seed_from(cfg_json);
    SlicingConfig slicing = slicing_from_json(cfg_json.value("slicing", json::object()));
    slicing.seed = seed;
    slicing.threads = ctx.common.threads;
    const int patch = cfg_json.value("patch", 8);
    EvalReport report;
    json resolved;
    if (cfg_json.contains("reference")) {
        // Explicit PGM batches given as manifests.
        const std::string ref_path = cfg_json.at("reference").get<std::string>();
        const auto targets = cfg_json.at("targets").get<std::vector<std::string>>();
        const MetaMeasure reference = batch_to_meta(load_image_batch(ref_path), patch);
        for (std::size_t t = 0; t < targets.size(); ++t) {
            const MetaMeasure target = batch_to_meta(load_image_batch(targets[t]), patch);
            const DistanceEstimate e = dsw(reference, target, slicing);
            report.rows.push_back({static_cast<double>(t), "dsw", e.value, e.std_error});
        }
        resolved = {{"reference", ref_path}, {"targets", targets}, {"patch", patch},
                    {"slicing", slicing_to_json(slicing)}};
    } else {
        TextureEvalConfig cfg;
        const std::string param = cfg_json.value("parameter", std::string("lacunarity"));
        if (param != "lacunarity" && param != "persistence") {
            throw InvalidInput("parameter must be lacunarity or persistence");
        }
        cfg.parameter = param == "lacunarity" ? TextureParameter::lacunarity : TextureParameter::persistence;
        // Defaults follow the two texture studies: lacunarity sweeps use
        // persistence 1 with 6 octaves, persistence sweeps lacunarity 2.5 with 5.
        PerlinParams base;
        if (cfg.parameter == TextureParameter::persistence) {
            base.lacunarity = 2.5;
            base.octaves = 5;
        }
        cfg.base = perlin_from_json(cfg_json.value("perlin", json::object()), base);
        cfg.values = cfg_json.value("values", cfg.values);
        cfg.reference_value = cfg_json.value("reference_value", cfg.reference_value);
        cfg.batch = cfg_json.value("batch", cfg.batch);
        cfg.size = cfg_json.value("size", cfg.size);
        cfg.patch = patch;
        cfg.seeds = cfg_json.value("seeds", cfg.seeds);
        cfg.slicing = slicing;
        report = texture_lacunarity_eval(cfg);
        resolved = {{"parameter", param}, {"values", cfg.values},
                    {"reference_value", cfg.reference_value}, {"perlin", perlin_to_json(cfg.base)},
                    {"batch", cfg.batch}, {"size", cfg.size}, {"patch", cfg.patch},
                    {"seeds", cfg.seeds}, {"slicing", slicing_to_json(slicing)}};
    }
    emit(ctx, envelope("patch-eval", seed, resolved, report.to_json()), report.to_csv());
    ctx.out << "patch-eval rows=" << report.rows.size();
    for (const auto& r : report.rows) ctx.out << ' ' << fmt(r.parameter) << ':' << fmt(r.mean);
    ctx.out << '\n';
    return ok;
}

/// Meta-measure pair from "a"/"b" manifest paths or a "random" block.
std::pair<MetaMeasure, MetaMeasure> metas_from_config(const json& j, std::uint64_t seed,
                                                      std::uint64_t instance, json& resolved) {
    if (j.contains("a") || j.contains("b")) {
        const auto a = j.at("a").get<std::string>();
        const auto b = j.at("b").get<std::string>();
        resolved["a"] = a;
        resolved["b"] = b;
        return {load_meta(load_manifest(a)), load_meta(load_manifest(b))};
    }
    const json r = j.value("random", json::object());
    const int N = r.value("N", 4);
    const int n = r.value("n", 6);
    const int d = r.value("d", 3);
    if (N < 1 || n < 1 || d < 1) throw InvalidInput("random metas need N, n, d >= 1");
    resolved["random"] = {{"N", N}, {"n", n}, {"d", d}};
    auto rng = SeedSequence(seed).stream("random-metas", instance);
    MetaMeasure a = random_meta_varying(N, n, d, rng);
    MetaMeasure b = random_meta_varying(N, n, d, rng);
    return {std::move(a), std::move(b)};
}

int run_mc_report(Context& ctx, const std::string& config_path) {
    const json cfg_json = read_config(config_path);
    const std::uint64_t seed = ctx.seed_from(cfg_json);
    json resolved;
    auto [a, b] = metas_from_config(cfg_json, seed, 0, resolved);
    SlicingConfig base = slicing_from_json(cfg_json.value("slicing", json::object()),
                                           [] { SlicingConfig c; c.inner_per_outer = 10; return c; }());
    base.seed = seed;
    base.threads = ctx.common.threads;
    const auto S_list = cfg_json.value("S_list", std::vector<int>{100, 400, 1600, 6400});
    const int reps = cfg_json.value("reps", 50);
    const McReport rep = mc_convergence_report(a, b, S_list, reps, base);
    resolved["S_list"] = S_list;
    resolved["reps"] = reps;
    resolved["slicing"] = slicing_to_json(base);
    json result = {{"rows", rep.report.to_json()},
                   {"slope", rep.slope ? json(*rep.slope) : json(nullptr)},
                   {"slope_defined", rep.slope.has_value()}};
    emit(ctx, envelope("mc-report", seed, resolved, result), rep.report.to_csv());
    ctx.out << "mc-report slope=" << (rep.slope ? fmt(*rep.slope) : std::string("undefined")) << '\n';
    return ok;
}

int run_bound_check(Context& ctx, const std::string& config_path) {
    const json cfg_json = read_config(config_path);
    const std::uint64_t seed = ctx.seed_from(cfg_json);
    const int S = cfg_json.value("S", 5000);
    SlicingConfig slicing = slicing_from_json(cfg_json.value("slicing", json::object()),
                                              [] { SlicingConfig c; c.inner_per_outer = 10; c.grid = make_grid(50); return c; }());
    if (S % slicing.inner_per_outer != 0) throw InvalidInput("S must be a multiple of inner_per_outer");
    slicing.outer_S = S / slicing.inner_per_outer;
    slicing.threads = ctx.common.threads;
    const bool random = !cfg_json.contains("a");
    const int instances = random ? cfg_json.value("random", json::object()).value("instances", 20) : 1;
    json resolved;
    json results = json::array();
    int passed = 0;
    for (int i = 0; i < instances; ++i) {
        auto [a, b] = metas_from_config(cfg_json, seed, static_cast<std::uint64_t>(i), resolved);
        SlicingConfig cfg = slicing;
        cfg.seed = SeedSequence(seed).derive("bound-check", static_cast<std::uint64_t>(i));
        const BoundCheck bc = bound_check_report(a, b, cfg, S);
        passed += bc.pass() ? 1 : 0;
        results.push_back(bc.to_json());
    }
    if (random) resolved["random"]["instances"] = instances;
    resolved["S"] = S;
    resolved["slicing"] = slicing_to_json(slicing);
    const bool all = passed == instances;
    emit(ctx, envelope("bound-check", seed, resolved,
                       {{"instances", results}, {"passed", passed}, {"pass", all}}));
    ctx.out << "bound-check " << (all ? "PASS" : "FAIL") << " (" << passed << "/" << instances
            << " instances)\n";
    return all ? ok : data_error;
}

int run_gen_perlin(Context& ctx, const std::string& config_path) {
    const json cfg_json = read_config(config_path);
    const std::uint64_t seed = ctx.seed_from(cfg_json);
    if (ctx.common.out.empty()) throw UsageError("gen-perlin needs --out <directory>");
    PerlinParams params = perlin_from_json(cfg_json.value("perlin", json::object()));
    params.seed = seed;
    const int count = cfg_json.value("count", 16);
    const int height = cfg_json.value("height", 64);
    const int width = cfg_json.value("width", 64);
    const bool binary = cfg_json.value("binary", true);
    const auto images = perlin_batch(count, height, width, params, ctx.common.threads);
    const json resolved = {{"perlin", perlin_to_json(params)}, {"count", count},
                           {"height", height}, {"width", width}, {"binary", binary}};
    const std::filesystem::path dir = ctx.common.out;
    std::filesystem::create_directories(dir);
    const json env = envelope("gen-perlin", seed, resolved, json::object());
    const std::string comment = json({{"tool", kToolName}, {"version", kVersion}, {"seed", seed},
                                      {"config", resolved}}).dump();
    json items = json::array();
    for (int k = 0; k < count; ++k) {
        std::ostringstream name;
        name << "texture_" << std::setw(3) << std::setfill('0') << k << ".pgm";
        write_pgm(images[static_cast<std::size_t>(k)], dir / name.str(), binary, comment);
        items.push_back({{"path", name.str()}, {"label", "perlin"}});
    }
    json manifest = env;
    manifest["base_dir"] = ".";
    manifest["items"] = items;
    write_file(dir / "manifest.json", manifest.dump(2) + "\n");
    ctx.out << "gen-perlin wrote " << count << " images to " << dir.string() << '\n';
    return ok;
}

void add_common(CLI::App* sub, Common& c, bool with_seed = true) {
    if (with_seed) sub->add_option("--seed", c.seed, "64-bit master seed");
    sub->add_option("--out", c.out, "output file (or directory for gen-perlin)");
    sub->add_option("--threads", c.threads, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--cache-dir", c.cache_dir, "matrix cache directory (default: $META_OT_CACHE)");
    sub->add_flag("--verbose", c.verbose, "timing and cache diagnostics on stderr");
}

void add_slicing(CLI::App* sub, SlicingFlags& f) {
    sub->add_option("--outer-S", f.outer_S, "sphere directions (blocks)")->check(CLI::PositiveNumber);
    sub->add_option("--inner", f.inner, "Gaussian-process paths per block")->check(CLI::PositiveNumber);
    sub->add_option("--R", f.R, "quadrature knots")->check(CLI::PositiveNumber);
    sub->add_option("--sigma", f.sigma, "RBF bandwidth");
    sub->add_option("--kernel", f.kernel, "rbf | brownian")->check(CLI::IsMember({"rbf", "brownian"}));
    sub->add_option("--interp", f.interpolation, "linear | step")->check(CLI::IsMember({"linear", "step"}));
    sub->add_option("--grid", f.grid, "trapezoid | midpoint")->check(CLI::IsMember({"trapezoid", "midpoint"}));
}

}  // namespace

SlicingConfig slicing_from_json(const json& j, SlicingConfig c) {
    if (!j.is_object()) throw InvalidInput("slicing settings must be a JSON object");
    c.outer_S = j.value("outer_S", c.outer_S);
    c.inner_per_outer = j.value("inner_per_outer", c.inner_per_outer);
    const std::string grid_kind =
        j.value("grid", std::string(c.grid.kind == GridKind::trapezoid ? "trapezoid" : "midpoint"));
    if (grid_kind != "trapezoid" && grid_kind != "midpoint") {
        throw InvalidInput("grid must be trapezoid or midpoint");
    }
    const int R = j.value("R", static_cast<int>(c.grid.size()));
    c.grid = make_grid(R, grid_kind == "trapezoid" ? GridKind::trapezoid : GridKind::midpoint);
    std::string kernel = std::holds_alternative<RbfKernel>(c.kernel) ? "rbf" : "brownian";
    kernel = j.value("kernel", kernel);
    if (kernel == "rbf") {
        const double current = std::holds_alternative<RbfKernel>(c.kernel) ? std::get<RbfKernel>(c.kernel).sigma : 0.1;
        c.kernel = RbfKernel{j.value("sigma", current)};
    } else if (kernel == "brownian") {
        c.kernel = BrownianKernel{};
    } else {
        throw InvalidInput("kernel must be rbf or brownian");
    }
    const std::string interp =
        j.value("interpolation", std::string(c.interpolation == Interpolation::linear ? "linear" : "step"));
    if (interp != "linear" && interp != "step") throw InvalidInput("interpolation must be linear or step");
    c.interpolation = interp == "linear" ? Interpolation::linear : Interpolation::step;
    c.validate();
    return c;
}

json slicing_to_json(const SlicingConfig& c) {
    json j = {{"outer_S", c.outer_S},
              {"inner_per_outer", c.inner_per_outer},
              {"R", c.grid.size()},
              {"grid", c.grid.kind == GridKind::trapezoid ? "trapezoid" : "midpoint"},
              {"interpolation", c.interpolation == Interpolation::linear ? "linear" : "step"}};
    if (const auto* rbf = std::get_if<RbfKernel>(&c.kernel)) {
        j["kernel"] = "rbf";
        j["sigma"] = rbf->sigma;
    } else {
        j["kernel"] = "brownian";
    }
    return j;
}

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Sliced optimal-transport distances between meta-measures", kToolName};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    Common common;
    SlicingFlags slicing;
    std::string a_path, b_path, single_path, inner_name = "exact";
    double epsilon = 0.01;
    int k = 3, trials = 1000;
    double train_fraction = 0.25;

    auto* dsw_cmd = app.add_subcommand("dsw", "double-sliced WoW between two manifests");
    dsw_cmd->add_option("A", a_path, "manifest of the first meta-measure")->required();
    dsw_cmd->add_option("B", b_path, "manifest of the second meta-measure")->required();
    add_common(dsw_cmd, common);
    add_slicing(dsw_cmd, slicing);

    auto* sqw_cmd = app.add_subcommand("sqw", "sliced quantile WoW between 1-dimensional manifests");
    sqw_cmd->add_option("A", a_path)->required();
    sqw_cmd->add_option("B", b_path)->required();
    add_common(sqw_cmd, common);
    add_slicing(sqw_cmd, slicing);

    auto* wow_cmd = app.add_subcommand("wow", "exact Wasserstein-over-Wasserstein distance");
    wow_cmd->add_option("A", a_path)->required();
    wow_cmd->add_option("B", b_path)->required();
    wow_cmd->add_option("--inner", inner_name, "inner solver: exact | entropic");
    wow_cmd->add_option("--epsilon", epsilon, "entropic regularization");
    add_common(wow_cmd, common, false);

    auto* knn_cmd = app.add_subcommand("shape-knn", "KNN shape classification with SQW distances");
    knn_cmd->add_option("manifest", single_path)->required();
    knn_cmd->add_option("--k", k)->check(CLI::PositiveNumber);
    knn_cmd->add_option("--train-fraction", train_fraction);
    knn_cmd->add_option("--trials", trials)->check(CLI::PositiveNumber);
    add_common(knn_cmd, common);
    add_slicing(knn_cmd, slicing);

    struct ConfigCommand {
        const char* name;
        const char* help;
        int (*run)(Context&, const std::string&);
    };
    const ConfigCommand config_commands[] = {
        {"pointcloud-eval", "point-cloud batch sweep", run_pointcloud_eval},
        {"patch-eval", "patch-based texture batch comparison", run_patch_eval},
        {"mc-report", "Monte Carlo convergence diagnostic", run_mc_report},
        {"bound-check", "DSW <= sliced WoW <= WoW ordering check", run_bound_check},
        {"gen-perlin", "write a batch of Perlin textures as PGM", run_gen_perlin},
    };
    std::vector<CLI::App*> config_subs;
    for (const auto& c : config_commands) {
        auto* sub = app.add_subcommand(c.name, c.help);
        sub->add_option("config", single_path, "JSON configuration")->required();
        add_common(sub, common);
        config_subs.push_back(sub);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return usage_error;
    }

    Context ctx{out, err, common, nullptr};
    try {
        if (dsw_cmd->parsed()) {
            ctx.sub = dsw_cmd;
            return run_dsw(ctx, a_path, b_path, slicing);
        }
        if (sqw_cmd->parsed()) {
            ctx.sub = sqw_cmd;
            return run_sqw(ctx, a_path, b_path, slicing);
        }
        if (wow_cmd->parsed()) {
            ctx.sub = wow_cmd;
            return run_wow(ctx, a_path, b_path, inner_name, epsilon);
        }
        if (knn_cmd->parsed()) {
            ctx.sub = knn_cmd;
            // Shape classification defaults: sigma 0.01, R 10, 100 paths.
            if (knn_cmd->count("--sigma") == 0) slicing.sigma = 0.01;
            if (knn_cmd->count("--outer-S") == 0) slicing.outer_S = 1;
            return run_shape_knn(ctx, single_path, slicing, k, train_fraction, trials);
        }
        for (std::size_t i = 0; i < config_subs.size(); ++i) {
            if (config_subs[i]->parsed()) {
                ctx.sub = config_subs[i];
                return config_commands[i].run(ctx, single_path);
            }
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return usage_error;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return data_error;
    } catch (const nlohmann::json::exception& e) {
        err << "error: invalid configuration: " << e.what() << '\n';
        return data_error;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return data_error;
    }
    return usage_error;
}

}  // namespace metaot::cli
