#include "metaot/measures.hpp"

#include "metaot/errors.hpp"

#include "json.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace metaot {

namespace {

constexpr double kSimplexTol = 1e-12;

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

double parse_real(std::string_view token, std::size_t line) {
    token = trim(token);
    if (!token.empty() && token.front() == '+') token.remove_prefix(1);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (token.empty() || ec != std::errc() || ptr != token.data() + token.size()) {
        throw InvalidInput("non-numeric token '" + std::string(token) + "' at line " +
                           std::to_string(line));
    }
    if (!std::isfinite(value)) {
        throw InvalidInput("non-finite value at line " + std::to_string(line));
    }
    return value;
}

}  // namespace

void validate_simplex(const Eigen::VectorXd& w, const char* what) {
    if (w.size() == 0) throw InvalidInput(std::string(what) + ": empty weight vector");
    for (Eigen::Index i = 0; i < w.size(); ++i) {
        if (!std::isfinite(w[i]) || w[i] < 0.0) {
            throw InvalidInput(std::string(what) + ": negative or non-finite weight at index " +
                               std::to_string(i));
        }
    }
    const double total = w.sum();
    if (std::abs(total - 1.0) > kSimplexTol) {
        std::ostringstream msg;
        msg << what << ": weights sum " << total;
        throw InvalidInput(msg.str());
    }
}

EmpiricalMeasure::EmpiricalMeasure(Eigen::MatrixXd points, Eigen::VectorXd weights)
    : points_(std::move(points)), weights_(std::move(weights)) {
    if (points_.rows() < 1 || points_.cols() < 1) {
        throw InvalidInput("empirical measure needs n >= 1 points of dimension d >= 1");
    }
    if (weights_.size() != points_.rows()) {
        throw InvalidInput("weight count does not match point count");
    }
    if (!points_.allFinite()) throw InvalidInput("non-finite coordinate in measure");
    validate_simplex(weights_, "empirical measure");
    const double u = 1.0 / static_cast<double>(points_.rows());
    uniform_ = (weights_.array() == u).all();
}

EmpiricalMeasure EmpiricalMeasure::uniform(Eigen::MatrixXd points) {
    const Eigen::Index n = points.rows();
    if (n < 1) throw InvalidInput("empirical measure needs n >= 1 points of dimension d >= 1");
    Eigen::VectorXd w = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
    return EmpiricalMeasure(std::move(points), std::move(w));
}

EmpiricalMeasure EmpiricalMeasure::uniform_1d(const std::vector<double>& values) {
    Eigen::MatrixXd pts(static_cast<Eigen::Index>(values.size()), 1);
    for (std::size_t i = 0; i < values.size(); ++i) pts(static_cast<Eigen::Index>(i), 0) = values[i];
    return uniform(std::move(pts));
}

EmpiricalMeasure EmpiricalMeasure::dirac(const Eigen::VectorXd& x) {
    return uniform(x.transpose());
}

MetaMeasure::MetaMeasure(std::vector<EmpiricalMeasure> inner, Eigen::VectorXd outer_weights)
    : inner_(std::move(inner)), outer_weights_(std::move(outer_weights)) {
    if (inner_.empty()) throw InvalidInput("meta-measure needs at least one inner measure");
    const Eigen::Index d = inner_.front().dim();
    for (const auto& m : inner_) {
        if (m.dim() != d) throw InvalidInput("dimension mismatch");
    }
    if (outer_weights_.size() != static_cast<Eigen::Index>(inner_.size())) {
        throw InvalidInput("outer weight count does not match inner measure count");
    }
    validate_simplex(outer_weights_, "meta-measure");
}

MetaMeasure build_meta(std::vector<EmpiricalMeasure> measures,
                       std::optional<Eigen::VectorXd> outer_weights) {
    if (measures.empty()) throw InvalidInput("meta-measure needs at least one inner measure");
    const auto n = static_cast<Eigen::Index>(measures.size());
    Eigen::VectorXd w = outer_weights ? *outer_weights
                                      : Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
    return MetaMeasure(std::move(measures), std::move(w));
}

double second_moment(const EmpiricalMeasure& measure) {
    return measure.weights().dot(measure.points().rowwise().squaredNorm());
}

EmpiricalMeasure parse_point_cloud(const std::string& text) {
    std::vector<double> values;
    Eigen::Index dim = 0;
    Eigen::Index rows = 0;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string::npos) end = text.size();
        std::string_view line = trim(std::string_view(text).substr(pos, end - pos));
        pos = end + 1;
        ++line_no;
        if (line.empty()) continue;
        Eigen::Index arity = 0;
        std::size_t start = 0;
        for (;;) {
            std::size_t comma = line.find(',', start);
            std::string_view tok = line.substr(start, comma == std::string_view::npos
                                                          ? std::string_view::npos
                                                          : comma - start);
            values.push_back(parse_real(tok, line_no));
            ++arity;
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        if (rows == 0) {
            dim = arity;
        } else if (arity != dim) {
            throw InvalidInput("ragged row at line " + std::to_string(line_no));
        }
        ++rows;
    }
    if (rows == 0) throw InvalidInput("empty point cloud");
    Eigen::MatrixXd pts(rows, dim);
    for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < dim; ++c) pts(r, c) = values[static_cast<std::size_t>(r * dim + c)];
    return EmpiricalMeasure::uniform(std::move(pts));
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw IoError("read failure on " + path.string());
    return buf.str();
}

EmpiricalMeasure load_point_cloud(const std::filesystem::path& path) {
    try {
        return parse_point_cloud(read_text_file(path));
    } catch (const InvalidInput& e) {
        throw InvalidInput(path.string() + ": " + e.what());
    }
}

void save_point_cloud(const EmpiricalMeasure& measure, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << std::setprecision(17);
    const auto& p = measure.points();
    for (Eigen::Index r = 0; r < p.rows(); ++r) {
        for (Eigen::Index c = 0; c < p.cols(); ++c) {
            if (c) out << ',';
            out << p(r, c);
        }
        out << '\n';
    }
    if (!out) throw IoError("write failure on " + path.string());
}

DatasetManifest load_manifest(const std::filesystem::path& path) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_text_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInput(path.string() + ": " + e.what());
    }
    DatasetManifest m;
    const auto here = path.parent_path();
    std::filesystem::path base = j.value("base_dir", std::string("."));
    m.base_dir = base.is_absolute() ? base : here / base;
    if (!j.contains("items") || !j["items"].is_array()) {
        throw InvalidInput(path.string() + ": manifest needs an 'items' array");
    }
    for (const auto& item : j["items"]) {
        if (!item.contains("path") || !item["path"].is_string()) {
            throw InvalidInput(path.string() + ": manifest item without 'path'");
        }
        ManifestItem it;
        it.path = m.base_dir / item["path"].get<std::string>();
        it.label = item.value("label", std::string());
        if (it.label.empty()) {
            throw InvalidInput(path.string() + ": empty label for " + it.path.string());
        }
        if (!std::filesystem::exists(it.path)) {
            throw IoError("manifest item does not exist: " + it.path.string());
        }
        m.items.push_back(std::move(it));
    }
    if (m.items.empty()) throw InvalidInput(path.string() + ": manifest has no items");
    return m;
}

MetaMeasure load_meta(const DatasetManifest& manifest) {
    std::vector<EmpiricalMeasure> inner;
    inner.reserve(manifest.items.size());
    for (const auto& item : manifest.items) inner.push_back(load_point_cloud(item.path));
    return build_meta(std::move(inner));
}

}  // namespace metaot
