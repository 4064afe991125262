#include "metaot/cache.hpp"

#include "metaot/errors.hpp"
#include "metaot/measures.hpp"
#include "metaot/rng.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>
#include <vector>

namespace metaot {

std::string hex64(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i, v >>= 4) out[static_cast<std::size_t>(i)] = digits[v & 15];
    return out;
}

ContentHasher& ContentHasher::add(std::string_view s) {
    const auto len = static_cast<std::uint64_t>(s.size());
    h_ = fnv1a64(std::string_view(reinterpret_cast<const char*>(&len), sizeof len), h_);
    h_ = fnv1a64(s, h_);
    return *this;
}

ContentHasher& ContentHasher::add(const Eigen::MatrixXd& m) {
    const std::int64_t shape[2] = {m.rows(), m.cols()};
    h_ = fnv1a64(std::string_view(reinterpret_cast<const char*>(shape), sizeof shape), h_);
    h_ = fnv1a64(std::string_view(reinterpret_cast<const char*>(m.data()),
                                  static_cast<std::size_t>(m.size()) * sizeof(double)),
                 h_);
    return *this;
}

ContentHasher& ContentHasher::add(const Eigen::VectorXd& v) {
    return add(Eigen::MatrixXd(v));
}

MatrixCache::MatrixCache(std::filesystem::path dir, Warn warn)
    : dir_(std::move(dir)), warn_(std::move(warn)) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) throw IoError("cannot create cache directory " + dir_.string() + ": " + ec.message());
}

std::filesystem::path MatrixCache::entry_path(std::uint64_t key) const {
    return dir_ / (hex64(key) + ".cache");
}

namespace {

std::optional<Eigen::MatrixXd> parse_entry(const std::string& text, std::uint64_t key) {
    std::istringstream in(text);
    std::string magic, version, key_tag, key_hex, shape_tag;
    long rows = -1, cols = -1;
    if (!(in >> magic >> version) || magic != "metaot-cache" || version != "1") return std::nullopt;
    if (!(in >> key_tag >> key_hex) || key_tag != "key" || key_hex != hex64(key)) return std::nullopt;
    if (!(in >> shape_tag >> rows >> cols) || shape_tag != "shape" || rows < 0 || cols < 0) {
        return std::nullopt;
    }
    Eigen::MatrixXd m(rows, cols);
    std::string line;
    std::getline(in, line);
    for (long r = 0; r < rows; ++r) {
        if (!std::getline(in, line)) return std::nullopt;
        long c = 0;
        std::size_t start = 0;
        while (c < cols) {
            std::size_t comma = line.find(',', start);
            if (comma == std::string::npos) comma = line.size();
            double v = 0.0;
            const char* first = line.data() + start;
            const char* last = line.data() + comma;
            auto [ptr, ec] = std::from_chars(first, last, v);
            if (ec != std::errc() || ptr != last) return std::nullopt;
            m(r, c++) = v;
            start = comma + 1;
            if (comma == line.size()) break;
        }
        if (c != cols || start <= line.size()) return std::nullopt;
    }
    return m;
}

}  // namespace

std::optional<Eigen::MatrixXd> MatrixCache::get(std::uint64_t key) const {
    const auto path = entry_path(key);
    if (!std::filesystem::exists(path)) return std::nullopt;
    std::string text;
    try {
        text = read_text_file(path);
    } catch (const IoError&) {
        text.clear();
    }
    auto m = parse_entry(text, key);
    if (!m) {
        if (warn_) warn_("warning: discarding corrupt cache entry " + path.string());
        std::error_code ec;
        std::filesystem::remove(path, ec);
    }
    return m;
}

void MatrixCache::put(std::uint64_t key, const Eigen::MatrixXd& value) const {
    const auto path = entry_path(key);
    const auto tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw IoError("cannot write cache entry " + tmp);
        out.precision(17);
        out << "metaot-cache 1\nkey " << hex64(key) << "\nshape " << value.rows() << ' '
            << value.cols() << '\n';
        for (Eigen::Index r = 0; r < value.rows(); ++r) {
            for (Eigen::Index c = 0; c < value.cols(); ++c) {
                if (c) out << ',';
                out << value(r, c);
            }
            out << '\n';
        }
        if (!out) throw IoError("write failure on cache entry " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace metaot
