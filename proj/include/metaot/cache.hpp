#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>

namespace metaot {

/// Content-addressed on-disk store for matrices.
///
/// Entry format (text):
///   metaot-cache 1
///   key <16 hex digits>
///   shape <rows> <cols>
///   <rows lines of comma-separated values, row-major, 17 significant digits>
class MatrixCache {
public:
    using Warn = std::function<void(const std::string&)>;

    explicit MatrixCache(std::filesystem::path dir, Warn warn = {});

    /// Cached matrix, or nullopt on a miss. Corrupt entries are deleted and
    /// reported through the warning callback.
    std::optional<Eigen::MatrixXd> get(std::uint64_t key) const;
    void put(std::uint64_t key, const Eigen::MatrixXd& value) const;

    std::filesystem::path entry_path(std::uint64_t key) const;
    const std::filesystem::path& dir() const { return dir_; }

private:
    std::filesystem::path dir_;
    Warn warn_;
};

std::string hex64(std::uint64_t v);

/// Incremental FNV-1a hashing of doubles and strings, for cache keys.
class ContentHasher {
public:
    ContentHasher& add(std::string_view s);
    ContentHasher& add(const Eigen::MatrixXd& m);
    ContentHasher& add(const Eigen::VectorXd& v);
    std::uint64_t value() const { return h_; }

private:
    std::uint64_t h_ = 0xcbf29ce484222325ULL;
};

}  // namespace metaot
