#include "metaot/patches.hpp"

#include "metaot/errors.hpp"
#include "metaot/parallel.hpp"
#include "metaot/rng.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <fstream>
#include <numeric>
#include <optional>
#include <sstream>

namespace metaot {

GrayImage::GrayImage(Eigen::MatrixXd pixels) : pixels_(std::move(pixels)) {
    if (pixels_.rows() < 1 || pixels_.cols() < 1) throw InvalidInput("image must be at least 1x1");
    if (!pixels_.allFinite() || (pixels_.array() < 0.0).any() || (pixels_.array() > 1.0).any()) {
        throw InvalidInput("pixel values must lie in [0, 1]");
    }
}

namespace {

class PgmHeaderReader {
public:
    explicit PgmHeaderReader(const std::string& bytes) : s_(bytes) {}

    std::string token() {
        skip_space_and_comments();
        const std::size_t start = pos_;
        while (pos_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (start == pos_) throw InvalidInput("PGM: malformed header");
        return s_.substr(start, pos_ - start);
    }

    long number() {
        const std::string t = token();
        if (!std::all_of(t.begin(), t.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
            throw InvalidInput("PGM: malformed header token '" + t + "'");
        }
        return std::stol(t);
    }

    std::size_t pos() const { return pos_; }
    void advance(std::size_t n) { pos_ += n; }

private:
    void skip_space_and_comments() {
        while (pos_ < s_.size()) {
            if (std::isspace(static_cast<unsigned char>(s_[pos_]))) {
                ++pos_;
            } else if (s_[pos_] == '#') {
                while (pos_ < s_.size() && s_[pos_] != '\n') ++pos_;
            } else {
                break;
            }
        }
    }

    const std::string& s_;
    std::size_t pos_ = 0;
};

}  // namespace

GrayImage parse_pgm(const std::string& bytes) {
    PgmHeaderReader in(bytes);
    const std::string magic = in.token();
    if (magic != "P2" && magic != "P5") throw InvalidInput("PGM: expected P2 or P5 magic");
    const long w = in.number();
    const long h = in.number();
    const long maxval = in.number();
    if (w < 1 || h < 1) throw InvalidInput("PGM: malformed header (non-positive size)");
    if (maxval < 1 || maxval > 255) throw InvalidInput("PGM: maxval must be in [1, 255]");
    Eigen::MatrixXd px(h, w);
    const double scale = static_cast<double>(maxval);
    if (magic == "P5") {
        in.advance(1);  // single whitespace after maxval
        const std::size_t need = static_cast<std::size_t>(w * h);
        if (in.pos() > bytes.size() || bytes.size() - in.pos() < need) {
            throw InvalidInput("PGM: truncated raster");
        }
        for (long r = 0; r < h; ++r)
            for (long c = 0; c < w; ++c) {
                const auto v = static_cast<unsigned char>(bytes[in.pos() + static_cast<std::size_t>(r * w + c)]);
                if (v > maxval) throw InvalidInput("PGM: raster value exceeds maxval");
                px(r, c) = v / scale;
            }
    } else {
        for (long r = 0; r < h; ++r)
            for (long c = 0; c < w; ++c) {
                long v = 0;
                try {
                    v = in.number();
                } catch (const InvalidInput&) {
                    throw InvalidInput("PGM: truncated raster");
                }
                if (v > maxval) throw InvalidInput("PGM: raster value exceeds maxval");
                px(r, c) = static_cast<double>(v) / scale;
            }
    }
    return GrayImage(std::move(px));
}

GrayImage read_pgm(const std::filesystem::path& path) {
    try {
        return parse_pgm(read_text_file(path));
    } catch (const InvalidInput& e) {
        throw InvalidInput(path.string() + ": " + e.what());
    }
}

std::string encode_pgm(const GrayImage& img, bool binary, const std::string& comment) {
    std::ostringstream out;
    out << (binary ? "P5" : "P2") << '\n';
    if (!comment.empty()) out << "# " << comment << '\n';
    out << img.width() << ' ' << img.height() << "\n255\n";
    for (Eigen::Index r = 0; r < img.height(); ++r) {
        for (Eigen::Index c = 0; c < img.width(); ++c) {
            const int v = static_cast<int>(std::lround(img.pixels()(r, c) * 255.0));
            if (binary) {
                out.put(static_cast<char>(static_cast<unsigned char>(v)));
            } else {
                out << v << (c + 1 == img.width() ? '\n' : ' ');
            }
        }
    }
    return out.str();
}

void write_pgm(const GrayImage& img, const std::filesystem::path& path, bool binary,
               const std::string& comment) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << encode_pgm(img, binary, comment);
    if (!out) throw IoError("write failure on " + path.string());
}

EmpiricalMeasure extract_patches(const GrayImage& img, int p) {
    if (p < 1 || p > std::min(img.height(), img.width())) {
        throw InvalidInput("patch size " + std::to_string(p) + " exceeds image size");
    }
    const Eigen::Index rows = img.height() - p + 1;
    const Eigen::Index cols = img.width() - p + 1;
    Eigen::MatrixXd points(rows * cols, static_cast<Eigen::Index>(p) * p);
    for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < cols; ++c) {
            const Eigen::Index idx = r * cols + c;
            for (int dr = 0; dr < p; ++dr)
                for (int dc = 0; dc < p; ++dc) points(idx, dr * p + dc) = img.pixels()(r + dr, c + dc);
        }
    return EmpiricalMeasure::uniform(std::move(points));
}

void PerlinParams::validate() const {
    if (!(scale > 0.0) || octaves < 1 || !(persistence > 0.0) || !(lacunarity > 0.0)) {
        throw InvalidInput("Perlin parameters need scale, persistence, lacunarity > 0 and octaves >= 1");
    }
}

namespace {

class GradientNoise {
public:
    explicit GradientNoise(std::mt19937_64& rng) {
        std::array<int, 256> p{};
        std::iota(p.begin(), p.end(), 0);
        // Fisher-Yates with explicit draws keeps the table identical across standard libraries.
        for (int i = 255; i > 0; --i) {
            const auto j = static_cast<int>(rng() % static_cast<std::uint64_t>(i + 1));
            std::swap(p[static_cast<std::size_t>(i)], p[static_cast<std::size_t>(j)]);
        }
        for (std::size_t i = 0; i < 512; ++i) perm_[i] = p[i & 255];
    }

    double operator()(double x, double y) const {
        const double fx = std::floor(x);
        const double fy = std::floor(y);
        const int xi = static_cast<int>(static_cast<long long>(fx) & 255);
        const int yi = static_cast<int>(static_cast<long long>(fy) & 255);
        const double dx = x - fx;
        const double dy = y - fy;
        const double u = fade(dx);
        const double v = fade(dy);
        const int aa = perm_[static_cast<std::size_t>(perm_[static_cast<std::size_t>(xi)] + yi)];
        const int ab = perm_[static_cast<std::size_t>(perm_[static_cast<std::size_t>(xi)] + yi + 1)];
        const int ba = perm_[static_cast<std::size_t>(perm_[static_cast<std::size_t>(xi + 1)] + yi)];
        const int bb = perm_[static_cast<std::size_t>(perm_[static_cast<std::size_t>(xi + 1)] + yi + 1)];
        const double x1 = lerp(u, grad(aa, dx, dy), grad(ba, dx - 1.0, dy));
        const double x2 = lerp(u, grad(ab, dx, dy - 1.0), grad(bb, dx - 1.0, dy - 1.0));
        return lerp(v, x1, x2);
    }

private:
    static double fade(double t) { return t * t * t * (t * (t * 6.0 - 15.0) + 10.0); }
    static double lerp(double t, double a, double b) { return a + t * (b - a); }
    static double grad(int hash, double x, double y) {
        switch (hash & 7) {
            case 0: return x + y;
            case 1: return -x + y;
            case 2: return x - y;
            case 3: return -x - y;
            case 4: return x;
            case 5: return -x;
            case 6: return y;
            default: return -y;
        }
    }

    std::array<int, 512> perm_{};
};

}  // namespace

GrayImage perlin_texture(Eigen::Index height, Eigen::Index width, const PerlinParams& params) {
    params.validate();
    if (height < 1 || width < 1) throw InvalidInput("texture must be at least 1x1");
    std::mt19937_64 rng(params.seed);
    const GradientNoise noise(rng);
    // Random lattice offset so that pixel (0, 0) does not sit on a lattice node.
    const double ox = static_cast<double>(rng() % 1'000'000) / 1'000'000.0 * 256.0;
    const double oy = static_cast<double>(rng() % 1'000'000) / 1'000'000.0 * 256.0;
    Eigen::MatrixXd field = Eigen::MatrixXd::Zero(height, width);
    double amplitude = 1.0;
    double frequency = 1.0 / params.scale;
    for (int o = 0; o < params.octaves; ++o) {
        for (Eigen::Index r = 0; r < height; ++r)
            for (Eigen::Index c = 0; c < width; ++c)
                field(r, c) += amplitude * noise(static_cast<double>(c) * frequency + ox,
                                                 static_cast<double>(r) * frequency + oy);
        amplitude *= params.persistence;
        frequency *= params.lacunarity;
    }
    const double lo = field.minCoeff();
    const double hi = field.maxCoeff();
    if (hi > lo) {
        field = ((field.array() - lo) / (hi - lo)).matrix();
        field = field.cwiseMax(0.0).cwiseMin(1.0);
    } else {
        field.setZero();
    }
    return GrayImage(std::move(field));
}

std::vector<GrayImage> perlin_batch(int count, Eigen::Index height, Eigen::Index width,
                                    const PerlinParams& params, unsigned threads) {
    if (count < 1) throw InvalidInput("batch needs at least one image");
    const SeedSequence seeds(params.seed);
    std::vector<std::optional<GrayImage>> slots(static_cast<std::size_t>(count));
    parallel_for(slots.size(), threads, [&](std::size_t k) {
        PerlinParams p = params;
        p.seed = seeds.derive("image", k);
        slots[k] = perlin_texture(height, width, p);
    });
    std::vector<GrayImage> out;
    out.reserve(slots.size());
    for (auto& s : slots) out.push_back(std::move(*s));
    return out;
}

MetaMeasure batch_to_meta(const std::vector<GrayImage>& images, int p) {
    if (images.empty()) throw InvalidInput("empty image batch");
    std::vector<EmpiricalMeasure> inner;
    inner.reserve(images.size());
    for (const auto& img : images) inner.push_back(extract_patches(img, p));
    return build_meta(std::move(inner));
}

}  // namespace metaot
