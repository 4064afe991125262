#pragma once

#include "metaot/measures.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <vector>

namespace metaot {

/// Grayscale image with pixels in [0, 1]; pixels(row, col).
class GrayImage {
public:
    explicit GrayImage(Eigen::MatrixXd pixels);

    const Eigen::MatrixXd& pixels() const { return pixels_; }
    Eigen::Index height() const { return pixels_.rows(); }
    Eigen::Index width() const { return pixels_.cols(); }

private:
    Eigen::MatrixXd pixels_;
};

/// P2 (ASCII) or P5 (binary) PGM with maxval <= 255.
GrayImage parse_pgm(const std::string& bytes);
GrayImage read_pgm(const std::filesystem::path& path);
/// Quantizes to round(p * 255) with maxval 255. A nonempty `comment` is
/// written as a '#' line after the magic number.
std::string encode_pgm(const GrayImage& img, bool binary, const std::string& comment = {});
void write_pgm(const GrayImage& img, const std::filesystem::path& path, bool binary = true,
               const std::string& comment = {});

/// All overlapping p x p patches as points in R^{p^2}, uniform weights.
/// Patch (r, c) is row r * (w - p + 1) + c; each patch is vectorized row by row.
EmpiricalMeasure extract_patches(const GrayImage& img, int p);

struct PerlinParams {
    double scale = 100.0;
    int octaves = 6;
    double persistence = 1.0;
    double lacunarity = 2.0;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Fractal gradient noise: octave o samples 2D Perlin noise (seeded permutation
/// lattice, quintic fade) at frequency lacunarity^o / scale with amplitude
/// persistence^o. The sum is rescaled affinely to [0, 1].
GrayImage perlin_texture(Eigen::Index height, Eigen::Index width, const PerlinParams& params);

/// `count` textures; image k uses the seed derived from (params.seed, "image", k).
std::vector<GrayImage> perlin_batch(int count, Eigen::Index height, Eigen::Index width,
                                    const PerlinParams& params, unsigned threads = 1);

/// One inner patch measure per image, uniform outer weights.
MetaMeasure batch_to_meta(const std::vector<GrayImage>& images, int p);

}  // namespace metaot
