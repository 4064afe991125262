#pragma once

#include "metaot/measures.hpp"
#include "metaot/sqw_dsw.hpp"

#include <Eigen/Dense>

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace metaot {

/// Finite metric space with the uniform measure.
class MMSpace {
public:
    explicit MMSpace(Eigen::MatrixXd distances, std::optional<std::string> label = std::nullopt);

    const Eigen::MatrixXd& distances() const { return distances_; }
    Eigen::Index size() const { return distances_.rows(); }
    const std::optional<std::string>& label() const { return label_; }

private:
    Eigen::MatrixXd distances_;
    std::optional<std::string> label_;
};

struct Edge {
    Eigen::Index i = 0;
    Eigen::Index j = 0;
    double length = 0.0;
};

struct PointCloudShape {
    Eigen::MatrixXd points;
};

struct GraphShape {
    Eigen::Index vertices = 0;
    std::vector<Edge> edges;
};

using ShapeInput = std::variant<PointCloudShape, GraphShape, MMSpace>;

MMSpace euclidean_mmspace(const Eigen::MatrixXd& points);

/// All-pairs shortest paths over an undirected weighted graph (Dijkstra from
/// every source). Throws naming an unreachable pair if the graph is disconnected.
MMSpace geodesic_mmspace(Eigen::Index vertices, const std::vector<Edge>& edges,
                         unsigned threads = 1);

struct TriangleMesh {
    Eigen::MatrixXd vertices;                     // V x 3
    std::vector<std::array<Eigen::Index, 3>> triangles;
};

/// Reads an OFF file (header "OFF", counts line, vertex lines, face lines).
/// Polygonal faces are fan-triangulated.
TriangleMesh read_off(const std::filesystem::path& path);
TriangleMesh parse_off(const std::string& text);

/// Unique undirected mesh edges with Euclidean lengths.
std::vector<Edge> mesh_edges(const TriangleMesh& mesh);

MMSpace to_mmspace(const ShapeInput& shape, unsigned threads = 1);

/// (1/N) sum_i delta_{row_i}, row_i uniform on the distances from point i to
/// every point (the zero self-distance included).
MetaMeasure local_distance_distribution(const MMSpace& space);

/// SQW between the local distance distributions of two shapes.
DistanceEstimate sqw_shape_distance(const ShapeInput& x, const ShapeInput& y,
                                    const SlicingConfig& config);

/// Pairwise SQW shape distances with shared paths.
Eigen::MatrixXd shape_distance_matrix(const std::vector<ShapeInput>& shapes,
                                      const SlicingConfig& config);

}  // namespace metaot
