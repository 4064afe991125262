#include "metaot/mmspace.hpp"

#include "metaot/errors.hpp"
#include "metaot/parallel.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <queue>
#include <sstream>

namespace metaot {

MMSpace::MMSpace(Eigen::MatrixXd distances, std::optional<std::string> label)
    : distances_(std::move(distances)), label_(std::move(label)) {
    const Eigen::Index n = distances_.rows();
    if (n < 1 || distances_.cols() != n) throw InvalidInput("distance matrix must be square and nonempty");
    if (!distances_.allFinite()) throw InvalidInput("distance matrix has non-finite entries");
    for (Eigen::Index i = 0; i < n; ++i) {
        if (distances_(i, i) != 0.0) throw InvalidInput("distance matrix needs a zero diagonal");
        for (Eigen::Index j = 0; j < n; ++j) {
            if (distances_(i, j) < 0.0) throw InvalidInput("negative distance");
            if (std::abs(distances_(i, j) - distances_(j, i)) > 1e-9) {
                throw InvalidInput("distance matrix is not symmetric");
            }
        }
    }
}

MMSpace euclidean_mmspace(const Eigen::MatrixXd& points) {
    const Eigen::Index n = points.rows();
    if (n < 1) throw InvalidInput("shape needs at least one point");
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double v = (points.row(i) - points.row(j)).norm();
            d(i, j) = v;
            d(j, i) = v;
        }
    return MMSpace(std::move(d));
}

MMSpace geodesic_mmspace(Eigen::Index vertices, const std::vector<Edge>& edges, unsigned threads) {
    if (vertices < 1) throw InvalidInput("graph needs at least one vertex");
    std::vector<std::vector<std::pair<Eigen::Index, double>>> adj(static_cast<std::size_t>(vertices));
    for (const auto& e : edges) {
        if (e.i < 0 || e.j < 0 || e.i >= vertices || e.j >= vertices) {
            throw InvalidInput("edge index out of range");
        }
        if (!(e.length > 0.0) || !std::isfinite(e.length)) {
            throw InvalidInput("edge lengths must be positive and finite");
        }
        adj[static_cast<std::size_t>(e.i)].emplace_back(e.j, e.length);
        adj[static_cast<std::size_t>(e.j)].emplace_back(e.i, e.length);
    }
    constexpr double inf = std::numeric_limits<double>::infinity();
    Eigen::MatrixXd d = Eigen::MatrixXd::Constant(vertices, vertices, inf);
    parallel_for(static_cast<std::size_t>(vertices), threads, [&](std::size_t src) {
        std::vector<double> dist(static_cast<std::size_t>(vertices), inf);
        using Item = std::pair<double, Eigen::Index>;
        std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
        dist[src] = 0.0;
        heap.emplace(0.0, static_cast<Eigen::Index>(src));
        while (!heap.empty()) {
            auto [du, u] = heap.top();
            heap.pop();
            if (du > dist[static_cast<std::size_t>(u)]) continue;
            for (auto [v, len] : adj[static_cast<std::size_t>(u)]) {
                const double cand = du + len;
                if (cand < dist[static_cast<std::size_t>(v)]) {
                    dist[static_cast<std::size_t>(v)] = cand;
                    heap.emplace(cand, v);
                }
            }
        }
        for (Eigen::Index v = 0; v < vertices; ++v)
            d(static_cast<Eigen::Index>(src), v) = dist[static_cast<std::size_t>(v)];
    });
    for (Eigen::Index i = 0; i < vertices; ++i)
        for (Eigen::Index j = 0; j < vertices; ++j)
            if (!std::isfinite(d(i, j))) {
                throw InvalidInput("graph is disconnected: no path between " + std::to_string(i) +
                                   " and " + std::to_string(j));
            }
    // Dijkstra from either end can differ in the last bit; keep the matrix exactly symmetric.
    for (Eigen::Index i = 0; i < vertices; ++i)
        for (Eigen::Index j = i + 1; j < vertices; ++j) d(j, i) = d(i, j);
    return MMSpace(std::move(d));
}

TriangleMesh parse_off(const std::string& text) {
    std::istringstream in(text);
    std::vector<std::string> tokens;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        std::istringstream ls(line);
        std::string tok;
        while (ls >> tok) tokens.push_back(tok);
    }
    std::size_t pos = 0;
    auto next = [&]() -> const std::string& {
        if (pos >= tokens.size()) throw InvalidInput("OFF: unexpected end of file");
        return tokens[pos++];
    };
    auto next_int = [&]() {
        const std::string& t = next();
        try {
            std::size_t used = 0;
            const long v = std::stol(t, &used);
            if (used != t.size()) throw InvalidInput("OFF: expected an integer, got '" + t + "'");
            return v;
        } catch (const std::logic_error&) {
            throw InvalidInput("OFF: expected an integer, got '" + t + "'");
        }
    };
    auto next_real = [&]() {
        const std::string& t = next();
        try {
            std::size_t used = 0;
            const double v = std::stod(t, &used);
            if (used != t.size()) throw InvalidInput("OFF: expected a number, got '" + t + "'");
            return v;
        } catch (const std::logic_error&) {
            throw InvalidInput("OFF: expected a number, got '" + t + "'");
        }
    };
    if (next() != "OFF") throw InvalidInput("OFF: missing 'OFF' header");
    const long nv = next_int();
    const long nf = next_int();
    next_int();  // edge count, unused
    if (nv < 1 || nf < 0) throw InvalidInput("OFF: invalid counts");
    TriangleMesh mesh;
    mesh.vertices.resize(nv, 3);
    for (long v = 0; v < nv; ++v)
        for (int c = 0; c < 3; ++c) mesh.vertices(v, c) = next_real();
    for (long f = 0; f < nf; ++f) {
        const long k = next_int();
        if (k < 3) throw InvalidInput("OFF: face with fewer than 3 vertices");
        std::vector<Eigen::Index> idx(static_cast<std::size_t>(k));
        for (auto& i : idx) {
            i = next_int();
            if (i < 0 || i >= nv) throw InvalidInput("OFF: face index out of range");
        }
        for (std::size_t t = 1; t + 1 < idx.size(); ++t) {
            mesh.triangles.push_back({idx[0], idx[t], idx[t + 1]});
        }
    }
    return mesh;
}

TriangleMesh read_off(const std::filesystem::path& path) {
    try {
        return parse_off(read_text_file(path));
    } catch (const InvalidInput& e) {
        throw InvalidInput(path.string() + ": " + e.what());
    }
}

std::vector<Edge> mesh_edges(const TriangleMesh& mesh) {
    std::map<std::pair<Eigen::Index, Eigen::Index>, double> unique;
    for (const auto& tri : mesh.triangles) {
        for (int k = 0; k < 3; ++k) {
            Eigen::Index a = tri[static_cast<std::size_t>(k)];
            Eigen::Index b = tri[static_cast<std::size_t>((k + 1) % 3)];
            if (a == b) continue;
            if (a > b) std::swap(a, b);
            unique.emplace(std::make_pair(a, b),
                           (mesh.vertices.row(a) - mesh.vertices.row(b)).norm());
        }
    }
    std::vector<Edge> edges;
    edges.reserve(unique.size());
    for (const auto& [key, len] : unique) {
        if (len > 0.0) edges.push_back({key.first, key.second, len});
    }
    return edges;
}

MMSpace to_mmspace(const ShapeInput& shape, unsigned threads) {
    if (const auto* cloud = std::get_if<PointCloudShape>(&shape)) {
        return euclidean_mmspace(cloud->points);
    }
    if (const auto* graph = std::get_if<GraphShape>(&shape)) {
        return geodesic_mmspace(graph->vertices, graph->edges, threads);
    }
    return std::get<MMSpace>(shape);
}

MetaMeasure local_distance_distribution(const MMSpace& space) {
    const Eigen::Index n = space.size();
    std::vector<EmpiricalMeasure> rows;
    rows.reserve(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        rows.push_back(EmpiricalMeasure::uniform(space.distances().row(i).transpose()));
    }
    return build_meta(std::move(rows));
}

DistanceEstimate sqw_shape_distance(const ShapeInput& x, const ShapeInput& y,
                                    const SlicingConfig& config) {
    return sqw(local_distance_distribution(to_mmspace(x, config.threads)),
               local_distance_distribution(to_mmspace(y, config.threads)), config);
}

Eigen::MatrixXd shape_distance_matrix(const std::vector<ShapeInput>& shapes,
                                      const SlicingConfig& config) {
    std::vector<MetaMeasure> metas;
    metas.reserve(shapes.size());
    for (const auto& s : shapes) metas.push_back(local_distance_distribution(to_mmspace(s, config.threads)));
    return sqw_distance_matrix(metas, config);
}

}  // namespace metaot
