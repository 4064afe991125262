#include "doctest.h"

#include "metaot/errors.hpp"
#include "metaot/measures.hpp"

#include <filesystem>
#include <fstream>

using namespace metaot;

namespace {

std::string error_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.what();
    }
    return {};
}

std::filesystem::path scratch_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("metaot_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("uniform construction gives equal weights") {
    Eigen::MatrixXd p(4, 2);
    p << 0, 0, 1, 0, 0, 1, 1, 1;
    const auto m = EmpiricalMeasure::uniform(p);
    CHECK(m.size() == 4);
    CHECK(m.dim() == 2);
    CHECK(m.is_uniform());
    for (int i = 0; i < 4; ++i) CHECK(m.weights()(i) == 0.25);
}

TEST_CASE("empirical measure rejects bad input") {
    Eigen::MatrixXd p(2, 1);
    p << 0, 1;
    CHECK_THROWS_AS(EmpiricalMeasure(p, Eigen::Vector2d(0.5, 0.6)), InvalidInput);
    CHECK_THROWS_AS(EmpiricalMeasure(p, Eigen::Vector2d(1.5, -0.5)), InvalidInput);
    CHECK_THROWS_AS(EmpiricalMeasure(p, Eigen::Vector3d(0.2, 0.3, 0.5)), InvalidInput);
    Eigen::MatrixXd bad(1, 1);
    bad << std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(EmpiricalMeasure::uniform(bad), InvalidInput);
    CHECK_THROWS_AS(EmpiricalMeasure::uniform(Eigen::MatrixXd(0, 2)), InvalidInput);
}

TEST_CASE("point cloud parsing") {
    auto two = parse_point_cloud("0,0\n1,1\n");
    CHECK(two.size() == 2);
    CHECK(two.dim() == 2);
    CHECK(two.weights()(0) == 0.5);
    CHECK(two.weights()(1) == 0.5);

    auto one = parse_point_cloud("3.5\n");
    CHECK(one.size() == 1);
    CHECK(one.dim() == 1);
    CHECK(one.weights()(0) == 1.0);
    CHECK(one.points()(0, 0) == 3.5);

    CHECK(error_of([] { parse_point_cloud("1,2\n3\n"); }).find("ragged row at line 2") != std::string::npos);
    CHECK(!error_of([] { parse_point_cloud("1,abc\n"); }).empty());
    CHECK(!error_of([] { parse_point_cloud(""); }).empty());

    auto crlf = parse_point_cloud("1,2\r\n3,4\r\n");
    CHECK(crlf.size() == 2);
    CHECK(crlf.points()(1, 1) == 4.0);
}

TEST_CASE("point cloud round trip is exact") {
    const auto dir = scratch_dir("cloud");
    Eigen::MatrixXd p(3, 2);
    p << 0.1, -2.0 / 3.0, 1e-300, 12345.678901234567, -0.0, 3.14159;
    save_point_cloud(EmpiricalMeasure::uniform(p), dir / "c.csv");
    const auto back = load_point_cloud(dir / "c.csv");
    CHECK(back.points() == p);
}

TEST_CASE("build_meta") {
    std::vector<EmpiricalMeasure> three;
    for (int k = 0; k < 3; ++k) three.push_back(EmpiricalMeasure::dirac(Eigen::Vector2d(k, 0)));
    const auto meta = build_meta(three);
    CHECK(meta.size() == 3);
    for (int k = 0; k < 3; ++k) CHECK(meta.outer_weights()(k) == doctest::Approx(1.0 / 3.0));

    std::vector<EmpiricalMeasure> mixed{EmpiricalMeasure::dirac(Eigen::Vector2d(0, 0)),
                                        EmpiricalMeasure::dirac(Eigen::Vector3d(0, 0, 0))};
    CHECK(error_of([&] { build_meta(mixed); }).find("dimension mismatch") != std::string::npos);

    CHECK(error_of([&] { build_meta(three, Eigen::Vector3d(0.5, 0.5, 0.1)); })
              .find("weights sum 1.1") != std::string::npos);
    CHECK_THROWS_AS(build_meta({}), InvalidInput);
}

TEST_CASE("second moment") {
    CHECK(second_moment(EmpiricalMeasure::dirac(Eigen::Vector2d(0, 0))) == 0.0);
    Eigen::MatrixXd p(2, 2);
    p << 1, 0, 0, 1;
    CHECK(second_moment(EmpiricalMeasure::uniform(p)) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(second_moment(EmpiricalMeasure::uniform_1d({0.0, 2.0})) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("manifest loading resolves against base_dir") {
    const auto dir = scratch_dir("manifest");
    std::filesystem::create_directories(dir / "pts");
    std::ofstream(dir / "pts" / "x.csv") << "0,0\n1,0\n";
    std::ofstream(dir / "pts" / "y.csv") << "2,2\n";
    std::ofstream(dir / "m.json")
        << R"({"base_dir": "pts", "items": [{"path": "x.csv", "label": "a"}, {"path": "y.csv", "label": "b"}]})";
    const auto manifest = load_manifest(dir / "m.json");
    REQUIRE(manifest.items.size() == 2);
    CHECK(manifest.items[1].label == "b");
    const auto meta = load_meta(manifest);
    CHECK(meta.size() == 2);
    CHECK(meta.inner(0).size() == 2);
    CHECK(meta.outer_weights()(0) == 0.5);

    std::ofstream(dir / "bad.json") << R"({"items": [{"path": "missing.csv", "label": "a"}]})";
    CHECK_THROWS_AS(load_manifest(dir / "bad.json"), Error);
    std::ofstream(dir / "broken.json") << "{not json";
    CHECK_THROWS_AS(load_manifest(dir / "broken.json"), InvalidInput);
    CHECK_THROWS_AS(load_manifest(dir / "nowhere.json"), IoError);
}
